"""Command-line entry points: ``point-test``, ``tangent-check``, ``simulate``.

Exit codes: 0 success, 1 numerical failure, 2 input error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, load_config
from .corpus import CounterRng, random_plastic_case
from .fe.mesh import MeshFormatError, read_mesh
from .fe.solver import FEModel, LoadProgram, MaterialPointError, run_simulation
from .integrate import integrate_step
from .material import MaterialState
from .output import (
    CURVE_HEADER,
    LOG_HEADER,
    POINT_HEADER,
    SNAPSHOT_HEADER,
    TANGENT_HEADER,
    write_csv,
)
from .projection import ProjectionError
from .strainpath import PathFormatError, read_path
from .tangent import SingularTangent, fd_tangent, tangent_for_step, tangent_report
from .tensors import deviator_mean, vonmises_eq

log = logging.getLogger("glpd")

OK, NUMERICAL, INPUT = 0, 1, 2
TANGENT_LIMIT = 1e-4


class InputError(Exception):
    pass


def _load(path) -> RunConfig:
    try:
        return load_config(path)
    except ConfigError as exc:
        raise InputError(f"{path}: {exc}") from None


def point_test(cfg: RunConfig, path_file, out) -> int:
    try:
        path = read_path(path_file)
    except PathFormatError as exc:
        raise InputError(f"{path_file}: {exc}") from None
    params = cfg.material.params()
    mode = cfg.solver.integration
    state = MaterialState(f=cfg.material.f0)
    previous = None
    rows, failures = [], 0
    for k, (d_eps, d_gradw) in enumerate(path.increments(), start=1):
        try:
            new, info = integrate_step(state, d_eps, d_gradw, params, mode=mode, previous=previous)
        except ProjectionError as exc:
            log.warning("step %d: projection failed: %s", k, exc)
            failures += 1
            rows.append((k,) + (float("nan"),) * 11 + (0, "failed"))
            continue
        state, previous = new, info.increments
        _, sm = deviator_mean(state.sigma)
        its = info.solution.iterations["outer"] if info.plastic else 0
        status = "material-failure" if info.failed else ("plastic" if info.plastic else "elastic")
        # yield function at the start-of-step porosity, as used by the update
        rows.append((k, *state.sigma, vonmises_eq(state.sigma), sm, state.f, state.E, info.yield_value, its, status))
    write_csv(out, POINT_HEADER, rows)
    return NUMERICAL if failures else OK


def tangent_check(cfg: RunConfig, n_cases: int, seed: int, out) -> int:
    if n_cases < 1:
        raise InputError("--cases must be at least 1")
    rng = CounterRng(seed)
    rows, worst = [], 0.0
    for i in range(n_cases):
        try:
            case = random_plastic_case(rng)
        except RuntimeError as exc:
            log.error("case %d: %s", i, exc)
            write_csv(out, TANGENT_HEADER, rows)
            return NUMERICAL
        try:
            _, info = integrate_step(case.state, case.d_eps, case.d_gradw, case.params)
            analytic = tangent_for_step(info, case.state, case.params)
            fd, fd_info = fd_tangent(case.state, case.d_eps, case.d_gradw, case.params, cfg.solver.fd_step)
        except (ProjectionError, SingularTangent) as exc:
            log.error("case %d: %s", i, exc)
            rows.append((i, "all", float("nan"), float("nan")))
            worst = float("inf")
            continue
        rep = tangent_report(analytic, fd, fd_info["step_eps"], fd_info["unreliable"])
        for name, err in rep.errors.items():
            rows.append((i, name, err, fd_info["step_eps"]))
            worst = max(worst, err)
    write_csv(out, TANGENT_HEADER, rows)
    log.info("worst block error %.3e", worst)
    return OK if worst <= TANGENT_LIMIT else NUMERICAL


def simulate(cfg: RunConfig, mode: str | None, out_dir) -> int:
    mesh_path = cfg.mesh_path()
    if not cfg.problem.mesh:
        raise InputError("config has no [problem] mesh")
    try:
        mesh = read_mesh(mesh_path)
    except (OSError, MeshFormatError) as exc:
        raise InputError(f"{mesh_path}: {exc}") from None
    s, p = cfg.solver, cfg.problem
    mode = mode or s.mode
    try:
        model = FEModel(mesh, cfg.material.params(), cfg.material.f0, penalty=s.penalty, gradient=s.gradient)
        program = LoadProgram.uniform(p.displacement, p.steps, max_iters=s.max_iters, tol=s.tol, max_halvings=s.max_halvings)
    except (ValueError, KeyError) as exc:
        raise InputError(str(exc)) from None
    try:
        result = run_simulation(model, program, mode, p.snapshot_steps)
    except MaterialPointError as exc:
        log.error("%s", exc)
        return NUMERICAL
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_csv(out_dir / p.curve, CURVE_HEADER, result.curve)
    for step, rows in sorted(result.snapshots.items()):
        write_csv(out_dir / p.snapshot.format(step=step), SNAPSHOT_HEADER, rows)
    write_csv(out_dir / p.log, LOG_HEADER, [(r.step, r.iteration, r.residual, r.mode) for r in result.records])
    if not result.completed:
        (out_dir / "FAILED").write_text(result.failure + "\n")
        log.error("simulation incomplete: %s", result.failure)
        return NUMERICAL
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="glpd", description="Second-gradient porous plasticity tools")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    pt = sub.add_parser("point-test", help="drive one material point along a strain path")
    pt.add_argument("--config", required=True)
    pt.add_argument("--path", required=True)
    pt.add_argument("--out", required=True)

    tc = sub.add_parser("tangent-check", help="compare the analytic tangent with finite differences")
    tc.add_argument("--config", required=True)
    tc.add_argument("--cases", type=int, default=50)
    tc.add_argument("--seed", type=int, default=None, help="defaults to the config seed")
    tc.add_argument("--out", required=True)

    sm = sub.add_parser("simulate", help="run a plane-strain finite-element simulation")
    sm.add_argument("--config", required=True)
    sm.add_argument("--mode", choices=("consistent", "elastic", "explicit"), default=None)
    sm.add_argument("--out", required=True)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return INPUT if exc.code else OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = _load(args.config)
        if args.command == "point-test":
            return point_test(cfg, args.path, args.out)
        if args.command == "tangent-check":
            seed = cfg.seed if args.seed is None else args.seed
            return tangent_check(cfg, args.cases, seed, args.out)
        return simulate(cfg, args.mode, args.out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT


if __name__ == "__main__":
    sys.exit(main())
