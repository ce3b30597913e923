"""Run configuration: INI text with ``[material]``, ``[solver]``, ``[problem]``.

Every key is checked; unknown sections or keys are rejected with the line
they appear on.  ``format_config(parse_config(text))`` is canonical, so
parsing its output gives back the same configuration.
"""
from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field, fields
from pathlib import Path

from .hardening import HardeningCurve
from .material import MaterialParams


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class MaterialConfig:
    young: float | None = 203000.0
    poisson: float | None = 0.3
    lam: float | None = None
    mu: float | None = None
    b: float = 0.55
    q: float = 1.47
    f0: float = 0.0
    f_c: float = 0.05
    delta: float = 3.0
    # ((E, sigma_bar), ...) table, or None when a power law is given
    hardening: tuple | None = ((0.0, 450.0),)
    hardening_power: tuple | None = None  # (sigma_y, eps0, n)

    def params(self) -> MaterialParams:
        if self.hardening_power is not None:
            curve = HardeningCurve.power_law(*self.hardening_power)
        else:
            curve = HardeningCurve.table(self.hardening)
        kw = dict(b=self.b, q=self.q, f_c=self.f_c, delta=self.delta, hardening=curve)
        if self.lam is not None:
            return MaterialParams(lam=self.lam, mu=self.mu, **kw)
        return MaterialParams.from_young(self.young, self.poisson, **kw)


@dataclass(frozen=True)
class SolverConfig:
    mode: str = "consistent"  # consistent | elastic | explicit
    integration: str = "implicit"  # point-test only: implicit | explicit
    max_iters: int = 30
    tol: float = 1e-9
    max_halvings: int = 4
    penalty: float | None = None
    gradient: bool = True
    fd_step: float = 1e-5


@dataclass(frozen=True)
class ProblemConfig:
    mesh: str = ""
    displacement: float = 0.0
    steps: int = 1
    snapshot_steps: tuple = ()
    curve: str = "curve.csv"
    snapshot: str = "snapshot_{step}.csv"
    log: str = "convergence.csv"


@dataclass(frozen=True)
class RunConfig:
    material: MaterialConfig = field(default_factory=MaterialConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    problem: ProblemConfig = field(default_factory=ProblemConfig)
    seed: int = 0
    base_dir: Path = field(default=Path("."), compare=False)

    def mesh_path(self) -> Path:
        return self.base_dir / self.problem.mesh


_SECTIONS = {"material": MaterialConfig, "solver": SolverConfig, "problem": ProblemConfig}


def _key_lines(text: str) -> dict:
    """``(section, key) -> line number`` for error reporting."""
    out, section = {}, None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        m = re.match(r"\[(.+)\]$", line)
        if m:
            section = m.group(1).strip()
            out.setdefault((section, None), n)
        elif line and line[0] not in "#;" and section is not None:
            key = re.split(r"[=:]", line, maxsplit=1)[0].strip().lower()
            out.setdefault((section, key), n)
    return out


def _parse_float(s: str) -> float:
    v = float(s)
    if not math.isfinite(v):
        raise ValueError("must be finite")
    return v


def _parse_opt_float(s: str):
    return None if s.strip().lower() in ("", "none") else _parse_float(s)


def _parse_bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("true", "yes", "1", "on"):
        return True
    if v in ("false", "no", "0", "off"):
        return False
    raise ValueError("expected true/false")


def _parse_table(s: str):
    if s.strip().lower() in ("", "none"):
        return None
    pairs = []
    for item in s.split(","):
        e, sig = item.split(":")
        pairs.append((_parse_float(e), _parse_float(sig)))
    return tuple(pairs)


def _parse_triple(s: str):
    if s.strip().lower() in ("", "none"):
        return None
    vals = tuple(_parse_float(x) for x in s.split(","))
    if len(vals) != 3:
        raise ValueError("expected 'sigma_y, eps0, n'")
    return vals


def _parse_ints(s: str):
    return tuple(int(x) for x in s.split(",") if x.strip())


_PARSERS = {
    ("material", "young"): _parse_opt_float,
    ("material", "poisson"): _parse_opt_float,
    ("material", "lam"): _parse_opt_float,
    ("material", "mu"): _parse_opt_float,
    ("material", "hardening"): _parse_table,
    ("material", "hardening_power"): _parse_triple,
    ("solver", "mode"): str.strip,
    ("solver", "integration"): str.strip,
    ("solver", "max_iters"): int,
    ("solver", "max_halvings"): int,
    ("solver", "penalty"): _parse_opt_float,
    ("solver", "gradient"): _parse_bool,
    ("problem", "mesh"): str.strip,
    ("problem", "steps"): int,
    ("problem", "snapshot_steps"): _parse_ints,
    ("problem", "curve"): str.strip,
    ("problem", "snapshot"): str.strip,
    ("problem", "log"): str.strip,
}


def parse_config(text: str, base_dir=".") -> RunConfig:
    lines = _key_lines(text)
    cp = configparser.ConfigParser(interpolation=None, default_section="__none__")
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc).splitlines()[0], getattr(exc, "lineno", None)) from None

    values = {}
    seed = 0
    for section in cp.sections():
        line = lines.get((section, None))
        if section == "run":
            for key, raw in cp.items(section):
                if key != "seed":
                    raise ConfigError(f"unknown key {key!r} in [run]", lines.get((section, key)))
                try:
                    seed = int(raw)
                except ValueError:
                    raise ConfigError("seed must be an integer", lines.get((section, key))) from None
            continue
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section [{section}]", line)
        known = {f.name for f in fields(_SECTIONS[section])}
        kw = {}
        for key, raw in cp.items(section):
            ln = lines.get((section, key))
            if key not in known:
                raise ConfigError(f"unknown key {key!r} in [{section}]", ln)
            parser = _PARSERS.get((section, key), _parse_float)
            try:
                kw[key] = parser(raw)
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"bad value for {key!r}: {exc}", ln) from None
        values[section] = kw

    mat_kw = values.get("material", {})
    if "hardening_power" in mat_kw and mat_kw["hardening_power"] is not None and "hardening" not in mat_kw:
        mat_kw["hardening"] = None
    if ("lam" in mat_kw) != ("mu" in mat_kw):
        raise ConfigError("give both lam and mu, or young and poisson", lines.get(("material", None)))
    if "lam" in mat_kw:
        mat_kw.setdefault("young", None)
        mat_kw.setdefault("poisson", None)
    cfg = RunConfig(
        MaterialConfig(**mat_kw),
        SolverConfig(**values.get("solver", {})),
        ProblemConfig(**values.get("problem", {})),
        seed,
        Path(base_dir),
    )
    validate(cfg, lines)
    return cfg


def validate(cfg: RunConfig, lines: dict | None = None) -> None:
    lines = lines or {}
    m, s, p = cfg.material, cfg.solver, cfg.problem
    if (m.hardening is None) == (m.hardening_power is None):
        raise ConfigError("give exactly one of hardening (table) or hardening_power", lines.get(("material", "hardening")))
    if m.lam is None and (m.young is None or m.poisson is None):
        raise ConfigError("elastic constants missing", lines.get(("material", None)))
    if not 0 <= m.f0 < 1:
        raise ConfigError("f0 must lie in [0, 1)", lines.get(("material", "f0")))
    try:
        m.params()
    except ValueError as exc:
        raise ConfigError(f"invalid material: {exc}", lines.get(("material", None))) from None
    if s.mode not in ("consistent", "elastic", "explicit"):
        raise ConfigError("mode must be consistent, elastic or explicit", lines.get(("solver", "mode")))
    if s.integration not in ("implicit", "explicit"):
        raise ConfigError("integration must be implicit or explicit", lines.get(("solver", "integration")))
    if s.max_iters < 1 or s.max_halvings < 0 or s.tol <= 0 or s.fd_step <= 0:
        raise ConfigError("invalid solver controls", lines.get(("solver", None)))
    if s.penalty is not None and s.penalty <= 0:
        raise ConfigError("penalty must be positive", lines.get(("solver", "penalty")))
    if p.steps < 1:
        raise ConfigError("steps must be >= 1", lines.get(("problem", "steps")))


def _fmt(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, tuple):
        if v and isinstance(v[0], tuple):
            return ", ".join(f"{e!r}:{s!r}" for e, s in v)
        return ", ".join(repr(x) for x in v)
    return str(v)


def format_config(cfg: RunConfig) -> str:
    out = []
    for name, obj in (("material", cfg.material), ("solver", cfg.solver), ("problem", cfg.problem)):
        out.append(f"[{name}]")
        for f in fields(obj):
            out.append(f"{f.name} = {_fmt(getattr(obj, f.name))}")
        out.append("")
    out.append("[run]")
    out.append(f"seed = {cfg.seed}")
    return "\n".join(out) + "\n"


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, path.parent)
