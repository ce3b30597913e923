"""Global Newton solver for plane-strain GLPD problems with the W field."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..integrate import PlasticIncrements, integrate_step
from ..material import MaterialParams, MaterialState
from ..projection import ProjectionError, ProjectionOptions
from ..tangent import SingularTangent, elastic_tangent, tangent_for_step
from ..tensors import MULT, vonmises_eq
from .element import DOF_NAMES, NDOF, WEIGHTS, gauss_operators
from .mesh import Mesh

log = logging.getLogger(__name__)

MODES = ("consistent", "elastic", "explicit")
ABS_FLOOR = 1e-8  # N


class MaterialPointError(RuntimeError):
    def __init__(self, elem: int, gp: int, cause: Exception):
        super().__init__(f"material update failed in element {elem}, Gauss point {gp}: {cause}")
        self.elem, self.gp, self.cause = elem, gp, cause


class SingularSystem(RuntimeError):
    pass


class StepFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class Constraint:
    """Prescribed value ``scale * load_level`` on one unknown of a node set."""

    node_set: str
    dof: str
    scale: float = 0.0

    def __post_init__(self):
        if self.dof not in DOF_NAMES:
            raise ValueError(f"unknown dof {self.dof!r}; expected one of {DOF_NAMES}")


def default_constraints() -> tuple[Constraint, ...]:
    """Symmetry on ``bottom`` and ``left``, prescribed ``u2`` on ``top``."""
    return (Constraint("bottom", "u2"), Constraint("left", "u1"), Constraint("top", "u2", 1.0))


@dataclass(frozen=True)
class LoadProgram:
    levels: tuple[float, ...]  # end-of-step load levels (mm)
    max_iters: int = 30
    tol: float = 1e-9
    max_halvings: int = 4

    def __post_init__(self):
        if not self.levels:
            raise ValueError("load program needs at least one step")
        prev = 0.0
        for lv in self.levels:
            if lv < prev:
                raise ValueError("load levels must be non-decreasing")
            prev = lv
        if self.max_iters < 1 or self.tol <= 0 or self.max_halvings < 0:
            raise ValueError("invalid solver controls")

    @classmethod
    def uniform(cls, total: float, n_steps: int, **kw) -> LoadProgram:
        return cls(tuple(total * (k + 1) / n_steps for k in range(n_steps)), **kw)


@dataclass
class FEModel:
    mesh: Mesh
    params: MaterialParams
    f0: float = 0.0
    penalty: float | None = None  # default 100 (lambda + 2 mu)
    constraints: tuple[Constraint, ...] = field(default_factory=default_constraints)
    loaded_set: str = "top"
    load_dof: str = "u2"
    gradient: bool = True  # False: displacement-only local model, W removed
    projection: ProjectionOptions = field(default_factory=ProjectionOptions)

    @property
    def kappa(self) -> float:
        if not self.gradient:
            return 0.0
        if self.penalty is None:
            return 100.0 * (self.params.lam + 2 * self.params.mu)
        return self.penalty


@dataclass
class IterationRecord:
    step: int
    iteration: int
    residual: float
    energy: float
    mode: str


@dataclass
class _Trial:
    states: list
    increments: list
    stress: np.ndarray
    tangent: np.ndarray
    infos: list


class Simulation:
    """Holds the converged state of a model and advances it in load."""

    def __init__(self, model: FEModel):
        self.model = model
        mesh, params = model.mesh, model.params
        if model.penalty is not None and model.penalty <= 0:
            raise ValueError("penalty must be positive")
        self.ndof = NDOF * mesh.n_nodes
        self.edofs = (NDOF * mesh.connectivity[:, :, None] + np.arange(NDOF)).reshape(mesh.n_elements, -1)
        ops = [gauss_operators(mesh.coords[c]) for c in mesh.connectivity]
        self.B = np.stack([o[0] for o in ops])  # (ne, 4, 24, 48)
        self.P = np.stack([o[1] for o in ops])  # (ne, 4, 6, 48)
        self.dA = np.stack([o[2] for o in ops])  # (ne, 4)
        self.points = np.stack([o[3] for o in ops])  # (ne, 4, 2)
        self.k_pen = model.kappa * np.einsum("eg,egji,j,egjl->eil", self.dA, self.P, MULT, self.P)
        ne = mesh.n_elements
        self._rows = np.repeat(self.edofs, self.edofs.shape[1], axis=1).ravel()
        self._cols = np.tile(self.edofs, (1, self.edofs.shape[1])).ravel()

        # constraints
        cons = {}
        for c in model.constraints:
            for n in mesh.nodes_in(c.node_set):
                cons[NDOF * int(n) + DOF_NAMES.index(c.dof)] = c.scale
        if not model.gradient:
            for n in range(mesh.n_nodes):
                for d in range(2, NDOF):
                    cons[NDOF * n + d] = 0.0
        self.cdofs = np.array(sorted(cons), dtype=np.int64)
        self.cscale = np.array([cons[d] for d in self.cdofs])
        mask = np.ones(self.ndof, dtype=bool)
        mask[self.cdofs] = False
        self.fdofs = np.nonzero(mask)[0]
        self.load_dofs = NDOF * mesh.nodes_in(model.loaded_set) + DOF_NAMES.index(model.load_dof)

        # converged state
        n_gp = 4 * ne
        state0 = MaterialState(f=model.f0)
        self.states = [state0] * n_gp
        self.increments = [PlasticIncrements()] * n_gp
        self.el_tangent = elastic_tangent(params).as_matrix()
        self.tangent = np.repeat(self.el_tangent[None], n_gp, axis=0)
        self.stress = np.zeros((n_gp, 24))
        self.u = np.zeros(self.ndof)
        self.level = 0.0
        self.residual = np.zeros(self.ndof)
        self.records: list[IterationRecord] = []

    # -- material ---------------------------------------------------------
    def _material(self, du: np.ndarray, mode: str) -> _Trial:
        model, params = self.model, self.model.params
        d_el = du[self.edofs]  # (ne, 48)
        strains = np.einsum("egij,ej->egi", self.B, d_el).reshape(-1, 24)
        n_gp = strains.shape[0]
        states, incs, infos = [None] * n_gp, [None] * n_gp, [None] * n_gp
        stress = np.empty((n_gp, 24))
        tangent = np.empty((n_gp, 24, 24))
        for g in range(n_gp):
            d_eps = strains[g, :6]
            d_gw = strains[g, 6:].reshape(6, 3) if model.gradient else np.zeros((6, 3))
            st = self.states[g]
            try:
                new, info = integrate_step(
                    st, d_eps, d_gw, params, model.projection,
                    mode="explicit" if mode == "explicit" else "implicit",
                    previous=self.increments[g],
                )
            except (ProjectionError, ValueError) as exc:
                raise MaterialPointError(int(self.model.mesh.elem_ids[g // 4]), g % 4 + 1, exc) from exc
            states[g], infos[g] = new, info
            incs[g] = info.increments
            if mode == "explicit":
                stress[g, :6] = info.sigma_explicit
                stress[g, 6:] = info.moment_explicit.ravel()
                tangent[g] = self.el_tangent
            else:
                stress[g, :6] = new.sigma
                stress[g, 6:] = new.moment.ravel()
                if mode == "consistent" and info.plastic:
                    try:
                        tangent[g] = tangent_for_step(info, st, params).as_matrix()
                    except SingularTangent:
                        tangent[g] = self.el_tangent
                else:
                    tangent[g] = self.el_tangent
        return _Trial(states, incs, stress, tangent, infos)

    # -- assembly ---------------------------------------------------------
    def internal_forces(self, u: np.ndarray, stress: np.ndarray) -> np.ndarray:
        ne = self.model.mesh.n_elements
        ws = (stress * WEIGHTS).reshape(ne, 4, 24)
        d_el = u[self.edofs]
        fe = np.einsum("eg,egji,egj->ei", self.dA, self.B, ws) + np.einsum("eij,ej->ei", self.k_pen, d_el)
        r = np.zeros(self.ndof)
        np.add.at(r, self.edofs, fe)
        return r

    def stiffness(self, tangent: np.ndarray) -> sp.csr_matrix:
        ne = self.model.mesh.n_elements
        wt = (WEIGHTS[None, :, None] * tangent).reshape(ne, 4, 24, 24)
        tb = np.einsum("egjk,egkl->egjl", wt, self.B)
        ke = np.einsum("eg,egji,egjl->eil", self.dA, self.B, tb) + self.k_pen
        return sp.coo_matrix((ke.ravel(), (self._rows, self._cols)), shape=(self.ndof, self.ndof)).tocsr()

    def _solve(self, k: sp.csr_matrix, rhs: np.ndarray) -> np.ndarray:
        kff = k[self.fdofs][:, self.fdofs].tocsc()
        if kff.shape[0] == 0:
            return np.zeros(0)
        try:
            lu = spla.splu(kff)
        except RuntimeError as exc:
            raise self._singular(int(np.argmin(np.abs(kff.diagonal()))), str(exc)) from exc
        x = lu.solve(rhs)
        if not np.all(np.isfinite(x)):
            raise SingularSystem("linear solve produced non-finite values")
        # unsupported modes leave round-off pivots, not exact zeros; a load on
        # such a mode cannot be balanced, which the solve residual exposes
        scale = np.linalg.norm(rhs)
        miss = np.linalg.norm(kff @ x - rhs)
        if scale > 0 and miss > 1e-6 * scale:
            raise self._singular(int(np.argmax(np.abs(x))), f"solve residual {miss / scale:.1e}")
        return x

    def _singular(self, column: int, why: str) -> SingularSystem:
        bad = int(self.fdofs[column])
        node = int(self.model.mesh.node_ids[bad // NDOF])
        return SingularSystem(f"singular system near node {node} dof {DOF_NAMES[bad % NDOF]}: {why}")

    def evaluate(self, u: np.ndarray, mode: str = "consistent"):
        """Residual and stiffness at total unknowns ``u`` from the converged state."""
        trial = self._material(u - self.u, mode)
        return self.internal_forces(u, trial.stress), self.stiffness(trial.tangent), trial

    def reaction(self, r: np.ndarray | None = None) -> float:
        r = self.residual if r is None else r
        return float(r[self.load_dofs].sum())

    # -- Newton -----------------------------------------------------------
    def _newton(self, target: float, mode: str, step: int, program: LoadProgram):
        """Newton iterations from the converged state to ``target``.

        Returns ``(trial, u, residual, iterations, records)`` or raises
        :class:`StepFailure`.
        """
        free = self.fdofs
        records = []
        du_c = self.cscale * target - self.u[self.cdofs]
        k = self.stiffness(self.tangent)
        lifted = self.residual[free] + k[free][:, self.cdofs] @ du_c
        r0 = float(np.linalg.norm(lifted))
        records.append(IterationRecord(step, 0, r0, 0.0, mode))
        u = self.u.copy()
        u[self.cdofs] += du_c
        delta = self._solve(k, -lifted)
        u[free] += delta
        tol_abs = max(program.tol * r0, ABS_FLOOR)
        history = [r0]
        for it in range(1, program.max_iters + 1):
            try:
                trial = self._material(u - self.u, mode)
            except MaterialPointError as exc:
                raise StepFailure(str(exc)) from exc
            r = self.internal_forces(u, trial.stress)
            rn = float(np.linalg.norm(r[free]))
            energy = abs(float(delta @ r[free]))
            records.append(IterationRecord(step, it, rn, energy, mode))
            log.debug("step %d iter %d residual %.3e", step, it, rn)
            if not math.isfinite(rn):
                raise StepFailure("non-finite residual")
            if rn <= tol_abs:
                return trial, u, r, it, records
            history.append(rn)
            if len(history) >= 4 and history[-1] > history[-2] > history[-3] > history[-4]:
                raise StepFailure(f"residual grew three iterations running (step {step})")
            k = self.stiffness(trial.tangent)
            delta = self._solve(k, -r[free])
            u[free] += delta
        raise StepFailure(f"no convergence in {program.max_iters} iterations (step {step})")

    def advance(self, target: float, mode: str, step: int, program: LoadProgram, depth: int = 0) -> int:
        """Move to load level ``target``, halving the increment on failure.

        Returns the number of Newton iterations spent (successful attempts).
        """
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        try:
            trial, u, r, iters, records = self._newton(target, mode, step, program)
        except (StepFailure, SingularSystem) as exc:
            if depth >= program.max_halvings:
                raise StepFailure(f"step {step} failed after {depth} halvings: {exc}") from exc
            log.info("step %d: halving increment (%s)", step, exc)
            mid = 0.5 * (self.level + target)
            return self.advance(mid, mode, step, program, depth + 1) + self.advance(
                target, mode, step, program, depth + 1
            )
        self.records.extend(records)
        self.states, self.increments = trial.states, trial.increments
        self.stress, self.tangent = trial.stress, trial.tangent
        if mode == "explicit":
            # equilibrium used the frozen increments; store the projected state
            self.stress = np.array([np.concatenate([s.sigma, s.moment.ravel()]) for s in trial.states])
        self.u, self.residual, self.level = u, r, target
        return iters

    def snapshot(self) -> list[tuple]:
        rows = []
        for g, st in enumerate(self.states):
            e, gp = divmod(g, 4)
            x, y = self.points[e, gp]
            s = st.sigma
            rows.append(
                (int(self.model.mesh.elem_ids[e]), gp + 1, x, y, s[0], s[1], s[2], s[3], st.f, st.E, vonmises_eq(s))
            )
        return rows


@dataclass
class SimulationResult:
    curve: list  # (step, displacement, force, iterations, mode)
    snapshots: dict  # step -> rows
    records: list  # IterationRecord
    completed: bool = True
    failure: str | None = None


def run_simulation(model: FEModel, program: LoadProgram, mode: str = "consistent", snapshot_steps=()) -> SimulationResult:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    sim = Simulation(model)
    curve, snaps = [], {}
    want = set(snapshot_steps)
    if 0 in want:
        snaps[0] = sim.snapshot()
    for k, level in enumerate(program.levels, start=1):
        try:
            iters = sim.advance(level, mode, k, program)
        except StepFailure as exc:
            log.warning("simulation stopped: %s", exc)
            return SimulationResult(curve, snaps, sim.records, False, str(exc))
        curve.append((k, level, sim.reaction(), iters, mode))
        if k in want:
            snaps[k] = sim.snapshot()
    return SimulationResult(curve, snaps, sim.records)
