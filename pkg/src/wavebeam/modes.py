"""Mode extraction: null vectors, section fields and plane-section metrics.

At a dispersion point the scaled collocation matrix has a near-null right
singular vector; unscaling it gives the physical column amplitudes.  The
displacement field over the cross-section follows by summing the retained
columns, and simple fits quantify how closely a low branch matches the
classical plane-section kinematics (uniform axial motion, rigid rotation,
or linear bending profile).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .collocation import CollocationSystem, Problem, assemble, symmetry_filter
from .errors import NotARootError
from .fields import FieldEvaluator
from .model import WaveState, state_from_nondimensional

RESIDUAL_LIMIT = 1e-6


@dataclass
class NullVector:
    """Physical column amplitudes of a near-singular collocation system."""

    q: np.ndarray                 # amplitudes in selector column order
    residual: float               # ||A_scaled v||_inf for the unit null vector
    sigma: float
    system: CollocationSystem


def null_vector(state: WaveState, problem: Problem,
                residual_limit: float = RESIDUAL_LIMIT) -> NullVector:
    """Extract the boundary-system null vector at a dispersion point.

    Raises NotARootError when the smallest singular direction does not
    actually annihilate the system, i.e. (K, Omega) is not on a branch.
    """
    system = assemble(state, problem)
    _, svals, vt = np.linalg.svd(system.matrix)
    v = vt[-1]
    residual = float(np.max(np.abs(system.matrix @ v)))
    if residual >= residual_limit:
        raise NotARootError(
            f"residual {residual:.3e} at K={state.K:g}, Omega={state.Omega:g} "
            f"exceeds {residual_limit:g}; not a dispersion point")
    q = system.col_scales * v
    # Fix the overall sign so repeated extractions are reproducible.
    lead = int(np.argmax(np.abs(q)))
    if q[lead] < 0.0:
        q = -q
        v = -v
    return NullVector(q=q, residual=residual, sigma=float(svals[-1]),
                      system=system)


@dataclass
class SectionMode:
    """Displacement amplitudes sampled on a rectangular section grid."""

    x1: np.ndarray                # (n1,)
    x2: np.ndarray                # (n2,)
    u: np.ndarray                 # (n1, n2) amplitude of the x1 component
    v: np.ndarray
    w: np.ndarray
    state: WaveState
    wave: str

    def component(self, name: str) -> np.ndarray:
        return {"u": self.u, "v": self.v, "w": self.w}[name]


def mode_field(state: WaveState, problem: Problem, nv: NullVector | None = None,
               grid: tuple[int, int] = (41, 41)) -> SectionMode:
    """Evaluate the section displacement field of a dispersion point.

    The field is normalised so the largest component amplitude equals one.
    """
    if nv is None:
        nv = null_vector(state, problem)
    selector = nv.system.selector
    evaluator = FieldEvaluator(problem.layout, state, problem.mat, problem.cs,
                               needed=set(selector.needed_keys),
                               need_corner=selector.need_corner)
    n1, n2 = grid
    x1 = np.linspace(-problem.cs.a, problem.cs.a, n1)
    x2 = np.linspace(-problem.cs.b, problem.cs.b, n2)
    X1, X2 = np.meshgrid(x1, x2, indexing="ij")
    rows = evaluator.rows(X1.ravel(), X2.ravel(), (0, 0))      # (pts, 3, cols)
    cols = selector.combine(rows)
    f = cols @ nv.q                                            # (pts, 3)
    scale = np.max(np.abs(f))
    if scale > 0.0:
        f = f / scale
    u, v, w = (f[:, c].reshape(n1, n2) for c in range(3))
    return SectionMode(x1=x1, x2=x2, u=u, v=v, w=w, state=state,
                       wave=problem.wave.name)


def mode_at(K: float, omega: float, problem: Problem,
            grid: tuple[int, int] = (41, 41)) -> SectionMode:
    state = state_from_nondimensional(K, omega, problem.mat, problem.cs)
    return mode_field(state, problem, grid=grid)


def plane_section_metric(mode: SectionMode) -> float:
    """Deviation of a mode from its classical plane-section kinematics.

    Longitudinal classes compare w against a uniform distribution,
    torsional classes fit a rigid in-plane rotation, bending classes fit a
    linear axial profile across the bending axis.  Small values mean the
    section translates/rotates nearly rigidly, as expected on first
    branches at long wavelength.
    """
    base = mode.wave[:-1] if mode.wave[-1] in ("s", "a") else mode.wave
    X1, X2 = np.meshgrid(mode.x1, mode.x2, indexing="ij")
    if base == "L":
        w = mode.w.ravel()
        mean = float(np.mean(np.abs(w)))
        if mean == 0.0:
            raise NotARootError("longitudinal mode has no axial displacement")
        return float(np.std(w)) / mean
    if base == "T":
        u, v = mode.u.ravel(), mode.v.ravel()
        x1, x2 = X1.ravel(), X2.ravel()
        theta = float(np.sum(v * x1 - u * x2) / np.sum(x1**2 + x2**2))
        resid = np.sqrt(np.mean((u + theta * x2) ** 2 + (v - theta * x1) ** 2))
        peak = float(np.max(np.hypot(u, v)))
        if peak == 0.0:
            raise NotARootError("torsional mode has no in-plane displacement")
        return float(resid) / peak
    if base in ("Bx1", "Bx2"):
        w = mode.w.ravel()
        axis = (X2 if base == "Bx1" else X1).ravel()
        denom = float(np.sum(axis**2))
        c = float(np.sum(w * axis)) / denom
        resid = np.sqrt(np.mean((w - c * axis) ** 2))
        peak = float(np.max(np.abs(w)))
        if peak == 0.0:
            raise NotARootError("bending mode has no axial displacement")
        return float(resid) / peak
    raise NotARootError(f"no plane-section model for wave class {mode.wave}")
