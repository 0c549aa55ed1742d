"""Boundary-layer solution blocks: exact solutions of the modal PDE.

Each harmonic index n contributes profile/modulation products

    phi_u = xi_u(x1) * h_u(x2),  phi_v = xi_v(x1) * h_v(x2),
    phi_w = xi_w(x1) * h_w(x2),

where family 1 uses (h_u, h_v, h_w) = (cos, sin, cos)(beta_n x2) and family 2
the complementary (sin, cos, sin); n = 0 has constant modulation 1/2 and only
family 1.  The profile triple solves a 12-parameter ODE system, but the PDE
couples the component amplitudes: per root pair, only 6 of the 12 basis
coefficients are free.  The 12x6 constraint matrix T encodes that coupling.

The 6 free parameters are then traded for the jumps of the profile values and
first derivatives across the section:

    q_c = ( xi_c(a) - xi_c(-a),  xi_c'(a) - xi_c'(-a) ),   c in {u, v, w},

by normalizing against the 2x4 edge-trace matrix R (stacked per component
into S, 6x12).  The reduced 12x6 map W = T (S T)^{-1} yields profile columns
whose jump vector is exactly the identity, which is what makes the interior
coupling solve well posed.

Everything here is expressed in the per-column scaled basis (see basis.py);
W is invariant under such scalings, so no raw hyperbolic value is ever
formed.  Direction-2 blocks (expanded along x1, profiles in x2) reuse the
same machinery with the roles of (x1, u) and (x2, v) interchanged.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .basis import DEGENERATE, HYPERBOLIC, HarmonicBasis, RootPair, harmonic_basis
from .errors import (DegenerateStateError, InvalidParameterError,
                     UnsupportedWavenumberError)
from .model import CrossSection, Material, WaveState

#: Condition-number ceiling for the jump-normalization solve.
COND_LIMIT = 1e13

#: Retained coefficient -> basis column, harmonics n >= 1:
#: (G_u1, G_u2, G_v3, G_v4, G_w1, G_w2)
_RETAINED_COLS = (0, 1, 2, 3, 0, 1)
_RETAINED_ROWS = (0, 1, 6, 7, 8, 9)

#: Same for n = 0: (G_u1, G_u2, G_v1, G_v2, G_w3, G_w4)
_RETAINED_COLS_N0 = (0, 1, 0, 1, 2, 3)
_RETAINED_ROWS_N0 = (0, 1, 4, 5, 10, 11)


def build_constraint_matrix(n: int, roots: tuple[RootPair, RootPair],
                            beta: float, state: WaveState) -> np.ndarray:
    """Raw 12x6 coefficient-coupling matrix for harmonic n >= 1.

    Row order: (G_u1..4, G_v1..4, G_w1..4); column order
    (G_u1, G_u2, G_v3, G_v4, G_w1, G_w2).  `beta` is signed: family 2 passes
    -beta_n.  The entries come from substituting the basis into the
    per-harmonic ODE system; degenerate pairs use the {1, x} limit basis.
    """
    if n < 1:
        raise InvalidParameterError(f"use the n=0 builder for index {n}")
    if state.k <= 0.0:
        raise UnsupportedWavenumberError(
            "k = 0 states are not representable; extrapolate toward K -> 0 instead")
    if beta == 0.0:
        raise InvalidParameterError("harmonics n >= 1 need beta != 0")
    pair1, pair2 = roots
    k = state.k
    T = np.zeros((12, 6))
    for row, col in zip(_RETAINED_ROWS, range(6)):
        T[row, col] = 1.0

    # Double-root pair: eliminate G_v1 (row 4) and G_v2 (row 5).
    if pair1.kind == HYPERBOLIC:
        T[4, 1] = -pair1.alpha / beta
        T[5, 0] = -pair1.alpha / beta
    elif pair1.kind == DEGENERATE:
        T[4, 1] = -1.0 / beta
    else:  # trigonometric
        T[4, 1] = -pair1.alpha / beta
        T[5, 0] = pair1.alpha / beta
    T[4, 4] = -k / beta
    T[5, 5] = -k / beta

    # Single-root pair: eliminate G_u3/G_u4 (rows 2, 3) and G_w3/G_w4 (10, 11).
    if pair2.kind == HYPERBOLIC:
        T[2, 3] = -pair2.alpha / beta
        T[3, 2] = -pair2.alpha / beta
    elif pair2.kind == DEGENERATE:
        T[2, 3] = -1.0 / beta
    else:
        T[2, 3] = -pair2.alpha / beta
        T[3, 2] = pair2.alpha / beta
    T[10, 2] = k / beta
    T[11, 3] = k / beta
    return T


def build_constraint_matrix_n0(roots: tuple[RootPair, RootPair],
                               state: WaveState) -> np.ndarray:
    """Raw 12x6 coupling matrix for the constant harmonic (n = 0, beta = 0).

    The system decouples: v rides the double-root basis alone (columns 3, 4 of
    the retained set), while u and w couple through k.  Column order
    (G_u1, G_u2, G_v1, G_v2, G_w3, G_w4).
    """
    if state.k <= 0.0:
        raise UnsupportedWavenumberError(
            "k = 0 states are not representable; extrapolate toward K -> 0 instead")
    pair1, pair2 = roots
    k = state.k
    T = np.zeros((12, 6))
    for row, col in zip(_RETAINED_ROWS_N0, range(6)):
        T[row, col] = 1.0

    # u/w on the double-root pair: eliminate G_w1 (row 8), G_w2 (row 9).
    if pair1.kind == HYPERBOLIC:
        T[8, 1] = -pair1.alpha / k
        T[9, 0] = -pair1.alpha / k
    elif pair1.kind == DEGENERATE:
        T[8, 1] = -1.0 / k
    else:
        T[8, 1] = -pair1.alpha / k
        T[9, 0] = pair1.alpha / k

    # u/w on the single-root pair: eliminate G_u3 (row 2), G_u4 (row 3).
    if pair2.kind == HYPERBOLIC:
        T[2, 5] = -pair2.alpha / k
        T[3, 4] = -pair2.alpha / k
    elif pair2.kind == DEGENERATE:
        T[2, 5] = -1.0 / k
    else:
        T[2, 5] = -pair2.alpha / k
        T[3, 4] = pair2.alpha / k
    return T


def _scale_constraint_matrix(T: np.ndarray, hb: HarmonicBasis,
                             n0: bool) -> np.ndarray:
    """Move T into scaled-coefficient space: T~[i,j] = T[i,j] d_R[j]/d_row[i].

    Couplings never mix root pairs, so the scale ratios are tanh/coth-bounded
    and safe to exponentiate.
    """
    retained = _RETAINED_COLS_N0 if n0 else _RETAINED_COLS
    log_d = hb.log_scales
    row_log = np.tile(log_d, 3)
    col_log = log_d[list(retained)]
    return T * np.exp(col_log[None, :] - row_log[:, None])


def edge_trace(hb: HarmonicBasis) -> np.ndarray:
    """2x4 jump matrix of the scaled basis: value and slope jumps across
    [-halfspan, halfspan]."""
    ends = np.array([hb.halfspan, -hb.halfspan])
    vals = hb.eval_matrix(ends, 0)
    slopes = hb.eval_matrix(ends, 1)
    return np.vstack([vals[0] - vals[1], slopes[0] - slopes[1]])


def _reduce_to_jumps(T_scaled: np.ndarray, hb: HarmonicBasis,
                     where: str) -> np.ndarray:
    """W = T (S T)^{-1} in scaled space, with the conditioning guard."""
    R = edge_trace(hb)
    S = np.zeros((6, 12))
    for c in range(3):
        S[2 * c:2 * c + 2, 4 * c:4 * c + 4] = R
    G = S @ T_scaled
    cond = np.linalg.cond(G)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise DegenerateStateError(
            f"jump normalization is singular for {where} (cond = {cond:.3e})")
    W = np.linalg.solve(G.T, T_scaled.T).T
    return W


# Modulation kinds: which trig function multiplies each displacement row.
_MOD_FAMILY1 = ("cos", "sin", "cos")
_MOD_FAMILY2 = ("sin", "cos", "sin")


def _modulation_values(kind: str, beta: float, x: np.ndarray, order: int) -> np.ndarray:
    """order-th derivative of cos/sin(beta x) via the phase-shift rule."""
    if kind == "cos":
        return beta ** order * np.cos(beta * x + order * 0.5 * math.pi)
    return beta ** order * np.sin(beta * x + order * 0.5 * math.pi)


@dataclass
class BoundaryBlock:
    """One harmonic's six boundary-solution columns, ready to evaluate.

    direction 1 blocks are expanded along x2 (profiles in x1); direction 2
    blocks are the mirrored construction, expanded along x1 with profiles in
    x2.  Columns are ordered by jump slots (u value, u slope, v value,
    v slope, w value, w slope) in local components; direction 2 applies the
    standard row and column interchanges so that physical components and the
    published unknown ordering are preserved.
    """

    direction: int
    index: int
    family: int
    basis: HarmonicBasis
    W: np.ndarray  # 12x6, scaled-coefficient space
    mod_beta: float

    def _mod_kinds(self) -> tuple[str, str, str]:
        if self.index == 0:
            return ("const", "const", "const")
        return _MOD_FAMILY1 if self.family == 1 else _MOD_FAMILY2

    def _eval_local_multi(self, prof_x: np.ndarray, mod_x: np.ndarray,
                          pairs: Sequence[tuple[int, int]]) -> list[np.ndarray]:
        """(npts, 3, 6) in local components for each (k_prof, k_mod) pair.

        Factor evaluations depend on one order only, so they are computed
        once per distinct order and reused across the requested pairs.
        """
        kinds = self._mod_kinds()
        prof_cache: dict[int, list[np.ndarray]] = {}
        mod_cache: dict[int, list[np.ndarray]] = {}
        outs = []
        for k_prof, k_mod in pairs:
            if k_prof not in prof_cache:
                P = self.basis.eval_matrix(prof_x, k_prof)
                prof_cache[k_prof] = [P @ self.W[4 * c:4 * c + 4, :]
                                      for c in range(3)]
            if k_mod not in mod_cache:
                hs = []
                for c in range(3):
                    if kinds[c] == "const":
                        h = (np.full(mod_x.shape, 0.5) if k_mod == 0
                             else np.zeros(mod_x.shape))
                    else:
                        h = _modulation_values(kinds[c], self.mod_beta,
                                               mod_x, k_mod)
                    hs.append(h)
                mod_cache[k_mod] = hs
            rows = prof_cache[k_prof]
            hs = mod_cache[k_mod]
            out = np.empty((prof_x.shape[0], 3, 6))
            for c in range(3):
                out[:, c, :] = rows[c] * hs[c][:, None]
            outs.append(out)
        return outs

    def eval_multi(self, x1: np.ndarray, x2: np.ndarray,
                   orders: Sequence[tuple[int, int]]) -> list[np.ndarray]:
        """eval() for several (k1, k2) orders, sharing factor evaluations."""
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        if self.direction == 1:
            return self._eval_local_multi(x1, x2, orders)
        local = self._eval_local_multi(x2, x1, [(k2, k1) for k1, k2 in orders])
        # physical u <- local v, physical v <- local u; swap the paired
        # unknown columns the same way.
        return [loc[:, (1, 0, 2), :][:, :, (2, 3, 0, 1, 4, 5)] for loc in local]

    def eval(self, x1: np.ndarray, x2: np.ndarray, k1: int, k2: int) -> np.ndarray:
        """Columns and their (k1, k2) mixed x1/x2 derivatives at the points.

        Returns (npts, 3, 6) in physical (u, v, w) components.
        """
        return self.eval_multi(x1, x2, [(k1, k2)])[0]

    def reduced_basis(self, x: float) -> np.ndarray:
        """3x6 profile part at one local profile coordinate."""
        P = self.basis.eval_matrix(np.array([x]), 0)
        out = np.empty((3, 6))
        for c in range(3):
            out[c] = (P @ self.W[4 * c:4 * c + 4, :])[0]
        return out

    def modulation(self, x: float, order: int = 0) -> np.ndarray:
        """Diagonal of the modulation matrix at one local expansion coordinate."""
        kinds = self._mod_kinds()
        out = np.empty(3)
        for c, kind in enumerate(kinds):
            if kind == "const":
                out[c] = 0.5 if order == 0 else 0.0
            else:
                out[c] = _modulation_values(kind, self.mod_beta,
                                            np.array([x]), order)[0]
        return out


def boundary_block(n: int, family: int, state: WaveState, mat: Material,
                   cs: CrossSection) -> BoundaryBlock:
    """Direction-1 block: expanded along x2 with beta_n = n pi / b."""
    if family not in (1, 2):
        raise InvalidParameterError(f"family must be 1 or 2, got {family}")
    if n == 0 and family != 1:
        raise InvalidParameterError("the constant harmonic has no second family")
    hb = harmonic_basis(n, expansion_span=cs.b, halfspan=cs.a, state=state, mat=mat)
    roots = (hb.pair1, hb.pair2)
    if n == 0:
        T = build_constraint_matrix_n0(roots, state)
        Ts = _scale_constraint_matrix(T, hb, n0=True)
    else:
        signed_beta = hb.beta if family == 1 else -hb.beta
        T = build_constraint_matrix(n, roots, signed_beta, state)
        Ts = _scale_constraint_matrix(T, hb, n0=False)
    W = _reduce_to_jumps(Ts, hb, where=f"direction 1, n={n}, family {family}")
    return BoundaryBlock(direction=1, index=n, family=family, basis=hb,
                         W=W, mod_beta=hb.beta)


def direction2_block(m: int, family: int, state: WaveState, mat: Material,
                     cs: CrossSection) -> BoundaryBlock:
    """Direction-2 block: expanded along x1 with alpha_m = m pi / a,
    profiles across x2."""
    if family not in (1, 2):
        raise InvalidParameterError(f"family must be 1 or 2, got {family}")
    if m == 0 and family != 1:
        raise InvalidParameterError("the constant harmonic has no second family")
    hb = harmonic_basis(m, expansion_span=cs.a, halfspan=cs.b, state=state, mat=mat)
    roots = (hb.pair1, hb.pair2)
    if m == 0:
        T = build_constraint_matrix_n0(roots, state)
        Ts = _scale_constraint_matrix(T, hb, n0=True)
    else:
        signed_beta = hb.beta if family == 1 else -hb.beta
        T = build_constraint_matrix(m, roots, signed_beta, state)
        Ts = _scale_constraint_matrix(T, hb, n0=False)
    W = _reduce_to_jumps(Ts, hb, where=f"direction 2, m={m}, family {family}")
    return BoundaryBlock(direction=2, index=m, family=family, basis=hb,
                         W=W, mod_beta=hb.beta)
