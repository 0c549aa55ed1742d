"""Global column layout and pointwise evaluation of the composite basis.

Column order: the three corner amplitudes q3 = (q3u, q3v, q3w); then the
direction-1 boundary blocks (family 1 for n = 0..N, family 2 for n = 1..N,
six jump unknowns each); then the direction-2 blocks likewise for m = 0..M.
Total 12M + 12N + 15 columns.

Every column has a definite parity signature: for each displacement
component, either the component vanishes identically or it is even/odd in x1
and in x2.  The signatures follow from the block structure alone (which trig
function modulates each component, and which profile parity a given jump slot
can excite), so they are computed symbolically at layout build time and
power the symmetry filters.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .homogeneous import BoundaryBlock, boundary_block, direction2_block
from .model import CrossSection, Material, WaveState
from .particular import ParticularBlock, particular_block, solve_internal_coefficients

#: Jump slots excitable by profiles that are even in u and odd in v, w.
_TYPE_A_SLOTS = (1, 2, 4)

#: Direction-2 column -> local jump slot (the paired-column interchange).
_DIR2_SLOT = (2, 3, 0, 1, 4, 5)

ZERO = (0, 0)

Signature = tuple[tuple[int, int], tuple[int, int], tuple[int, int]]

_CORNER_SIGS: tuple[Signature, ...] = (
    ((-1, -1), (1, 1), (1, -1)),    # q3u
    ((1, 1), (-1, -1), (-1, 1)),    # q3v
    ((1, -1), (-1, 1), (-1, -1)),   # q3w
)


@dataclass(frozen=True)
class ColumnInfo:
    kind: str                 # "corner" or "edge"
    direction: int            # 0 corner, 1, 2
    family: int               # 1 or 2 (corner: 0)
    index: int                # harmonic index (corner: component id)
    slot: int                 # jump slot 0..5 (corner: component id)
    signature: Signature


def _dir1_signature(n: int, family: int, slot: int) -> Signature:
    if n == 0:
        table: dict[int, Signature] = {
            0: ((-1, 1), ZERO, (1, 1)),
            1: ((1, 1), ZERO, (-1, 1)),
            2: (ZERO, (-1, 1), ZERO),
            3: (ZERO, (1, 1), ZERO),
            4: ((1, 1), ZERO, (-1, 1)),
            5: ((-1, 1), ZERO, (1, 1)),
        }
        return table[slot]
    if slot in _TYPE_A_SLOTS:
        prof = (1, -1, -1)
    else:
        prof = (-1, 1, 1)
    mod = (1, -1, 1) if family == 1 else (-1, 1, -1)
    return tuple((prof[c], mod[c]) for c in range(3))  # type: ignore[return-value]


def _dir2_signature(m: int, family: int, col: int) -> Signature:
    local = _dir1_signature(m, family, _DIR2_SLOT[col])
    su, sv, sw = local

    def flip(s: tuple[int, int]) -> tuple[int, int]:
        return (s[1], s[0]) if s != ZERO else ZERO

    # physical u is the local v component with the axes swapped, etc.
    return (flip(sv), flip(su), flip(sw))


class BasisLayout:
    """Static column metadata for truncation orders (M, N)."""

    def __init__(self, M: int, N: int):
        if M < 1 or N < 1:
            raise InvalidParameterError(f"truncation orders must be >= 1, got {M}, {N}")
        self.M = M
        self.N = N
        cols: list[ColumnInfo] = []
        for j in range(3):
            cols.append(ColumnInfo("corner", 0, 0, j, j, _CORNER_SIGS[j]))
        for n in range(0, N + 1):
            for s in range(6):
                cols.append(ColumnInfo("edge", 1, 1, n, s, _dir1_signature(n, 1, s)))
        for n in range(1, N + 1):
            for s in range(6):
                cols.append(ColumnInfo("edge", 1, 2, n, s, _dir1_signature(n, 2, s)))
        for m in range(0, M + 1):
            for s in range(6):
                cols.append(ColumnInfo("edge", 2, 1, m, s, _dir2_signature(m, 1, s)))
        for m in range(1, M + 1):
            for s in range(6):
                cols.append(ColumnInfo("edge", 2, 2, m, s, _dir2_signature(m, 2, s)))
        self.columns = tuple(cols)
        self._block_cols: dict[tuple[int, int, int], list[int]] = {}
        for j, c in enumerate(self.columns):
            if c.kind == "edge":
                self._block_cols.setdefault((c.direction, c.family, c.index),
                                            []).append(j)

    @property
    def ncols(self) -> int:
        return len(self.columns)

    def block_keys(self) -> list[tuple[int, int, int]]:
        return list(self._block_cols.keys())

    def block_columns(self, key: tuple[int, int, int]) -> list[int]:
        return self._block_cols[key]

    def mirror_column(self, j: int) -> int:
        """Index of the column the diagonal mirror (a = b) maps column j to.

        The mirror swaps direction 1 and 2 blocks of equal harmonic index and
        family, matching jump slots through the paired-column interchange;
        corner columns q3u and q3v swap, q3w is fixed.
        """
        c = self.columns[j]
        if c.kind == "corner":
            return {0: 1, 1: 0, 2: 2}[c.index] if c.index in (0, 1) else j
        other = 2 if c.direction == 1 else 1
        partner_slot = _DIR2_SLOT[c.slot]
        base = self._block_cols[(other, c.family, c.index)][0]
        return base + partner_slot


class FieldEvaluator:
    """Layout bound to one (Omega, K) state: evaluable columns.

    Building the evaluator performs all per-state solves (jump
    normalizations, interior coupling cells); evaluation afterwards is pure
    linear algebra.  `needed` restricts construction to the block keys that
    carry wanted columns (plus the corner, controlled by `need_corner`).
    """

    def __init__(self, layout: BasisLayout, state: WaveState, mat: Material,
                 cs: CrossSection, needed: set[tuple[int, int, int]] | None = None,
                 need_corner: bool = True):
        self.layout = layout
        self.state = state
        self.mat = mat
        self.cs = cs
        self.blocks: dict[tuple[int, int, int], BoundaryBlock] = {}
        for key in layout.block_keys():
            if needed is not None and key not in needed:
                continue
            direction, family, idx = key
            if direction == 1:
                self.blocks[key] = boundary_block(idx, family, state, mat, cs)
            else:
                self.blocks[key] = direction2_block(idx, family, state, mat, cs)
        self.corner: ParticularBlock | None = None
        if need_corner:
            coupling = solve_internal_coefficients(layout.M, layout.N, state, mat, cs)
            self.corner = particular_block(coupling, cs)

    def rows(self, x1: np.ndarray, x2: np.ndarray,
             order: tuple[int, int] = (0, 0)) -> np.ndarray:
        """(npts, 3, ncols) of column derivatives at the points."""
        return self.rows_multi(x1, x2, [order])[0]

    def rows_multi(self, x1: np.ndarray, x2: np.ndarray,
                   orders: Sequence[tuple[int, int]]) -> list[np.ndarray]:
        """rows() for several derivative orders, sharing factor evaluations.

        The mixed derivatives of a column factor into per-axis pieces, so the
        blocks deduplicate per-axis evaluations across the requested orders.
        """
        x1 = np.atleast_1d(np.asarray(x1, dtype=float))
        x2 = np.atleast_1d(np.asarray(x2, dtype=float))
        outs = [np.zeros((x1.size, 3, self.layout.ncols)) for _ in orders]
        if self.corner is not None:
            for out, (k1, k2) in zip(outs, orders):
                out[:, :, 0:3] = self.corner.eval(x1, x2, k1, k2)
        for key, block in self.blocks.items():
            cols = self.layout.block_columns(key)
            vals = block.eval_multi(x1, x2, orders)
            for out, val in zip(outs, vals):
                out[:, :, cols[0]:cols[0] + 6] = val
        return outs

    def basis_row(self, x1: float, x2: float,
                  order: tuple[int, int] = (0, 0)) -> np.ndarray:
        """3 x ncols matrix at a single point."""
        return self.rows(np.array([x1]), np.array([x2]), order)[0]

    def stress_rows(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        """(npts, 6, ncols): amplitude rows of the six stress components.

        Order: sigma_x1, sigma_x2, sigma_z, tau_x1x2, tau_x2z, tau_x1z.
        The first four ride cos(k z - omega t), the last two sin.
        """
        d10, d01, d00 = self.rows_multi(x1, x2, [(1, 0), (0, 1), (0, 0)])
        lam, mu = self.mat.lam, self.mat.mu
        P = lam + 2.0 * mu
        k = self.state.k
        U10, V10, W10 = d10[:, 0], d10[:, 1], d10[:, 2]
        U01, V01, W01 = d01[:, 0], d01[:, 1], d01[:, 2]
        U00, V00, W00 = d00[:, 0], d00[:, 1], d00[:, 2]
        out = np.empty((d00.shape[0], 6, self.layout.ncols))
        out[:, 0] = P * U10 + lam * V01 + lam * k * W00
        out[:, 1] = lam * U10 + P * V01 + lam * k * W00
        out[:, 2] = lam * U10 + lam * V01 + P * k * W00
        out[:, 3] = mu * (U01 + V10)
        out[:, 4] = mu * (W01 - k * V00)
        out[:, 5] = mu * (W10 - k * U00)
        return out

    def operator_rows(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        """(npts, 3, ncols): rows of the modal PDE operator applied columnwise.

        Exactly zero (to rounding) on homogeneous columns; on corner columns
        it equals the truncated Fourier tail of the interior correction.
        """
        d20, d02, d11, d10, d01, d00 = self.rows_multi(
            x1, x2, [(2, 0), (0, 2), (1, 1), (1, 0), (0, 1), (0, 0)])
        lam, mu = self.mat.lam, self.mat.mu
        P = lam + 2.0 * mu
        Q = lam + mu
        k = self.state.k
        rw2 = self.mat.rho * self.state.omega ** 2
        cmu = rw2 - mu * k * k
        out = np.empty_like(d00)
        out[:, 0] = (P * d20[:, 0] + mu * d02[:, 0] + cmu * d00[:, 0]
                     + Q * d11[:, 1] + Q * k * d10[:, 2])
        out[:, 1] = (Q * d11[:, 0] + mu * d20[:, 1] + P * d02[:, 1]
                     + cmu * d00[:, 1] + Q * k * d01[:, 2])
        out[:, 2] = (-Q * k * d10[:, 0] - Q * k * d01[:, 1]
                     + mu * (d20[:, 2] + d02[:, 2])
                     + (rw2 - P * k * k) * d00[:, 2])
        return out

    def operator_residual(self, q: np.ndarray, x1: float, x2: float) -> np.ndarray:
        """PDE residual 3-vector of the combined field at one interior point."""
        rows = self.operator_rows(np.array([x1]), np.array([x2]))[0]
        return rows @ q

    def displacement(self, q: np.ndarray, x1: np.ndarray, x2: np.ndarray,
                     z: float = 0.0, t: float = 0.0) -> np.ndarray:
        """(npts, 3) physical displacements with the traveling-wave phase.

        u and v carry cos(k z - omega t); w carries sin(k z - omega t).
        """
        amp = self.rows(x1, x2, (0, 0)) @ q
        phase = self.state.k * z - self.state.omega * t
        amp[:, 0] *= np.cos(phase)
        amp[:, 1] *= np.cos(phase)
        amp[:, 2] *= np.sin(phase)
        return amp
