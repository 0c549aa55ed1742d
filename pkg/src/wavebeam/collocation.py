"""Boundary conditions, symmetry classes and the collocation system.

Edge conditions are imposed on the four lines x1 = +/-a, x2 = +/-b: clamped
edges pin all three displacement amplitudes, free edges annul the traction
triple (normal stress and the two shear tractions of the edge).  The
cross-section symmetries decompose the spectrum into wave classes; each
class keeps only the basis columns whose parity signatures match, and only
needs boundary rows on one representative edge per symmetry orbit.

The characteristic function of a class is the smallest singular value of the
column-scaled collocation matrix.  Parity folds mirror-image points onto one
half of each edge, and the fold is sized so the default system is square;
dispersion points are the Omega values where the smallest singular value
drops to the noise floor.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import svdvals

from .errors import ConfigError, InvalidParameterError
from .fields import BasisLayout, FieldEvaluator, Signature, ZERO
from .model import CrossSection, Material, WaveState

CLAMPED = "C"
FREE = "F"

#: Edge order used by the four-letter boundary string.
_EDGE_ORDER = ((1, +1), (2, +1), (1, -1), (2, -1))

#: Required (x1, x2) parities per component for the axis wave classes.
_CLASS_PARITIES: dict[str, Signature] = {
    "L": ((-1, 1), (1, -1), (1, 1)),
    "T": ((1, -1), (-1, 1), (-1, -1)),
    "Bx1": ((-1, -1), (1, 1), (1, -1)),
    "Bx2": ((1, 1), (-1, -1), (-1, 1)),
}

#: x2 parities per component for singly symmetric layouts (clamped/free mix
#: on the x1 edges): the four classes merge pairwise.
_CLASS_PARITIES_X2: dict[str, tuple[int, int, int]] = {
    "L": (1, -1, 1),
    "Bx1": (-1, 1, -1),
}

_WAVE_NAMES = ("L", "T", "Bx1", "Bx2", "Ls", "La", "Ts", "Ta")


@dataclass(frozen=True)
class Edge:
    axis: int     # 1: the line x1 = side*a;  2: the line x2 = side*b
    side: int
    cond: str

    def describe(self) -> str:
        coord = "x1" if self.axis == 1 else "x2"
        sign = "+" if self.side > 0 else "-"
        return f"{coord}={sign}{'a' if self.axis == 1 else 'b'} ({self.cond})"


@dataclass(frozen=True)
class BoundaryLayout:
    """The four edge conditions, ordered (x1=+a, x2=+b, x1=-a, x2=-b)."""

    conds: tuple[str, str, str, str]

    @classmethod
    def parse(cls, text: str) -> "BoundaryLayout":
        text = text.strip().upper()
        if len(text) != 4 or any(c not in (CLAMPED, FREE) for c in text):
            raise ConfigError(
                f"boundary layout must be four letters from C/F, got {text!r}")
        return cls(conds=tuple(text))  # type: ignore[arg-type]

    def edge(self, axis: int, side: int) -> Edge:
        pos = _EDGE_ORDER.index((axis, side))
        return Edge(axis=axis, side=side, cond=self.conds[pos])

    @property
    def symmetric_x1_axis(self) -> bool:
        """Invariant under x2 -> -x2 (the x2 edges match)."""
        return self.conds[1] == self.conds[3]

    @property
    def symmetric_x2_axis(self) -> bool:
        """Invariant under x1 -> -x1 (the x1 edges match)."""
        return self.conds[0] == self.conds[2]

    @property
    def all_free(self) -> bool:
        return all(c == FREE for c in self.conds)

    @property
    def diagonal_symmetric(self) -> bool:
        """Invariant under the mirror (x1, x2) -> (x2, x1) for a = b."""
        return self.conds[0] == self.conds[1] and self.conds[2] == self.conds[3]

    def __str__(self) -> str:
        return "".join(self.conds)


@dataclass(frozen=True)
class WaveClass:
    """Named symmetry class, e.g. L, Ta, Bx1."""

    name: str

    def __post_init__(self) -> None:
        if self.name not in _WAVE_NAMES:
            raise ConfigError(
                f"unknown wave class {self.name!r}; choose from {_WAVE_NAMES}")

    @property
    def base(self) -> str:
        return self.name[:-1] if self.name[-1] in ("s", "a") else self.name

    @property
    def diagonal(self) -> str | None:
        return self.name[-1] if self.name[-1] in ("s", "a") else None


@dataclass
class Problem:
    """Everything fixed across a scan: geometry, material, truncation, class."""

    mat: Material
    cs: CrossSection
    layout: BasisLayout
    bc: BoundaryLayout
    wave: WaveClass
    oversample: float = 2.0

    def __post_init__(self) -> None:
        validate_class(self.bc, self.wave, self.cs)


def validate_class(bc: BoundaryLayout, wave: WaveClass, cs: CrossSection) -> None:
    if wave.diagonal is not None:
        if not bc.all_free:
            raise ConfigError(
                f"the diagonal split {wave.name} needs the all-free boundary, got {bc}")
        if abs(cs.a - cs.b) > 1e-12 * max(cs.a, cs.b):
            raise ConfigError(
                f"the diagonal split {wave.name} needs a square section, "
                f"got a/b = {cs.aspect:g}")
        if wave.base not in ("L", "T"):
            raise ConfigError(f"no diagonal split exists for {wave.base}")
        return
    if bc.symmetric_x1_axis and bc.symmetric_x2_axis:
        return
    if bc.symmetric_x1_axis:
        if wave.name not in _CLASS_PARITIES_X2:
            raise ConfigError(
                f"layout {bc} is symmetric about the x1-axis only; "
                f"wave classes are L and Bx1, got {wave.name}")
        return
    raise ConfigError(
        f"layout {bc} has no usable symmetry; wave decomposition unavailable")


def _matches(sig: Signature, required: Signature | tuple[int, int, int],
             x2_only: bool) -> bool:
    for c in range(3):
        comp = sig[c]
        if comp == ZERO:
            continue
        if x2_only:
            if comp[1] != required[c]:  # type: ignore[index]
                return False
        else:
            if comp != required[c]:
                return False
    return True


@dataclass
class ColumnSelector:
    """Filtered columns for one wave class.

    base/partner index into the full layout; a diagonal class pairs each
    direction-1 column with its mirror image (partner == base for self-paired
    columns), combined with `sign`.
    """

    base: np.ndarray
    partner: np.ndarray
    sign: float
    active_edges: tuple[Edge, ...]
    needed_keys: frozenset
    need_corner: bool

    @property
    def count(self) -> int:
        return int(self.base.size)

    def combine(self, full_rows: np.ndarray) -> np.ndarray:
        """(..., ncols_layout) -> (..., count) applying the pairing."""
        out = full_rows[..., self.base].copy()
        paired = self.partner != self.base
        if np.any(paired):
            out[..., paired] += self.sign * full_rows[..., self.partner[paired]]
        return out


def symmetry_filter(layout: BasisLayout, bc: BoundaryLayout, wave: WaveClass,
                    cs: CrossSection) -> ColumnSelector:
    """Select the columns and representative edges of one wave class."""
    validate_class(bc, wave, cs)
    x2_only = not bc.symmetric_x2_axis
    required = (_CLASS_PARITIES_X2[wave.name] if x2_only
                else _CLASS_PARITIES[wave.base])

    keep: list[int] = []
    for j, col in enumerate(layout.columns):
        if col.kind == "corner" and not bc.all_free:
            # A clamped edge pins the section corners, so the corner
            # discontinuity amplitudes cannot participate.
            continue
        if _matches(col.signature, required, x2_only):
            keep.append(j)

    if wave.diagonal is None:
        base = np.array(keep, dtype=int)
        partner = base.copy()
        sign = 1.0
        edges = _representative_edges(bc, diagonal=False)
    else:
        sign = 1.0 if wave.diagonal == "s" else -1.0
        base_list: list[int] = []
        partner_list: list[int] = []
        for j in keep:
            col = layout.columns[j]
            if col.kind == "corner":
                # q3w is its own mirror image: symmetric class only.
                if wave.diagonal == "s":
                    base_list.append(j)
                    partner_list.append(j)
                continue
            if col.direction == 2:
                continue  # represented through its direction-1 partner
            base_list.append(j)
            partner_list.append(layout.mirror_column(j))
        base = np.array(base_list, dtype=int)
        partner = np.array(partner_list, dtype=int)
        edges = _representative_edges(bc, diagonal=True)

    needed = frozenset(
        (layout.columns[j].direction, layout.columns[j].family,
         layout.columns[j].index)
        for j in np.concatenate([base, partner])
        if layout.columns[j].kind == "edge")
    need_corner = any(layout.columns[j].kind == "corner" for j in base)
    return ColumnSelector(base=base, partner=partner, sign=sign,
                          active_edges=edges, needed_keys=needed,
                          need_corner=need_corner)


def _representative_edges(bc: BoundaryLayout, diagonal: bool) -> tuple[Edge, ...]:
    if diagonal:
        return (bc.edge(1, +1),)
    if bc.symmetric_x2_axis:
        return (bc.edge(1, +1), bc.edge(2, +1))
    # symmetric about the x1-axis only: both x1 edges are distinct orbits.
    return (bc.edge(1, +1), bc.edge(1, -1), bc.edge(2, +1))


def collocation_points(edge: Edge, count: int, cs: CrossSection,
                       half: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Half-offset uniform points along one edge; corners never included.

    With ``half=True`` the points cover only the positive half of the edge.
    Wave classes fix the parity of every boundary trace along the edge
    coordinate, so conditions at mirror-image points are identical up to
    sign; sampling one half keeps each condition exactly once.
    """
    if count < 1:
        raise InvalidParameterError(f"need at least one collocation point, got {count}")
    if edge.axis == 1:
        span = cs.b
        fixed = edge.side * cs.a
    else:
        span = cs.a
        fixed = edge.side * cs.b
    j = np.arange(1, count + 1)
    if half:
        running = (j - 0.5) * (span / count)
    else:
        running = -span + (j - 0.5) * (2.0 * span / count)
    if edge.axis == 1:
        return np.full(count, fixed), running
    return running, np.full(count, fixed)


def bc_rows(edge: Edge, x1: float, x2: float, evaluator: FieldEvaluator) -> np.ndarray:
    """Three boundary-condition rows for one point of one edge."""
    cs = evaluator.cs
    on_x1_edge = math.isclose(abs(x1), cs.a, rel_tol=0.0, abs_tol=1e-12 * cs.a)
    on_x2_edge = math.isclose(abs(x2), cs.b, rel_tol=0.0, abs_tol=1e-12 * cs.b)
    if on_x1_edge and on_x2_edge:
        raise InvalidParameterError(
            f"({x1}, {x2}) is a section corner; boundary rows are undefined there")
    pts = (np.array([x1]), np.array([x2]))
    if edge.cond == CLAMPED:
        return evaluator.rows(*pts, (0, 0))[0]
    stress = evaluator.stress_rows(*pts)[0]
    rows = (0, 3, 5) if edge.axis == 1 else (1, 3, 4)
    return stress[rows, :]


#: Content of each boundary row as (component, d1, d2, k_scaled) terms.
#: Free-edge rows follow the stress row order used below: the normal
#: stress, the in-plane shear and the axial shear of the edge.
_FREE_ROW_TERMS = {
    1: (((0, 1, 0, False), (1, 0, 1, False), (2, 0, 0, True)),
        ((0, 0, 1, False), (1, 1, 0, False)),
        ((2, 1, 0, False), (0, 0, 0, True))),
    2: (((1, 0, 1, False), (0, 1, 0, False), (2, 0, 0, True)),
        ((0, 0, 1, False), (1, 1, 0, False)),
        ((2, 0, 1, False), (1, 0, 0, True))),
}
_CLAMPED_ROW_TERMS = (((0, 0, 0, False),), ((1, 0, 0, False),), ((2, 0, 0, False),))


@dataclass(frozen=True)
class BlockPlan:
    """Point budget for one boundary row type on one edge."""

    edge: Edge
    row: int                 # position within the edge's three conditions
    points: int
    half: bool               # points on the positive half of the edge
    capacity: int | None     # None: unbounded trace content


def _component_parities(bc: BoundaryLayout, wave: WaveClass) -> tuple:
    """(x1, x2) parity per displacement component; None when unconstrained."""
    if bc.symmetric_x2_axis:
        sig = _CLASS_PARITIES[wave.base]
        return tuple((p1, p2) for (p1, p2) in sig)
    return tuple((None, p2) for p2 in _CLASS_PARITIES_X2[wave.name])


def _row_capacity(edge: Edge, row: int, parities, corner_components: frozenset[int],
                  M: int, N: int, k_nonzero: bool) -> int | None:
    """Dimension of the row's trace space, or None when unbounded.

    The basis family whose trig harmonics run along the edge normal either
    survives on the edge (its cosine factors hit +-1) or vanishes there
    (sine factors hit n*pi).  When every term of the row vanishes, the row
    trace lives in the span of the other family's harmonics along the edge,
    plus a linear term from a corner column if one feeds the row.
    """
    terms = (_CLAMPED_ROW_TERMS[row] if edge.cond == CLAMPED
             else _FREE_ROW_TERMS[edge.axis][row])
    t = edge.axis
    s = 3 - t
    for comp, d1, d2, _ in terms:
        pt = parities[comp][t - 1]
        if pt is None:
            return None
        d_t = d1 if t == 1 else d2
        if (pt == 1) == (d_t == 0):
            return None
    harmonics = M if s == 1 else N
    p_row = None
    for comp, d1, d2, _ in terms:
        ps = parities[comp][s - 1]
        d_s = d2 if t == 1 else d1
        p_here = None if ps is None else ps * (-1 if d_s else 1)
        p_row = p_here
        break
    if p_row is None:
        cap = 2 * harmonics + 1
    elif p_row == 1:
        cap = harmonics + 1
    else:
        cap = harmonics
    # A corner amplitude contributes a linear function of the running
    # coordinate, which the sine span lacks.
    if p_row == -1:
        for comp, d1, d2, k_scaled in terms:
            d_s = d2 if t == 1 else d1
            if comp in corner_components and d_s == 0 and (k_nonzero or not k_scaled):
                cap += 1
                break
    return cap


def _allocate_rows(count: int, caps: Sequence[int | None]) -> list[int]:
    """Give capped rows their capacity, split the rest evenly in order."""
    points = [0] * len(caps)
    full = [i for i, c in enumerate(caps) if c is None]
    capped_total = sum(c for c in caps if c is not None)
    if not full or capped_total >= count:
        # Degenerate budget: shrink capped rows proportionally.
        quota = [count * c / capped_total for c in caps if c is not None]
        idx = [i for i, c in enumerate(caps) if c is not None]
        for i, q in zip(idx, quota):
            points[i] = int(q)
        order = sorted(idx, key=lambda i: (points[i] - count * caps[i] / capped_total, i))
        for i in order[: count - sum(points)]:
            points[i] += 1
        return points
    for i, c in enumerate(caps):
        if c is not None:
            points[i] = c
    rest = count - capped_total
    base, extra = divmod(rest, len(full))
    for j, i in enumerate(full):
        points[i] = base + (1 if j < extra else 0)
    return points


def collocation_plan(problem: Problem,
                     selector: ColumnSelector | None = None,
                     k_nonzero: bool = True) -> tuple[BlockPlan, ...]:
    """Per-row point allocation making the default system exactly square.

    Row types whose trace space is finite (see `_row_capacity`) receive
    exactly as many points as that space has dimensions; any more would be
    linearly dependent and make the matrix singular at every frequency.
    The remaining conditions are split evenly over the unbounded rows, so
    the total equals the number of unknowns.
    """
    if selector is None:
        selector = symmetry_filter(problem.layout, problem.bc, problem.wave,
                                   problem.cs)
    parities = _component_parities(problem.bc, problem.wave)
    corner_components = frozenset(
        problem.layout.columns[j].slot for j in selector.base
        if problem.layout.columns[j].kind == "corner")
    edges = selector.active_edges
    caps: list[int | None] = []
    for edge in edges:
        for row in range(3):
            caps.append(_row_capacity(edge, row, parities, corner_components,
                                      problem.layout.M, problem.layout.N,
                                      k_nonzero))
    points = _allocate_rows(selector.count, caps)
    scale = problem.oversample / 2.0
    if scale != 1.0:
        points = [max(1, math.ceil(p * scale)) if p else 0 for p in points]
    plans = []
    for e, edge in enumerate(edges):
        half = not any(parities[c][(2 - edge.axis)] is None for c in range(3))
        for row in range(3):
            i = 3 * e + row
            plans.append(BlockPlan(edge=edge, row=row, points=points[i],
                                   half=half, capacity=caps[i]))
    return tuple(plans)


@dataclass
class CollocationSystem:
    """Assembled, column-scaled boundary system for one wave state."""

    matrix: np.ndarray
    col_scales: np.ndarray
    selector: ColumnSelector
    state: WaveState
    plan: tuple[BlockPlan, ...]

    @property
    def sigma_min(self) -> float:
        return float(svdvals(self.matrix)[-1])


def assemble(state: WaveState, problem: Problem,
             selector: ColumnSelector | None = None) -> CollocationSystem:
    """Build the boundary collocation matrix for the problem's wave class.

    At the default oversample of 2 the allocation carries exactly as many
    scalar conditions as there are unknowns, so the matrix is square and
    its smallest singular value drops to the noise floor at dispersion
    roots.  Larger oversample values build overdetermined systems for
    diagnostics; their minima sit at the boundary misfit of the truncated
    series and are far shallower.
    """
    layout = problem.layout
    if selector is None:
        selector = symmetry_filter(layout, problem.bc, problem.wave, problem.cs)
    evaluator = FieldEvaluator(layout, state, problem.mat, problem.cs,
                               needed=set(selector.needed_keys),
                               need_corner=selector.need_corner)
    plan = collocation_plan(problem, selector, k_nonzero=state.k != 0.0)
    blocks: list[np.ndarray] = []
    for e in range(0, len(plan), 3):
        edge_blocks = [b for b in plan[e:e + 3] if b.points > 0]
        if not edge_blocks:
            continue
        edge = edge_blocks[0].edge
        pts = [collocation_points(edge, b.points, problem.cs, half=b.half)
               for b in edge_blocks]
        x1s = np.concatenate([p[0] for p in pts])
        x2s = np.concatenate([p[1] for p in pts])
        if edge.cond == CLAMPED:
            rows3 = evaluator.rows(x1s, x2s, (0, 0))
        else:
            stress = evaluator.stress_rows(x1s, x2s)
            rows = (0, 3, 5) if edge.axis == 1 else (1, 3, 4)
            rows3 = stress[:, rows, :]
        combined = selector.combine(rows3)
        off = 0
        for b in edge_blocks:
            blocks.append(combined[off:off + b.points, b.row, :])
            off += b.points
    A = np.vstack(blocks)
    maxes = np.max(np.abs(A), axis=0)
    scales = np.where(maxes > 0.0, 1.0 / np.where(maxes > 0.0, maxes, 1.0), 1.0)
    return CollocationSystem(matrix=A * scales[None, :], col_scales=scales,
                             selector=selector, state=state, plan=plan)


def characteristic_value(state: WaveState, problem: Problem,
                         selector: ColumnSelector | None = None) -> float:
    """Smallest singular value of the scaled collocation matrix."""
    return assemble(state, problem, selector).sigma_min
