"""Root scanning, branch tracing, cut-off extrapolation and convergence.

A dispersion point at fixed K is an Omega where the collocation matrix of a
wave class becomes rank deficient.  With oversampling the smallest singular
value does not reach zero at a root; it dips to the truncation floor of the
series, so roots are located as local minima of sigma_min that fall below a
threshold tied to the off-root background level.

Frequencies and wavenumbers are handled in reduced form throughout:
Omega = omega*a/(pi*c_T), K = k*a/pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .collocation import ColumnSelector, Problem, assemble, symmetry_filter
from .errors import (
    BlindAreaError,
    DegenerateStateError,
    InternalResonanceError,
    InvalidParameterError,
)
from .model import state_from_nondimensional

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ScanConfig:
    """Controls for the frequency sweep at fixed K."""

    omega_min: float = 0.01
    omega_max: float = 2.0
    domega: float = 5e-3
    refine_tol: float = 1e-6          # merge radius for coincident roots
    xtol: float = 1e-9                # golden-section interval target
    threshold_factor: float = 1e-6    # accept dips below factor * median level
    threshold_abs: float | None = None
    candidate_factor: float = 0.5     # refine minima below factor*median
    k_min: float = 1e-3
    perturb: float = 1e-7

    def __post_init__(self) -> None:
        if not (0.0 < self.omega_min < self.omega_max):
            raise InvalidParameterError(
                f"need 0 < omega_min < omega_max, got [{self.omega_min}, {self.omega_max}]")
        if self.domega <= 0.0:
            raise InvalidParameterError(f"domega must be positive, got {self.domega}")


@dataclass
class RootSample:
    omega: float
    sigma: float
    flag: str = ""


class _Evaluator:
    """sigma_min(Omega) with the degenerate-state escape hatch.

    Exactly degenerate profile roots or resonant interior cells abort the
    assembly; nudging Omega by a relative perturbation steps off the
    singular set while staying far inside the scan resolution.
    """

    def __init__(self, K: float, problem: Problem, scan: ScanConfig,
                 selector: ColumnSelector):
        self.K = K
        self.problem = problem
        self.scan = scan
        self.selector = selector
        self.flagged: list[float] = []

    def __call__(self, omega: float) -> float:
        for attempt, om in enumerate((omega, omega * (1.0 + self.scan.perturb))):
            try:
                state = state_from_nondimensional(self.K, om, self.problem.mat,
                                                  self.problem.cs)
                value = assemble(state, self.problem, self.selector).sigma_min
            except (DegenerateStateError, InternalResonanceError):
                if attempt == 0:
                    self.flagged.append(omega)
                continue
            return value
        return math.inf


def _golden_minimize(f, lo: float, hi: float, xtol: float) -> tuple[float, float]:
    """Golden-section minimum of f on [lo, hi]; deterministic, derivative free."""
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    best_x, best_f = (x1, f1) if f1 <= f2 else (x2, f2)
    while hi - lo > xtol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = f(x2)
        if f1 < best_f:
            best_x, best_f = x1, f1
        if f2 < best_f:
            best_x, best_f = x2, f2
    return best_x, best_f


def _on_degenerate_line(omega: float, K: float, mat) -> bool:
    """True near the two Omega lines where basis columns blow up.

    Where the modal wavenumber matches a bulk wavespeed the zero-order
    basis columns and the corner column diverge together and become
    parallel, so the smallest singular value dips to zero without a wave
    mode existing there.  Minima landing on these lines are artifacts.
    """
    lines = (K, K * math.sqrt((mat.lam + 2.0 * mat.mu) / mat.mu))
    return any(abs(omega - line) <= 1e-5 * max(1.0, line) for line in lines)


def scan_roots(K: float, problem: Problem, scan: ScanConfig | None = None,
               selector: ColumnSelector | None = None) -> list[RootSample]:
    """Sweep Omega at fixed K and refine every qualifying dip."""
    scan = scan or ScanConfig()
    if K < scan.k_min:
        raise InvalidParameterError(
            f"K = {K:g} below the supported minimum {scan.k_min:g}")
    if selector is None:
        selector = symmetry_filter(problem.layout, problem.bc, problem.wave,
                                   problem.cs)
    f = _Evaluator(K, problem, scan, selector)
    n = int(math.floor((scan.omega_max - scan.omega_min) / scan.domega + 0.5)) + 1
    grid = scan.omega_min + scan.domega * np.arange(n)
    values = np.array([f(om) for om in grid])
    finite = values[np.isfinite(values)]
    if finite.size == 0:
        raise DegenerateStateError("collocation failed across the whole sweep")
    median = float(np.median(finite))
    threshold = (scan.threshold_abs if scan.threshold_abs is not None
                 else scan.threshold_factor * median)

    roots: list[RootSample] = []
    for i in range(n):
        left = values[i - 1] if i > 0 else math.inf
        right = values[i + 1] if i + 1 < n else math.inf
        if not (values[i] <= left and values[i] <= right):
            continue
        if not (values[i] < scan.candidate_factor * median):
            continue
        lo = grid[i - 1] if i > 0 else grid[i]
        hi = grid[i + 1] if i + 1 < n else grid[i]
        om, sig = _golden_minimize(f, lo, hi, scan.xtol * max(1.0, grid[i]))
        if not (grid[0] + 0.5 * scan.domega < om < grid[-1] - 0.5 * scan.domega):
            # A dip pinned to a sweep boundary belongs to a root outside
            # the window; report it only when the window covers it.
            continue
        if sig < threshold and not _on_degenerate_line(om, K, problem.mat):
            flag = "perturbed" if any(abs(om - p) <= 2 * scan.domega
                                      for p in f.flagged) else ""
            roots.append(RootSample(omega=om, sigma=sig, flag=flag))

    roots.sort(key=lambda r: r.omega)
    merged: list[RootSample] = []
    for r in roots:
        if merged and abs(r.omega - merged[-1].omega) <= 2 * scan.refine_tol:
            if r.sigma < merged[-1].sigma:
                merged[-1] = r
            continue
        merged.append(r)
    return merged


@dataclass
class Branch:
    """One traced dispersion branch of a wave class."""

    wave: str
    index: int                       # 1-based, ordered by Omega at the first K
    K: list[float] = field(default_factory=list)
    omega: list[float] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)
    misses: int = 0

    def last_slope(self) -> float:
        if len(self.K) < 2:
            return 0.0
        return (self.omega[-1] - self.omega[-2]) / (self.K[-1] - self.K[-2])

    def predict(self, K_new: float) -> float:
        return self.omega[-1] + self.last_slope() * (K_new - self.K[-1])

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.K), np.asarray(self.omega)


def _windowed_root(f: _Evaluator, center: float, width: float, scan: ScanConfig,
                   threshold: float, m: int = 9) -> RootSample | None:
    """Locate one dip inside [center - width, center + width].

    The window can contain one of the artifact lines next to the wanted
    root; refining only the deepest presample would then always land on
    the artifact and lose the branch, so the candidate minima are tried
    in depth order until one refines to an acceptable root.
    """
    lo = max(scan.omega_min * 0.1, center - width)
    hi = center + width
    xs = np.linspace(lo, hi, m)
    ys = np.array([f(x) for x in xs])
    if not np.any(np.isfinite(ys)):
        return None
    candidates = [i for i in range(m)
                  if np.isfinite(ys[i])
                  and (i == 0 or ys[i] <= ys[i - 1])
                  and (i == m - 1 or ys[i] <= ys[i + 1])]
    candidates.sort(key=lambda i: ys[i])
    for i in candidates[:3]:
        blo = xs[i - 1] if i > 0 else xs[0]
        bhi = xs[i + 1] if i + 1 < m else xs[-1]
        om, sig = _golden_minimize(f, blo, bhi, scan.xtol * max(1.0, center))
        if sig < threshold and not _on_degenerate_line(om, f.K, f.problem.mat):
            flag = "perturbed" if any(abs(om - p) <= (hi - lo)
                                      for p in f.flagged) else ""
            return RootSample(omega=om, sigma=sig, flag=flag)
    return None


def trace_branches(problem: Problem, k_values: np.ndarray,
                   scan: ScanConfig | None = None,
                   max_branches: int | None = None,
                   rescan_every: int | None = None,
                   max_misses: int = 3) -> list[Branch]:
    """Continue the class's branches over an ascending K grid.

    A full sweep seeds the branches at the first K; afterwards each branch is
    re-found inside a window around its linear prediction, far cheaper than
    rescanning.  A branch missing from its window is flagged as a gap and
    dropped after `max_misses` consecutive failures; optional periodic full
    rescans pick up branches the windows lost.
    """
    scan = scan or ScanConfig()
    k_values = np.asarray(k_values, dtype=float)
    if k_values.size == 0:
        raise InvalidParameterError("empty wavenumber grid")
    if np.any(np.diff(k_values) <= 0.0):
        raise InvalidParameterError("wavenumber grid must be strictly increasing")
    selector = symmetry_filter(problem.layout, problem.bc, problem.wave,
                               problem.cs)

    first = scan_roots(k_values[0], problem, scan, selector)
    if max_branches is not None:
        first = first[:max_branches]
    branches = [Branch(wave=problem.wave.name, index=i + 1)
                for i in range(len(first))]
    for b, r in zip(branches, first):
        b.K.append(float(k_values[0]))
        b.omega.append(r.omega)
        b.flags.append(r.flag)

    # Background level from the seeding scan sets the acceptance threshold
    # for every later windowed refinement.
    f0 = _Evaluator(k_values[0], problem, scan, selector)
    n = int(math.floor((scan.omega_max - scan.omega_min) / scan.domega + 0.5)) + 1
    probe = scan.omega_min + scan.domega * np.arange(0, n, max(1, n // 40))
    background = np.median([v for v in (f0(om) for om in probe) if np.isfinite(v)])
    threshold = (scan.threshold_abs if scan.threshold_abs is not None
                 else scan.threshold_factor * float(background))

    for step, K in enumerate(k_values[1:], start=1):
        fK = _Evaluator(float(K), problem, scan, selector)
        dK = float(K - k_values[step - 1])
        claims: list[tuple[Branch, RootSample]] = []
        for b in branches:
            if b.misses > max_misses:
                continue
            pred = b.predict(float(K))
            if len(b.K) < 2:
                # No slope estimate yet; dispersion slopes are O(1) in
                # reduced units, so cover that motion explicitly.
                width = max(0.015, 2.2 * dK)
            else:
                width = max(0.015, 3.0 * abs(b.last_slope()) * dK)
            root = _windowed_root(fK, pred, width, scan, threshold)
            if root is None:
                # An artifact line crossing the window can swallow the
                # root's dip at coarse resolution; resample finer once.
                root = _windowed_root(fK, pred, width, scan, threshold, m=33)
            if root is None:
                b.misses += 1
                continue
            claims.append((b, root))

        # Two windows can land in the same dip near a close approach; keep
        # the claim whose prediction was nearer and count a miss for the rest.
        claims.sort(key=lambda br: abs(br[1].omega - br[0].predict(float(K))))
        taken: list[RootSample] = []
        for b, root in claims:
            if any(abs(root.omega - t.omega) <= 2 * scan.refine_tol for t in taken):
                b.misses += 1
                continue
            taken.append(root)
            b.K.append(float(K))
            b.omega.append(root.omega)
            b.flags.append(root.flag)
            b.misses = 0

        if rescan_every and step % rescan_every == 0:
            fresh = scan_roots(float(K), problem, scan, selector)
            known = [b.omega[-1] for b in branches if b.K and b.K[-1] == float(K)]
            for r in fresh:
                if any(abs(r.omega - om) <= 10 * scan.refine_tol for om in known):
                    continue
                nb = Branch(wave=problem.wave.name, index=len(branches) + 1)
                nb.K.append(float(K))
                nb.omega.append(r.omega)
                nb.flags.append(r.flag)
                branches.append(nb)

    return [b for b in branches if b.K]


def branch_value(branch: Branch, K: float, tol: float = 1e-9) -> float:
    """Omega of a traced branch at a grid value K it was traced on."""
    ks, oms = branch.as_arrays()
    hit = np.nonzero(np.abs(ks - K) <= tol)[0]
    if hit.size == 0:
        raise BlindAreaError(
            f"branch {branch.wave}#{branch.index} has no sample at K = {K:g}")
    return float(oms[hit[0]])


def cutoff_frequency(branch: Branch, k_cut: float = 0.1,
                     min_samples: int = 3) -> float:
    """Extrapolate a branch to K -> 0 by a quadratic fit of its low-K samples."""
    ks, oms = branch.as_arrays()
    mask = ks <= k_cut + 1e-12
    if int(mask.sum()) < min_samples:
        raise InvalidParameterError(
            f"branch {branch.wave}#{branch.index} has {int(mask.sum())} samples "
            f"at K <= {k_cut:g}; need at least {min_samples} for the fit")
    coeffs = np.polyfit(ks[mask], oms[mask], 2)
    return float(np.polyval(coeffs, 0.0))


def convergence_error(test: Branch, reference: Branch,
                      k_values: np.ndarray | None = None) -> float:
    """max |Omega_test - Omega_ref| over the shared wavenumber samples."""
    kt, ot = test.as_arrays()
    kr, orr = reference.as_arrays()
    if k_values is None:
        k_values = kt
    err = -math.inf
    found = 0
    for K in np.asarray(k_values, dtype=float):
        it = np.nonzero(np.abs(kt - K) <= 1e-9)[0]
        ir = np.nonzero(np.abs(kr - K) <= 1e-9)[0]
        if it.size == 0 or ir.size == 0:
            continue
        found += 1
        err = max(err, abs(float(ot[it[0]]) - float(orr[ir[0]])))
    if found == 0:
        raise InvalidParameterError("branches share no wavenumber samples")
    return err
