"""Profile basis functions for the one-dimensional harmonic systems.

Separating phi(x1, x2) = xi(x1) * trig(beta x2) turns the modal PDE into a
constant-coefficient ODE system in x1 whose characteristic equation

    [mu (beta^2 + k^2 - eta^2) - rho omega^2]^2
        * [(lam + 2 mu)(beta^2 + k^2 - eta^2) - rho omega^2] = 0

has a double root pair governed by

    delta1 = beta^2 + k^2 - rho omega^2 / mu

and a single root pair governed by

    delta2 = beta^2 + k^2 - rho omega^2 / (lam + 2 mu).

Each pair contributes one even and one odd profile function:

    delta > 0:   cosh(alpha x), sinh(alpha x)   with alpha = sqrt(delta)
    delta < 0:   cos(alpha x),  sin(alpha x)    with alpha = sqrt(-delta)
    |delta| ~ 0: 1, x                            (confluent limit)

Hyperbolic columns grow like e^{alpha a}; every column is therefore rescaled
by 1 / max(1, |p(a)|), evaluated in exponential form so that no raw cosh/sinh
is ever formed.  The four columns are ordered (pair-1 even, pair-1 odd,
pair-2 even, pair-2 odd).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .model import Material, WaveState

HYPERBOLIC = "hyperbolic"
TRIGONOMETRIC = "trigonometric"
DEGENERATE = "degenerate"


@dataclass(frozen=True)
class Discriminants:
    """delta1 (double root pair) and delta2 (single root pair)."""

    delta1: float
    delta2: float


@dataclass(frozen=True)
class RootPair:
    """One root pair: its kind and the nonnegative root magnitude alpha.

    alpha is sqrt(|delta|) for the non-degenerate kinds and 0 for the
    degenerate one.
    """

    kind: str
    alpha: float


def discriminants(beta: float, state: WaveState, mat: Material) -> Discriminants:
    rw2 = mat.rho * state.omega ** 2
    common = beta * beta + state.k * state.k
    return Discriminants(
        delta1=common - rw2 / mat.mu,
        delta2=common - rw2 / (mat.lam + 2.0 * mat.mu),
    )


def delta_tolerance(beta: float, state: WaveState, mat: Material) -> float:
    """Degeneracy window: |delta| below this is treated as a double zero root."""
    return 1e-9 * (beta * beta + state.k * state.k
                   + mat.rho * state.omega ** 2 / mat.mu)


def classify_roots(d: Discriminants, tol: float) -> tuple[RootPair, RootPair]:
    """Classify both root pairs against the degeneracy window."""

    def one(delta: float) -> RootPair:
        if abs(delta) <= tol:
            return RootPair(DEGENERATE, 0.0)
        if delta > 0.0:
            return RootPair(HYPERBOLIC, math.sqrt(delta))
        return RootPair(TRIGONOMETRIC, math.sqrt(-delta))

    return one(d.delta1), one(d.delta2)


def characteristic_residual(eta: float, beta: float, state: WaveState,
                            mat: Material) -> float:
    """Value of the characteristic polynomial at a candidate root eta."""
    common = beta * beta + state.k * state.k - eta * eta
    rw2 = mat.rho * state.omega ** 2
    shear = mat.mu * common - rw2
    dilat = (mat.lam + 2.0 * mat.mu) * common - rw2
    return shear * shear * dilat


def _scaled_even(alpha: float, L: float, x: np.ndarray, order: int) -> np.ndarray:
    """Derivatives of cosh(alpha x) / cosh(alpha L), exponential form."""
    t = alpha * L
    s = alpha * np.abs(x)
    core = np.exp(s - t)
    even_part = core * (1.0 + np.exp(-2.0 * s)) / (1.0 + math.exp(-2.0 * t))
    odd_part = core * (1.0 - np.exp(-2.0 * s)) / (1.0 + math.exp(-2.0 * t))
    sign = np.sign(x)
    if order == 0:
        return even_part
    if order == 1:
        return alpha * sign * odd_part
    return alpha * alpha * even_part


def _scaled_odd(alpha: float, L: float, x: np.ndarray, order: int) -> np.ndarray:
    """Derivatives of sinh(alpha x) * d, d = 1/max(1, sinh(alpha L))."""
    t = alpha * L
    sign = np.sign(x)
    s = alpha * np.abs(x)
    if math.sinh(t) <= 1.0:
        # Small argument: raw sinh is safe (t <= asinh(1) < 0.9).
        if order == 0:
            return np.sinh(alpha * x)
        if order == 1:
            return alpha * np.cosh(alpha * x)
        return alpha * alpha * np.sinh(alpha * x)
    core = np.exp(s - t)
    denom = 1.0 - math.exp(-2.0 * t)
    odd_part = sign * core * (1.0 - np.exp(-2.0 * s)) / denom
    even_part = core * (1.0 + np.exp(-2.0 * s)) / denom
    if order == 0:
        return odd_part
    if order == 1:
        return alpha * even_part
    return alpha * alpha * odd_part


class HarmonicBasis:
    """Scaled profile basis for one harmonic index.

    Parameters
    ----------
    beta : modulation wavenumber of the transverse expansion (n pi / span).
    pair1, pair2 : classified root pairs for delta1 and delta2.
    halfspan : half-width of the profile interval (profiles live on
        [-halfspan, halfspan] and are scaled by their edge magnitude).
    """

    def __init__(self, beta: float, pair1: RootPair, pair2: RootPair,
                 halfspan: float):
        if halfspan <= 0.0:
            raise InvalidParameterError(f"halfspan must be positive, got {halfspan}")
        self.beta = beta
        self.pair1 = pair1
        self.pair2 = pair2
        self.halfspan = halfspan
        self.log_scales = np.array([
            v for pair in (pair1, pair2) for v in self._pair_log_scales(pair)
        ])

    def _pair_log_scales(self, pair: RootPair) -> tuple[float, float]:
        """log of the column scales d = 1/max(1, |p(L)|), (even, odd)."""
        L = self.halfspan
        if pair.kind == HYPERBOLIC:
            t = pair.alpha * L
            # log cosh(t), stable for large t
            log_cosh = t + math.log1p(math.exp(-2.0 * t)) - math.log(2.0)
            log_even = -log_cosh  # cosh >= 1 always
            if math.sinh(t) <= 1.0:
                log_odd = 0.0
            else:
                log_odd = -(t + math.log1p(-math.exp(-2.0 * t)) - math.log(2.0))
            return log_even, log_odd
        if pair.kind == TRIGONOMETRIC:
            return 0.0, 0.0  # |cos|, |sin| <= 1
        return 0.0, -math.log(max(1.0, L))

    @property
    def scales(self) -> np.ndarray:
        return np.exp(self.log_scales)

    def eval_matrix(self, x: np.ndarray, order: int) -> np.ndarray:
        """Scaled basis values, shape (len(x), 4), for derivative order 0..2."""
        if order not in (0, 1, 2):
            raise InvalidParameterError(f"derivative order must be 0..2, got {order}")
        x = np.asarray(x, dtype=float)
        out = np.empty((x.size, 4))
        out[:, 0:2] = self._pair_eval(self.pair1, x, order)
        out[:, 2:4] = self._pair_eval(self.pair2, x, order)
        return out

    def basis_eval(self, col: int, x: float, order: int) -> float:
        """Single scaled column value (col in 1..4)."""
        if col not in (1, 2, 3, 4):
            raise InvalidParameterError(f"basis column must be 1..4, got {col}")
        return float(self.eval_matrix(np.array([x]), order)[0, col - 1])

    def _pair_eval(self, pair: RootPair, x: np.ndarray, order: int) -> np.ndarray:
        cols = np.empty((x.size, 2))
        L = self.halfspan
        if pair.kind == HYPERBOLIC:
            cols[:, 0] = _scaled_even(pair.alpha, L, x, order)
            cols[:, 1] = _scaled_odd(pair.alpha, L, x, order)
        elif pair.kind == TRIGONOMETRIC:
            a = pair.alpha
            if order == 0:
                cols[:, 0] = np.cos(a * x)
                cols[:, 1] = np.sin(a * x)
            elif order == 1:
                cols[:, 0] = -a * np.sin(a * x)
                cols[:, 1] = a * np.cos(a * x)
            else:
                cols[:, 0] = -a * a * np.cos(a * x)
                cols[:, 1] = -a * a * np.sin(a * x)
        else:
            d = 1.0 / max(1.0, L)
            if order == 0:
                cols[:, 0] = 1.0
                cols[:, 1] = d * x
            elif order == 1:
                cols[:, 0] = 0.0
                cols[:, 1] = d
            else:
                cols[:, 0] = 0.0
                cols[:, 1] = 0.0
        return cols


def harmonic_basis(index: int, expansion_span: float, halfspan: float,
                   state: WaveState, mat: Material) -> HarmonicBasis:
    """Basis for harmonic `index` expanded over `expansion_span`.

    beta = index * pi / expansion_span; the profiles live on
    [-halfspan, halfspan].
    """
    if index < 0:
        raise InvalidParameterError(f"harmonic index must be >= 0, got {index}")
    beta = index * math.pi / expansion_span
    d = discriminants(beta, state, mat)
    tol = delta_tolerance(beta, state, mat)
    pair1, pair2 = classify_roots(d, tol)
    return HarmonicBasis(beta=beta, pair1=pair1, pair2=pair2, halfspan=halfspan)
