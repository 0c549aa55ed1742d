"""Material, cross-section and wave-state descriptions.

The beam is infinite along z with a rectangular cross section
|x1| <= a, |x2| <= b.  Harmonic waves u = phi(x1, x2) * trig(k z - omega t)
are characterized by the nondimensional pair

    Omega = omega * a / (pi * c_T),     K = k * a / pi,

with c_T = sqrt(mu / rho) the shear wave speed.  All interior computations
use a = 1; the aspect ratio a/b fixes b.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParameterError


@dataclass(frozen=True)
class Material:
    """Isotropic linear elastic solid (Lame constants, mass density)."""

    lam: float
    mu: float
    rho: float

    def __post_init__(self) -> None:
        if self.mu <= 0.0:
            raise InvalidParameterError(f"shear modulus must be positive, got {self.mu}")
        if self.rho <= 0.0:
            raise InvalidParameterError(f"density must be positive, got {self.rho}")
        # Thermodynamic stability: bulk modulus lam + 2mu/3 > 0.
        if self.lam <= -2.0 * self.mu / 3.0:
            raise InvalidParameterError(
                f"lam = {self.lam} violates lam > -2mu/3 (mu = {self.mu})")

    @property
    def c_shear(self) -> float:
        return math.sqrt(self.mu / self.rho)

    @property
    def c_dilat(self) -> float:
        return math.sqrt((self.lam + 2.0 * self.mu) / self.rho)


def material_from_poisson(nu: float, mu: float = 1.0, rho: float = 1.0) -> Material:
    """Build a material from Poisson ratio and shear modulus.

    lam = 2 mu nu / (1 - 2 nu); nu must lie in [0, 0.5).
    """
    if nu < 0.0:
        raise InvalidParameterError(f"Poisson ratio must be >= 0, got {nu}")
    if nu >= 0.5:
        raise InvalidParameterError(f"Poisson ratio must be < 0.5, got {nu}")
    lam = 2.0 * mu * nu / (1.0 - 2.0 * nu)
    return Material(lam=lam, mu=mu, rho=rho)


@dataclass(frozen=True)
class CrossSection:
    """Half-widths of the rectangular cross section."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if self.a <= 0.0 or self.b <= 0.0:
            raise InvalidParameterError(
                f"cross-section half-widths must be positive, got a={self.a}, b={self.b}")

    @property
    def aspect(self) -> float:
        return self.a / self.b


def section_from_aspect(aspect: float) -> CrossSection:
    """Unit-a cross section with the given a/b ratio."""
    if aspect <= 0.0:
        raise InvalidParameterError(f"aspect ratio a/b must be positive, got {aspect}")
    return CrossSection(a=1.0, b=1.0 / aspect)


@dataclass(frozen=True)
class WaveState:
    """One (frequency, wavenumber) point, stored both ways.

    K and Omega are the nondimensional wavenumber/frequency; k and omega the
    physical ones for the material and section they were built with.
    """

    K: float
    Omega: float
    k: float
    omega: float


def nondimensionalize(omega: float, k: float, mat: Material, cs: CrossSection) -> WaveState:
    """Wrap a physical (omega, k) pair as a WaveState."""
    if omega < 0.0:
        raise InvalidParameterError(f"omega must be >= 0, got {omega}")
    if k < 0.0:
        raise InvalidParameterError(f"k must be >= 0, got {k}")
    scale = cs.a / (math.pi * mat.c_shear)
    return WaveState(K=k * cs.a / math.pi, Omega=omega * scale, k=k, omega=omega)


def state_from_nondimensional(K: float, Omega: float, mat: Material,
                              cs: CrossSection) -> WaveState:
    """WaveState from the nondimensional pair (K, Omega)."""
    if K < 0.0:
        raise InvalidParameterError(f"K must be >= 0, got {K}")
    if Omega < 0.0:
        raise InvalidParameterError(f"Omega must be >= 0, got {Omega}")
    k = K * math.pi / cs.a
    omega = Omega * math.pi * mat.c_shear / cs.a
    return WaveState(K=K, Omega=Omega, k=k, omega=omega)
