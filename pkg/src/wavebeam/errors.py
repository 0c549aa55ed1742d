"""Exception types shared across the library.

Everything raised on purpose derives from :class:`WavebeamError`, so callers
(and the CLI) can tell deliberate rejections apart from genuine bugs.
"""

from __future__ import annotations


class WavebeamError(Exception):
    """Base class for all deliberate failures."""


class InvalidParameterError(WavebeamError, ValueError):
    """A physical or configuration parameter is out of its admissible range."""


class UnsupportedWavenumberError(WavebeamError):
    """The axial wavenumber is zero or negative.

    The traveling-wave reduction divides by k when eliminating dependent
    amplitudes, so k = 0 states must be handled by extrapolation, never by
    direct evaluation.
    """


class DegenerateStateError(WavebeamError):
    """A boundary block could not be normalized at this (Omega, K).

    Raised when the jump-normalization system is numerically singular
    (condition number beyond 1e13), which happens on a measure-zero set of
    frequencies.  Scanners retry at a slightly perturbed Omega.
    """

    def __init__(self, message: str, *, direction: int | None = None,
                 index: int | None = None, family: int | None = None):
        super().__init__(message)
        self.direction = direction
        self.index = index
        self.family = family


class InternalResonanceError(WavebeamError):
    """A cell of the interior coupling solve is singular at this (Omega, K).

    The 3x3 (or smaller) linear systems tying interior Fourier coefficients to
    the corner amplitudes lose rank exactly when (Omega, K) hits a resonance of
    the doubly periodic extension.  Scanners perturb Omega and retry.
    """

    def __init__(self, message: str, *, m: int | None = None, n: int | None = None):
        super().__init__(message)
        self.m = m
        self.n = n


class NotARootError(WavebeamError):
    """Mode extraction was requested at a state that does not solve the
    characteristic equation to the required residual."""


class BlindAreaError(WavebeamError):
    """A branch sample falls in a tracing gap (blind area) and cannot be
    refined reliably."""


class ConfigError(WavebeamError):
    """Invalid run configuration (unknown wave class, bad ranges, ...)."""
