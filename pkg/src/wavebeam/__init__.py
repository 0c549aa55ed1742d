"""Wave propagation in infinite beams of rectangular cross-section.

Composite-series solution of the harmonic elastodynamic problem: a corner
discontinuity term, two families of boundary series and an interior double
series combine into cross-section basis columns; boundary collocation on the
section edges turns clamped/free conditions into a singular-value problem
whose minima over frequency are the dispersion points.
"""

from .basis import HarmonicBasis, classify_roots, discriminants, harmonic_basis
from .collocation import (
    BoundaryLayout,
    CollocationSystem,
    ColumnSelector,
    Edge,
    Problem,
    WaveClass,
    assemble,
    characteristic_value,
    collocation_points,
    symmetry_filter,
)
from .dispersion import (
    Branch,
    RootSample,
    ScanConfig,
    branch_value,
    convergence_error,
    cutoff_frequency,
    scan_roots,
    trace_branches,
)
from .errors import (
    BlindAreaError,
    ConfigError,
    DegenerateStateError,
    InternalResonanceError,
    InvalidParameterError,
    NotARootError,
    UnsupportedWavenumberError,
    WavebeamError,
)
from .fields import BasisLayout, ColumnInfo, FieldEvaluator
from .homogeneous import BoundaryBlock, boundary_block, direction2_block
from .model import (
    CrossSection,
    Material,
    WaveState,
    material_from_poisson,
    nondimensionalize,
    section_from_aspect,
    state_from_nondimensional,
)
from .modes import NullVector, SectionMode, mode_at, mode_field, null_vector, plane_section_metric
from .particular import InternalCoupling, ParticularBlock, particular_block, solve_internal_coefficients

__version__ = "0.1.0"

__all__ = [
    "BasisLayout",
    "BlindAreaError",
    "BoundaryBlock",
    "BoundaryLayout",
    "Branch",
    "CollocationSystem",
    "ColumnInfo",
    "ColumnSelector",
    "ConfigError",
    "CrossSection",
    "DegenerateStateError",
    "Edge",
    "FieldEvaluator",
    "HarmonicBasis",
    "InternalCoupling",
    "InternalResonanceError",
    "InvalidParameterError",
    "Material",
    "NotARootError",
    "NullVector",
    "ParticularBlock",
    "Problem",
    "RootSample",
    "ScanConfig",
    "SectionMode",
    "UnsupportedWavenumberError",
    "WaveClass",
    "WaveState",
    "WavebeamError",
    "assemble",
    "boundary_block",
    "branch_value",
    "characteristic_value",
    "classify_roots",
    "collocation_points",
    "convergence_error",
    "cutoff_frequency",
    "direction2_block",
    "discriminants",
    "harmonic_basis",
    "material_from_poisson",
    "mode_at",
    "mode_field",
    "nondimensionalize",
    "null_vector",
    "particular_block",
    "plane_section_metric",
    "scan_roots",
    "section_from_aspect",
    "solve_internal_coefficients",
    "state_from_nondimensional",
    "symmetry_filter",
    "trace_branches",
]
