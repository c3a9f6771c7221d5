"""Numerics for iterating (anti)holomorphic correspondences on the Riemann sphere.

Forward limit sets, Poincare series and critical exponents, atomic
Patterson-Sullivan measures with conformality checks, and box-counting
dimension.
"""

from .cloud import PointCloud, thin
from .correspondence import ANTI, HOLO, Correspondence, FixedPoint
from .dimension import DimensionEstimate, ReportConfig, box_dimension, hd_delta_report
from .errors import HolocorrError
from .families import (
    bullett_penrose,
    bullett_penrose_relation,
    conjugation,
    from_rational_inverse,
    llmm,
    univalence_diagnostic,
)
from .measure import (
    AtomicMeasure,
    ConformalityReport,
    DiskBranch,
    conformality_residual,
    conformality_residuals,
    dirac_conformality_check,
    parabolic_mass,
    parabolic_order,
    patterson_sullivan,
)
from .orbits import LevelNodes, expand, iter_levels, limit_set, render
from .poincare import (
    DeltaEstimate,
    LevelSums,
    critical_exponent,
    growth_rate,
    level_sums,
    modified_level_sums,
    poincare_partial_sum,
)
from .polyalg import BiPoly, UniPoly, roots
from .sphere import SpherePoint, chordal, chordal_distance, spherical_scale

__version__ = "0.1.0"
