"""Computations in the moduli space of quadratic rational maps.

A quadratic rational map has three fixed points whose eigenvalues (l1, l2, l3)
determine its conjugacy class and satisfy 1/(1-l1) + 1/(1-l2) + 1/(1-l3) = 1
whenever no eigenvalue is 1. This package provides:

- normal forms and the eigenvalue algebra (`moduli`),
- orbit computation on the sphere with certified parabolic escape
  (`sphere`, `dynamics`, vectorized in `batch`),
- moduli-region membership and a Julia-set connectivity classifier for the
  slice of classes fixing eigenvalue 1 (`classify`),
- twist paths of eigenvalue states and their limit law (`twist`),
- deterministic tile-parallel rasters of parameter and dynamical planes
  (`raster`),
- reproducible counter-based sampling (`sampling`) and randomized
  verification suites (`verify`),
- a command-line front end (`quadmod` / `python -m quadmod`).
"""

from .classify import (
    ALL_TIERS,
    DEFAULT_TIERS,
    Connectivity,
    RegionLabel,
    RepellingReport,
    Tier,
    Verdict,
    boundary_of_H,
    connectivity_per1,
    region_membership,
    verify_repelling,
)
from .dynamics import (
    AttractedToCycle,
    AttractedToPoint,
    CriticalData,
    EscapeCertificate,
    EscapesParabolic,
    Fate,
    HitFixedPointExactly,
    Undetermined,
    certified_escape_general,
    certified_escape_paper,
    critical_points,
    evaluate,
    orbit_fate,
)
from .errors import (
    AmbiguousNearBoundary,
    DegenerateCorrespondence,
    DegenerateFixedPoints,
    InconsistentTriple,
    InvalidForm,
    NotInB2,
    PreconditionFailed,
    QuadmodError,
    UnsupportedForm,
    ZeroMultiplier,
)
from .moduli import (
    Conjugated,
    EigenvalueTriple,
    FixedPoint,
    LambdaForm,
    MobiusMap,
    ModuliPoint,
    PerOneForm,
    eigenvalue_triple_of,
    eigenvalues_from_sigma,
    fixed_points_and_multipliers,
    lambda3_from_eq1,
    moduli_distance,
    per1_form_from_lambda,
    sigma_coordinates,
)
from .raster import (
    ImageBuffer,
    RasterJob,
    Window,
    default_parameter_job,
    encode_ppm,
    form_from_dict,
    form_to_dict,
    job_from_dict,
    job_to_dict,
    mobius_conjugate_symmetric,
    raster_dynamical_plane,
    raster_parameter_plane,
    resolve_thread_count,
)
from .sampling import disk_points, rectangle_points, uniform_block, unit_disk_pairs
from .sphere import SpherePoint, chordal
from .twist import (
    TwistPlan,
    TwistState,
    inverse_twist,
    plan_from_multipliers,
    sum_conservation_residual,
    twist_limit_error,
    twist_state,
)
from .verify import run_suite, suite_b2, suite_bound, suite_repelling, suite_twist

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "QuadmodError", "DegenerateFixedPoints", "InvalidForm", "InconsistentTriple",
    "PreconditionFailed", "ZeroMultiplier", "NotInB2", "UnsupportedForm",
    "DegenerateCorrespondence", "AmbiguousNearBoundary",
    # sphere
    "SpherePoint", "chordal",
    # moduli
    "LambdaForm", "PerOneForm", "Conjugated", "MobiusMap", "EigenvalueTriple",
    "ModuliPoint", "FixedPoint", "fixed_points_and_multipliers", "eigenvalue_triple_of",
    "lambda3_from_eq1", "sigma_coordinates", "eigenvalues_from_sigma",
    "per1_form_from_lambda", "moduli_distance",
    # dynamics
    "evaluate", "critical_points", "orbit_fate", "Fate", "AttractedToPoint",
    "AttractedToCycle", "EscapesParabolic", "HitFixedPointExactly", "Undetermined",
    "CriticalData", "EscapeCertificate", "certified_escape_general",
    "certified_escape_paper",
    # classify
    "RegionLabel", "region_membership", "boundary_of_H", "Connectivity", "Tier",
    "Verdict", "DEFAULT_TIERS", "ALL_TIERS", "connectivity_per1", "RepellingReport",
    "verify_repelling",
    # twist
    "TwistPlan", "TwistState", "plan_from_multipliers", "inverse_twist",
    "twist_state", "sum_conservation_residual", "twist_limit_error",
    # sampling
    "uniform_block", "disk_points", "rectangle_points", "unit_disk_pairs",
    # raster
    "Window", "RasterJob", "ImageBuffer", "default_parameter_job",
    "raster_parameter_plane", "raster_dynamical_plane", "encode_ppm",
    "mobius_conjugate_symmetric", "resolve_thread_count",
    "form_to_dict", "form_from_dict", "job_to_dict", "job_from_dict",
    # verify
    "run_suite", "suite_repelling", "suite_twist", "suite_bound", "suite_b2",
]
