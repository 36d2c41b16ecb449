"""Lefschetz-index certificates for fixed points of the DeGroot-Friedkin map."""

SCHEMA_VERSION = "1.0"

from .certifier import (  # noqa: E402
    LefschetzCertificate,
    RateEstimate,
    Stability,
    StabilityReport,
    Verdict,
    certify,
    corner_spectrum,
    rate_estimate,
    stability_report,
)
from .dfmap import DfMap, Trajectory, evaluate, homotopy_point, simulate  # noqa: E402
from .graph import InteractionMatrix, gamma_from_matrix, validate_connectivity  # noqa: E402
from .jacobian import (  # noqa: E402
    finite_difference_jacobian,
    fixed_point_jacobian,
    full_jacobian,
    reduced_jacobian,
)
from .simplex import (  # noqa: E402
    InfluenceWeights,
    ShrunkenSimplexSpec,
    SimplexPoint,
    make_simplex_point,
    permute,
    sample_interior,
)
from .solver import (  # noqa: E402
    FixedPointRecord,
    SolverConfig,
    enumerate_fixed_points,
    newton_refine,
    picard_solve,
)
