"""Multi-center conformally flat metrics from finite sphere isometry groups.

Project the orbit of a base point p through the unit-inversion stereographic
chart at p: the quotient-sphere geometry becomes a Majumdar-Papapetrou metric
on R^n with one mass/center term per nontrivial group element. The package
constructs that data (masses, centers, conformal factor, metric) and ships a
numerical verification suite for every identity involved.
"""

from .errors import (
    AmbiguousGenerators,
    AtSingularity,
    BadParameters,
    DegenerateTriple,
    DimensionTooSmall,
    MPQuotError,
    NotOrthogonal,
    OnOrbit,
    OrderExceeded,
    PoleProjection,
    SingularBasePoint,
)
from .green import GreenEval, green_sphere, green_transform_check, green_values
from .groups import (
    IsometryGroup,
    Orbit,
    close_group,
    group_from_spec,
    named_group,
    orbit,
    product_group,
)
from .kernels import backend_name, inv_power_sums, thread_count
from .mp import (
    MPData,
    build_mp,
    conformal_factor_u,
    metric_at,
    mpdata_to_json,
    total_mass,
    u_values,
)
from .sphere import (
    Chart,
    apply_isometry,
    chart_for,
    conformal_factor_inverse,
    sphere_inversion,
    stereo_project,
    stereo_project_many,
    stereo_unproject,
    stereo_unproject_many,
    unit_vector,
)
from .verify import (
    DeckMap,
    VerificationReport,
    check_deck_algebra,
    check_deck_isometry,
    check_harmonic,
    check_harmonic_fd,
    check_mass_limit,
    check_pullback,
    deck_map,
    exclusion_radius,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousGenerators",
    "AtSingularity",
    "BadParameters",
    "Chart",
    "DeckMap",
    "DegenerateTriple",
    "DimensionTooSmall",
    "GreenEval",
    "IsometryGroup",
    "MPData",
    "MPQuotError",
    "NotOrthogonal",
    "OnOrbit",
    "Orbit",
    "OrderExceeded",
    "PoleProjection",
    "SingularBasePoint",
    "VerificationReport",
    "apply_isometry",
    "backend_name",
    "build_mp",
    "chart_for",
    "check_deck_algebra",
    "check_deck_isometry",
    "check_harmonic",
    "check_harmonic_fd",
    "check_mass_limit",
    "check_pullback",
    "close_group",
    "conformal_factor_inverse",
    "conformal_factor_u",
    "deck_map",
    "exclusion_radius",
    "green_sphere",
    "green_transform_check",
    "green_values",
    "group_from_spec",
    "inv_power_sums",
    "metric_at",
    "mpdata_to_json",
    "named_group",
    "orbit",
    "product_group",
    "sphere_inversion",
    "stereo_project",
    "stereo_project_many",
    "stereo_unproject",
    "stereo_unproject_many",
    "thread_count",
    "total_mass",
    "u_values",
    "unit_vector",
]
