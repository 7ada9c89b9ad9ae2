"""Sum-capacity bounds, achievable rates, and gap certificates for
three-user (and K-user) relay exchange networks."""

from .achievable import (
    DownlinkPowers,
    FdfAllocation,
    LowerReport,
    SearchConfig,
    cdf_v1_constraints,
    cdf_v1_full_constraints,
    cdf_v1_sum_rate_closed,
    cdf_v1_sum_rate_lp,
    cdf_v2_inner,
    cdf_v2_optimize,
    fdf_optimize,
    fdf_sum_rate,
    kuser_lower,
    lower_report,
)
from .gap import (
    GapReport,
    NonReciprocalReport,
    SymmetricReport,
    additive_gap,
    dof_slope,
    full_report,
    kuser_gap,
    multiplicative_ratio,
    nr_example_report,
    nr_triple_constraints,
    symmetric_report,
)
from .lp import (
    LinearProgram,
    LpSolution,
    RateConstraint,
    SimplexStallError,
    check_feasible,
    enumerate_vertices,
    solve,
)
from .model import (
    ChannelSpec,
    KStarSpec,
    NonReciprocalSpec,
    RateTuple,
    canonicalize,
    clamped_capacity,
    gaussian_capacity,
    snr_db_to_power,
)
from .upper_bounds import (
    BoundReport,
    best_upper,
    cutset_pair_constraints,
    cutset_sum_upper,
    cutset_sum_upper_lp,
    genie_sum_upper,
    genie_sum_upper_lp,
    genie_triple_constraints,
    kuser_sum_upper,
    restricted_sum_upper,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
