"""Achievable sum rates.

Three families of lower bounds are computed:

* relay decodes everything, re-encodes jointly (``cdf_v1``): a fixed
  five-constraint rate polytope with a matching closed form;
* relay decodes everything, re-encodes per message stream with superposed
  codewords and known-signal cancellation (``cdf_v2``): an inner rate LP for
  a given relay power split, and an outer multistart coordinate-ascent
  search over the split;
* relay decodes only modulo-lattice sums while user pairs time-share the
  block (``fdf``): a closed rate formula per block allocation, optimized on
  a simplex grid with one local refinement.

Plus the K-user reduction that runs the two strongest users as a two-way
relay pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import lp
from .lp import RateConstraint, rate_constraint
from .model import (
    ChannelSpec,
    KStarSpec,
    clamped_capacity,
    gaussian_capacity,
)

#: Default simplex-grid resolution for the block-allocation search.
DEFAULT_FDF_STEP = 1.0 / 200.0


# --------------------------------------------------------------------------
# data types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FdfAllocation:
    """Fractions of the transmission block given to the three pairwise slots."""

    alpha12: float
    alpha23: float
    alpha31: float

    def __post_init__(self) -> None:
        for name, a in (("alpha12", self.alpha12), ("alpha23", self.alpha23),
                        ("alpha31", self.alpha31)):
            if not (0.0 <= a <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {a}")
        total = self.alpha12 + self.alpha23 + self.alpha31
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"allocation must sum to 1, got {total!r}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.alpha12, self.alpha23, self.alpha31)


@dataclass(frozen=True)
class DownlinkPowers:
    """Relay power shares, one per forwarded message stream (indexed like rates)."""

    p12: float
    p13: float
    p21: float
    p23: float
    p31: float
    p32: float

    def __post_init__(self) -> None:
        for name, v in zip(("p12", "p13", "p21", "p23", "p31", "p32"), self.as_tuple()):
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be a finite nonnegative power, got {v}")

    def as_tuple(self) -> tuple[float, ...]:
        return (self.p12, self.p13, self.p21, self.p23, self.p31, self.p32)

    @property
    def total(self) -> float:
        return sum(self.as_tuple())


@dataclass(frozen=True)
class SearchConfig:
    """Controls the relay power-split search; deterministic given the seed.

    ``random_starts`` extra start points are drawn from a counter-based
    (Philox) generator on top of the nine deterministic seeds.  Coordinate
    ascent runs from the ``ascent_from`` best starts (None = all) with the
    probe step shrinking by half each round.
    """

    random_starts: int = 8
    shrink_rounds: int = 8
    passes_per_round: int = 2
    step_fraction: float = 0.25
    ascent_from: int | None = None
    seed: int = 0


@dataclass(frozen=True)
class LowerReport:
    """Named achievable sum rates with the witnesses behind the searched ones."""

    cdf_v1: float
    cdf_v2: float
    fdf: float
    best_name: str
    best: float
    fdf_allocation: FdfAllocation
    downlink_powers: DownlinkPowers

    def as_dict(self) -> dict[str, float]:
        return {
            "cdf_v1": self.cdf_v1,
            "cdf_v2": self.cdf_v2,
            "fdf": self.fdf,
            "best_lower": self.best,
        }


# --------------------------------------------------------------------------
# complete decode-and-forward, variant 1
# --------------------------------------------------------------------------

def uplink_constraints(spec: ChannelSpec) -> list[RateConstraint]:
    """The seven multiple-access rows for the relay decoding all six messages."""
    h1sq, h2sq, h3sq = spec.h1 ** 2, spec.h2 ** 2, spec.h3 ** 2
    P = spec.P
    cap = gaussian_capacity
    return [
        rate_constraint([(1, 2), (1, 3)], cap(h1sq * P), "mac_1"),
        rate_constraint([(2, 1), (2, 3)], cap(h2sq * P), "mac_2"),
        rate_constraint([(3, 1), (3, 2)], cap(h3sq * P), "mac_3"),
        rate_constraint([(1, 2), (1, 3), (2, 1), (2, 3)], cap((h1sq + h2sq) * P), "mac_12"),
        rate_constraint([(1, 2), (1, 3), (3, 1), (3, 2)], cap((h1sq + h3sq) * P), "mac_13"),
        rate_constraint([(2, 1), (2, 3), (3, 1), (3, 2)], cap((h2sq + h3sq) * P), "mac_23"),
        rate_constraint(
            [(1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)],
            cap((h1sq + h2sq + h3sq) * P),
            "mac_sum",
        ),
    ]


def cdf_v1_full_constraints(spec: ChannelSpec) -> list[RateConstraint]:
    """Unreduced ten-constraint set: uplink MAC rows plus the three
    broadcast-with-side-information rows of the joint relay codeword."""
    h1sq, h2sq, h3sq = spec.h1 ** 2, spec.h2 ** 2, spec.h3 ** 2
    P = spec.P
    cap = gaussian_capacity
    downlink = [
        rate_constraint([(2, 1), (2, 3), (3, 1), (3, 2)], cap(h1sq * P), "side_info_1"),
        rate_constraint([(1, 2), (1, 3), (3, 1), (3, 2)], cap(h2sq * P), "side_info_2"),
        rate_constraint([(1, 2), (1, 3), (2, 1), (2, 3)], cap(h3sq * P), "side_info_3"),
    ]
    return uplink_constraints(spec) + downlink


def cdf_v1_constraints(spec: ChannelSpec) -> list[RateConstraint]:
    """The five-constraint reduction of :func:`cdf_v1_full_constraints`.

    Under the gain ordering the other rows are dominated; the two sets have
    the same sum-rate maximum.
    """
    h1sq, h2sq, h3sq = spec.h1 ** 2, spec.h2 ** 2, spec.h3 ** 2
    P = spec.P
    cap = gaussian_capacity
    return [
        rate_constraint([(3, 1), (3, 2)], cap(h3sq * P), "mac_3"),
        rate_constraint([(1, 2), (1, 3), (2, 1), (2, 3)], cap(h3sq * P), "side_info_3"),
        rate_constraint([(1, 2), (1, 3), (3, 1), (3, 2)], cap(h2sq * P), "side_info_2"),
        rate_constraint(
            [(2, 1), (2, 3), (3, 1), (3, 2)],
            cap(min(h1sq, h2sq + h3sq) * P),
            "side_info_1_cut",
        ),
        rate_constraint(
            [(1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)],
            cap((h1sq + h2sq + h3sq) * P),
            "mac_sum",
        ),
    ]


def cdf_v1_sum_rate_closed(spec: ChannelSpec) -> float:
    """Closed-form sum-rate maximum of the variant-1 polytope:

        min{ (1/2)[C(min{h1^2, h2^2+h3^2} P) + C(h2^2 P) + C(h3^2 P)],
             C((h1^2+h2^2+h3^2) P),
             2 C(h3^2 P) }
    """
    h1sq, h2sq, h3sq = spec.h1 ** 2, spec.h2 ** 2, spec.h3 ** 2
    P = spec.P
    cap = gaussian_capacity
    return min(
        0.5 * (cap(min(h1sq, h2sq + h3sq) * P) + cap(h2sq * P) + cap(h3sq * P)),
        cap((h1sq + h2sq + h3sq) * P),
        2.0 * cap(h3sq * P),
    )


def cdf_v1_sum_rate_lp(spec: ChannelSpec) -> float:
    """Sum-rate maximum of the reduced constraint set via the simplex solver."""
    return lp.max_sum_rate(cdf_v1_constraints(spec))


# --------------------------------------------------------------------------
# complete decode-and-forward, variant 2
# --------------------------------------------------------------------------

# Constraint matrix rows: seven uplink MAC rows, then the three downlink
# groups decoded by users 1, 2, 3 after cancelling their own streams.
# Columns follow RATE_PAIRS: (12, 13, 21, 23, 31, 32).
_V2_ROWS = np.array(
    [
        [1, 1, 0, 0, 0, 0],
        [0, 0, 1, 1, 0, 0],
        [0, 0, 0, 0, 1, 1],
        [1, 1, 1, 1, 0, 0],
        [1, 1, 0, 0, 1, 1],
        [0, 0, 1, 1, 1, 1],
        [1, 1, 1, 1, 1, 1],
        [0, 0, 1, 0, 1, 0],
        [1, 0, 0, 0, 0, 1],
        [0, 1, 0, 1, 0, 0],
    ],
    dtype=float,
)
_ONES6 = np.ones(6)


def _uplink_bound_values(spec: ChannelSpec) -> np.ndarray:
    h1sq, h2sq, h3sq = spec.h1 ** 2, spec.h2 ** 2, spec.h3 ** 2
    P = spec.P
    cap = gaussian_capacity
    return np.array(
        [
            cap(h1sq * P),
            cap(h2sq * P),
            cap(h3sq * P),
            cap((h1sq + h2sq) * P),
            cap((h1sq + h3sq) * P),
            cap((h2sq + h3sq) * P),
            cap((h1sq + h2sq + h3sq) * P),
        ]
    )


def _v2_value(spec: ChannelSpec, p: np.ndarray, uplink: np.ndarray | None = None) -> float:
    """Inner sum-rate maximum for a fixed relay power split p (array of six)."""
    h1sq, h2sq, h3sq = spec.h1 ** 2, spec.h2 ** 2, spec.h3 ** 2
    if uplink is None:
        uplink = _uplink_bound_values(spec)
    # Users decode their two incoming streams treating unknown others as noise.
    d1 = gaussian_capacity(h1sq * (p[2] + p[4]) / (1.0 + h1sq * (p[3] + p[5])))
    d2 = gaussian_capacity(h2sq * (p[0] + p[5]) / (1.0 + h2sq * (p[1] + p[4])))
    d3 = gaussian_capacity(h3sq * (p[1] + p[3]) / (1.0 + h3sq * (p[2] + p[0])))
    b = np.concatenate([uplink, [d1, d2, d3]])
    status, _, value = lp.solve_arrays(_ONES6, _V2_ROWS, b)
    if status != "optimal":
        raise ArithmeticError(f"inner rate program unexpectedly {status}")
    return float(value)


def cdf_v2_inner(spec: ChannelSpec, powers: DownlinkPowers) -> float:
    """Sum-rate maximum of variant 2 for a given relay power split."""
    budget_slack = 1e-9 * (1.0 + spec.P)
    if powers.total > spec.P + budget_slack:
        raise ValueError(
            f"power split sums to {powers.total}, exceeding the budget {spec.P}"
        )
    return _v2_value(spec, np.asarray(powers.as_tuple(), dtype=float))


def _v2_seed_points(spec: ChannelSpec, search: SearchConfig) -> list[np.ndarray]:
    P = spec.P
    seeds = []
    for k in range(6):  # all power on one stream
        p = np.zeros(6)
        p[k] = P
        seeds.append(p)
    seeds.append(np.full(6, P / 6.0))
    for frac in (0.5, 2.0 / 3.0):  # splits across the strongest exchange pair
        p = np.zeros(6)
        p[0] = frac * P
        p[2] = (1.0 - frac) * P
        seeds.append(p)
    if search.random_starts > 0:
        rng = np.random.Generator(np.random.Philox(search.seed))
        for _ in range(search.random_starts):
            seeds.append(rng.dirichlet(np.ones(6)) * P)
    return seeds


def _v2_ascend(
    spec: ChannelSpec,
    p: np.ndarray,
    value: float,
    search: SearchConfig,
    uplink: np.ndarray,
) -> tuple[np.ndarray, float]:
    """Greedy coordinate ascent over the power simplex with shrinking steps."""
    P = spec.P
    step = search.step_fraction * P
    for _ in range(search.shrink_rounds):
        for _ in range(search.passes_per_round):
            improved = False
            for i in range(6):
                candidates = []
                slack = P - p.sum()
                if slack > 1e-15 * P:
                    q = p.copy()
                    q[i] += min(step, slack)
                    candidates.append(q)
                if p[i] > 0.0:
                    q = p.copy()
                    q[i] -= min(step, p[i])
                    candidates.append(q)
                donor = max((j for j in range(6) if j != i), key=lambda j: p[j])
                if p[donor] > 0.0:
                    t = min(step, p[donor])
                    q = p.copy()
                    q[i] += t
                    q[donor] -= t
                    candidates.append(q)
                for q in candidates:
                    v = _v2_value(spec, q, uplink)
                    if v > value + 1e-12:
                        p, value = q, v
                        improved = True
            if not improved:
                break
        step *= 0.5
    return p, value


def cdf_v2_optimize(
    spec: ChannelSpec, search: SearchConfig | None = None
) -> tuple[float, DownlinkPowers]:
    """Best variant-2 sum rate over relay power splits.

    Multistart coordinate ascent from nine deterministic seeds (six
    single-stream corners, the uniform split, two splits across the
    strongest exchange pair) plus ``search.random_starts`` seeded points.
    The all-power-to-p12 corner alone already attains C(h2^2 P), so the
    returned value is never below that floor (up to solver tolerance).
    """
    if search is None:
        search = SearchConfig()
    if spec.P <= 0.0:
        return 0.0, DownlinkPowers(0, 0, 0, 0, 0, 0)
    uplink = _uplink_bound_values(spec)
    starts = _v2_seed_points(spec, search)
    scored = [(_v2_value(spec, p, uplink), idx, p) for idx, p in enumerate(starts)]
    scored.sort(key=lambda t: (-t[0], t[1]))
    best_value, _, best_p = scored[0]
    limit = len(scored) if search.ascent_from is None else min(search.ascent_from, len(scored))
    for value, _, p in scored[:limit]:
        p2, v2 = _v2_ascend(spec, p.copy(), value, search, uplink)
        if v2 > best_value + 1e-12:
            best_value, best_p = v2, p2
    return float(best_value), DownlinkPowers(*(float(v) for v in best_p))


# --------------------------------------------------------------------------
# functional decode-and-forward
# --------------------------------------------------------------------------

def _safe_ratio(numerator: float, denominator: np.ndarray) -> np.ndarray:
    """numerator / denominator with zero denominators mapped to +inf.

    A zero denominator means the corresponding user never transmits; the
    term it feeds is dropped from its min (treated as no power limit), and
    the slot weight multiplying any such rate is zero anyway.
    """
    out = np.full(denominator.shape, np.inf)
    with np.errstate(over="ignore"):
        np.divide(numerator, denominator, out=out, where=denominator > 0)
    return out


def _cplus(x: np.ndarray) -> np.ndarray:
    """Vectorized max{0, 0.5 log2(1+x)}; handles -inf..+inf without warnings."""
    return 0.5 * np.log2(np.maximum(1.0 + x, 1.0))


def _fdf_values(
    spec: ChannelSpec, a12: np.ndarray, a23: np.ndarray, a31: np.ndarray
) -> np.ndarray:
    """Vectorized scheme sum rate for block allocations on the simplex.

    Each pair's lattice rate is limited by the relay's modulo-sum decoding,
    C+(g^2 P* - 1/2) with the pair's effective power P* boosted by the
    transmit duty cycle, and by the weaker user's broadcast capacity.
    """
    x1 = spec.h1 ** 2 * spec.P
    x2 = spec.h2 ** 2 * spec.P
    x3 = spec.h3 ** 2 * spec.P
    duty1 = _safe_ratio(x1, a12 + a31)  # user 1 active in slots 12 and 31
    duty2 = _safe_ratio(x2, a12 + a23)
    duty3 = _safe_ratio(x3, a23 + a31)
    cap2 = clamped_capacity(x2)
    cap3 = clamped_capacity(x3)
    pair12 = np.minimum(_cplus(np.minimum(duty1, duty2) - 0.5), cap2)
    pair13 = np.minimum(_cplus(np.minimum(duty1, duty3) - 0.5), cap3)
    pair23 = np.minimum(_cplus(np.minimum(duty2, duty3) - 0.5), cap3)
    return 2.0 * (a12 * pair12 + a23 * pair13 + a31 * pair23)


def fdf_sum_rate(spec: ChannelSpec, alloc: FdfAllocation) -> float:
    """Scheme sum rate for one block allocation."""
    vals = _fdf_values(
        spec,
        np.array([alloc.alpha12]),
        np.array([alloc.alpha23]),
        np.array([alloc.alpha31]),
    )
    return float(vals[0])


def _simplex_lattice(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Integer lattice {(i, j): i + j <= n} in lexicographic order."""
    i = np.repeat(np.arange(n + 1), np.arange(n + 1, 0, -1))
    j = np.concatenate([np.arange(n + 1 - k) for k in range(n + 1)])
    return i, j


#: Allocations evaluated on every search regardless of the grid: the three
#: corners, the edge midpoints, and the centroid (which no power-of-two
#: refinement of the grid can represent exactly).
_FDF_FIXED_POINTS = (
    (1.0, 0.0, 0.0),
    (0.0, 1.0, 0.0),
    (0.0, 0.0, 1.0),
    (0.5, 0.5, 0.0),
    (0.5, 0.0, 0.5),
    (0.0, 0.5, 0.5),
    (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0),
)


def fdf_optimize(
    spec: ChannelSpec, grid_step: float = DEFAULT_FDF_STEP
) -> tuple[float, FdfAllocation]:
    """Best scheme sum rate over a simplex grid of the given step.

    The coarse grid is refined once at half the step around its best point;
    corners, edge midpoints and the centroid are always evaluated, so the
    result is never below the two-user corner value 2 min{C+(h2^2 P - 1/2),
    C(h2^2 P)}.  Grid ties resolve to the lexicographically lowest
    allocation.
    """
    if not (0.0 < grid_step <= 0.5):
        raise ValueError(f"grid_step must lie in (0, 1/2], got {grid_step}")
    n = max(2, round(1.0 / grid_step))
    gi, gj = _simplex_lattice(n)
    a12 = gi / n
    a23 = gj / n
    a31 = (n - gi - gj) / n
    values = _fdf_values(spec, a12, a23, a31)
    k = int(np.argmax(values))
    best_value = float(values[k])
    best_alloc = (float(a12[k]), float(a23[k]), float(a31[k]))

    # One refinement level: half-step lattice in a window around the winner.
    n2 = 2 * n
    ci = np.arange(max(0, 2 * gi[k] - 2), min(n2, 2 * gi[k] + 2) + 1)
    cj = np.arange(max(0, 2 * gj[k] - 2), min(n2, 2 * gj[k] + 2) + 1)
    ri, rj = np.meshgrid(ci, cj, indexing="ij")
    keep = ri + rj <= n2
    ri, rj = ri[keep], rj[keep]
    r12 = ri / n2
    r23 = rj / n2
    r31 = (n2 - ri - rj) / n2
    rvals = _fdf_values(spec, r12, r23, r31)
    rk = int(np.argmax(rvals))
    if float(rvals[rk]) > best_value:
        best_value = float(rvals[rk])
        best_alloc = (float(r12[rk]), float(r23[rk]), float(r31[rk]))

    fixed = np.array(_FDF_FIXED_POINTS)
    fvals = _fdf_values(spec, fixed[:, 0], fixed[:, 1], fixed[:, 2])
    fk = int(np.argmax(fvals))
    if float(fvals[fk]) > best_value:
        best_value = float(fvals[fk])
        best_alloc = tuple(float(v) for v in fixed[fk])

    return best_value, FdfAllocation(*best_alloc)


# --------------------------------------------------------------------------
# K users
# --------------------------------------------------------------------------

def kuser_lower(kspec: KStarSpec) -> float:
    """Sum rate of running only the two strongest users as a two-way pair:

        2 min{C+(g^2 P - 1/2), C(g^2 P)}

    with g the second-largest gain magnitude.  Extra users are switched off.
    """
    g = kspec.gains[1]
    x = g * g * kspec.P
    return 2.0 * min(clamped_capacity(x - 0.5), gaussian_capacity(x))


# --------------------------------------------------------------------------
# aggregation
# --------------------------------------------------------------------------

def lower_report(
    spec: ChannelSpec,
    search: SearchConfig | None = None,
    fdf_step: float = DEFAULT_FDF_STEP,
) -> LowerReport:
    """All three achievable sum rates with their maximizing witnesses."""
    v1 = cdf_v1_sum_rate_closed(spec)
    v2, powers = cdf_v2_optimize(spec, search)
    v3, alloc = fdf_optimize(spec, fdf_step)
    named = (("cdf_v1", v1), ("cdf_v2", v2), ("fdf", v3))
    best_name, best = max(named, key=lambda t: t[1])
    return LowerReport(
        cdf_v1=v1,
        cdf_v2=v2,
        fdf=v3,
        best_name=best_name,
        best=best,
        fdf_allocation=alloc,
        downlink_powers=powers,
    )
