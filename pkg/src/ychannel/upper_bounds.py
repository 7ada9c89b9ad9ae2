"""Converse bounds on the sum rate: cut-set, genie-aided, restricted-encoder, K-user.

Each bound exists in two forms where that is useful: a closed-form scalar
(the specific constraint combination whose sum certifies the bound) and an
LP variant that maximizes the sum rate over the full constraint list, for
numerically probing how much slack the chosen combination leaves.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from . import lp
from .lp import RateConstraint, rate_constraint
from .model import ChannelSpec, KStarSpec, gaussian_capacity

MODES = ("nonrestricted", "restricted")

#: Fixed evaluation order of the (j, k, l) user triples for three-rate bounds.
TRIPLES: tuple[tuple[int, int, int], ...] = tuple(permutations((1, 2, 3)))


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


@dataclass(frozen=True)
class BoundReport:
    """Named upper-bound values for one channel instance.

    `best` is the minimum over the bounds applicable to the requested
    encoder mode: min{cutset_sum, genie_sum} for nonrestricted encoders,
    min{cutset_sum, restricted_sum} for restricted ones.  The LP entries are
    informational and are None when not computed.
    """

    mode: str
    cutset_sum: float
    genie_sum: float
    restricted_sum: float
    best: float
    cutset_lp: float | None = None
    genie_lp: float | None = None

    def as_dict(self) -> dict[str, float | None]:
        return {
            "cutset_sum": self.cutset_sum,
            "genie_sum": self.genie_sum,
            "restricted_sum": self.restricted_sum,
            "cutset_lp": self.cutset_lp,
            "genie_lp": self.genie_lp,
            "best_upper": self.best,
        }


def cutset_pair_constraints(spec: ChannelSpec) -> list[RateConstraint]:
    """Six two-rate cut constraints.

    Outflow of each user j (partners k, l):
        R_jk + R_jl <= C(min{h_j^2, h_k^2 + h_l^2} P)
    Inflow into each user l (sources j, k):
        R_jl + R_kl <= C(min{(|h_j|+|h_k|)^2, h_l^2} P)
    """
    h = {1: spec.h1, 2: spec.h2, 3: spec.h3}
    P = spec.P
    constraints: list[RateConstraint] = []
    for j in (1, 2, 3):
        k, l = (u for u in (1, 2, 3) if u != j)
        bound = gaussian_capacity(min(h[j] ** 2, h[k] ** 2 + h[l] ** 2) * P)
        constraints.append(rate_constraint([(j, k), (j, l)], bound, f"cut_out_{j}"))
    for l in (1, 2, 3):
        j, k = (u for u in (1, 2, 3) if u != l)
        bound = gaussian_capacity(min((abs(h[j]) + abs(h[k])) ** 2, h[l] ** 2) * P)
        constraints.append(rate_constraint([(j, l), (k, l)], bound, f"cut_in_{l}"))
    return constraints


def cutset_sum_upper(spec: ChannelSpec) -> float:
    """Cut-set sum bound C(min{h1^2, h2^2+h3^2} P) + C(h2^2 P) + C(h3^2 P).

    Sum of the three outflow cuts; the gain ordering collapses the min for
    users 2 and 3.
    """
    P = spec.P
    return (
        gaussian_capacity(min(spec.h1 ** 2, spec.h2 ** 2 + spec.h3 ** 2) * P)
        + gaussian_capacity(spec.h2 ** 2 * P)
        + gaussian_capacity(spec.h3 ** 2 * P)
    )


def cutset_sum_upper_lp(spec: ChannelSpec) -> float:
    """Sum-rate maximum over all six cut constraints; never above cutset_sum_upper."""
    return lp.max_sum_rate(cutset_pair_constraints(spec))


def genie_triple_constraints(spec: ChannelSpec, mode: str = "nonrestricted") -> list[RateConstraint]:
    """Three-rate genie-aided constraints, one per ordered user triple (j, k, l):

        R_kj + R_lj + R_kl <= min{C((h_j^2 + h_l^2) P), X}

    where X = C((|h_k|+|h_l|)^2 P) for nonrestricted encoders (transmit
    signals may be correlated through feedback) and X = C((h_k^2 + h_l^2) P)
    for restricted encoders (independent transmit signals).
    """
    _check_mode(mode)
    h = {1: spec.h1, 2: spec.h2, 3: spec.h3}
    P = spec.P
    constraints = []
    for j, k, l in TRIPLES:
        relay_side = gaussian_capacity((h[j] ** 2 + h[l] ** 2) * P)
        if mode == "nonrestricted":
            user_side = gaussian_capacity((abs(h[k]) + abs(h[l])) ** 2 * P)
        else:
            user_side = gaussian_capacity((h[k] ** 2 + h[l] ** 2) * P)
        constraints.append(
            rate_constraint(
                [(k, j), (l, j), (k, l)],
                min(relay_side, user_side),
                f"genie_{j}{k}{l}",
            )
        )
    return constraints


def genie_sum_upper(spec: ChannelSpec) -> float:
    """Genie-aided sum bound C((h2^2+h3^2) P) + C(min{h1^2+h3^2, (|h2|+|h3|)^2} P).

    Sum of two complementary triple constraints; its pre-log is 2, one less
    than the cut-set bound's, so it dominates at high power.
    """
    P = spec.P
    first = gaussian_capacity((spec.h2 ** 2 + spec.h3 ** 2) * P)
    second = gaussian_capacity(
        min(spec.h1 ** 2 + spec.h3 ** 2, (abs(spec.h2) + abs(spec.h3)) ** 2) * P
    )
    return first + second


def genie_sum_upper_lp(spec: ChannelSpec, mode: str = "nonrestricted") -> float:
    """Sum-rate maximum over the triple constraints joined with the cut constraints.

    Never above genie_sum_upper (nonrestricted) or restricted_sum_upper
    (restricted): the maximized polytope includes the two rows whose sum
    gives the scalar bound.
    """
    _check_mode(mode)
    constraints = genie_triple_constraints(spec, mode) + cutset_pair_constraints(spec)
    return lp.max_sum_rate(constraints)


def restricted_sum_upper(spec: ChannelSpec) -> float:
    """Restricted-encoder sum bound 2 C((h2^2 + h3^2) P)."""
    return 2.0 * gaussian_capacity((spec.h2 ** 2 + spec.h3 ** 2) * spec.P)


def kuser_sum_upper(kspec: KStarSpec) -> float:
    """K-user star-channel sum bound using all gains but the strongest:

        0.5 log2(1 + ||h||_2^2 P) + 0.5 log2(1 + ||h||_1^2 P)
    """
    weak = kspec.gains[1:]
    l2_sq = sum(g * g for g in weak)
    l1 = sum(abs(g) for g in weak)
    return gaussian_capacity(l2_sq * kspec.P) + gaussian_capacity(l1 * l1 * kspec.P)


def best_upper(spec: ChannelSpec, mode: str = "nonrestricted", include_lp: bool = True) -> BoundReport:
    """All applicable upper bounds for one instance, with the per-mode minimum.

    include_lp=False skips the two LP probes (they never affect `best`),
    which matters in large parameter sweeps.
    """
    _check_mode(mode)
    cutset = cutset_sum_upper(spec)
    genie = genie_sum_upper(spec)
    restricted = restricted_sum_upper(spec)
    best = min(cutset, genie) if mode == "nonrestricted" else min(cutset, restricted)
    cutset_lp = cutset_sum_upper_lp(spec) if include_lp else None
    genie_lp = genie_sum_upper_lp(spec, mode) if include_lp else None
    return BoundReport(
        mode=mode,
        cutset_sum=cutset,
        genie_sum=genie,
        restricted_sum=restricted,
        best=best,
        cutset_lp=cutset_lp,
        genie_lp=genie_lp,
    )
