"""Channel instances, canonical gain ordering, and the two capacity primitives.

All rates are in bits per channel use (base-2 logarithms).  The receiver
noise variance is fixed at 1 everywhere, so the transmit power P doubles as
the SNR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

#: Ordered (source, destination) pairs indexing every six-rate vector.
RATE_PAIRS: tuple[tuple[int, int], ...] = (
    (1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2),
)

_PAIR_INDEX = {pair: i for i, pair in enumerate(RATE_PAIRS)}


def pair_index(source: int, destination: int) -> int:
    """Position of the rate from `source` to `destination` in a six-rate vector."""
    return _PAIR_INDEX[(source, destination)]


def gaussian_capacity(x: float) -> float:
    """AWGN capacity 0.5*log2(1+x) in bits, for an SNR-like argument x >= 0."""
    if math.isnan(x) or x < 0:
        raise ValueError(f"capacity argument must be >= 0, got {x}")
    return 0.5 * math.log2(1.0 + x)


def clamped_capacity(x: float) -> float:
    """max{0, gaussian_capacity(x)}, defined as 0 for every x <= 0.

    The clamp is applied before the log so that arguments at or below -1
    (which arise in rate expressions of the form C+(g^2*P - 1/2) whenever the
    scheme carries zero rate) do not trip a domain error.
    """
    if x <= 0:
        return 0.0
    return gaussian_capacity(x)


def snr_db_to_power(snr_db: float) -> float:
    """Linear transmit power for an SNR given in decibels (unit noise variance)."""
    return 10.0 ** (snr_db / 10.0)


def _require_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class ChannelSpec:
    """A reciprocal three-user relay channel instance.

    Real gain amplitudes ordered so that h1^2 >= h2^2 >= h3^2 >= 0 (build
    from unordered gains with :func:`canonicalize`); P is the per-node
    transmit power.  Negative gains are allowed, every formula downstream
    uses squares or absolute values.
    """

    h1: float
    h2: float
    h3: float
    P: float

    def __post_init__(self) -> None:
        for name in ("h1", "h2", "h3", "P"):
            _require_finite(name, getattr(self, name))
        if self.P < 0:
            raise ValueError(f"P must be >= 0, got {self.P}")
        if not (self.h1 ** 2 >= self.h2 ** 2 >= self.h3 ** 2):
            raise ValueError(
                "gains must satisfy h1^2 >= h2^2 >= h3^2; use canonicalize()"
            )

    @property
    def gains(self) -> tuple[float, float, float]:
        return (self.h1, self.h2, self.h3)

    def with_power(self, P: float) -> "ChannelSpec":
        return replace(self, P=P)


@dataclass(frozen=True)
class KStarSpec:
    """A star network of K >= 2 users exchanging pairwise messages via one relay.

    Gains must be sorted by descending magnitude; gains[0] is the strongest
    user and gains[1] the second strongest (the one the two-user fallback
    scheme pairs with the strongest).
    """

    gains: tuple[float, ...]
    P: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "gains", tuple(float(g) for g in self.gains))
        if len(self.gains) < 2:
            raise ValueError("at least two users are required")
        for i, g in enumerate(self.gains):
            _require_finite(f"gains[{i}]", g)
        _require_finite("P", self.P)
        if self.P < 0:
            raise ValueError(f"P must be >= 0, got {self.P}")
        for i in range(len(self.gains) - 1):
            if abs(self.gains[i]) < abs(self.gains[i + 1]):
                raise ValueError("gains must be sorted by descending magnitude")

    @property
    def K(self) -> int:
        return len(self.gains)

    def with_power(self, P: float) -> "KStarSpec":
        return replace(self, P=P)


@dataclass(frozen=True)
class NonReciprocalSpec:
    """Y-channel with distinct user-to-relay and relay-to-user gains.

    to_relay[j-1] is the gain from user j to the relay, from_relay[j-1] the
    gain from the relay to user j.  No ordering is imposed here; example
    specific orderings are validated by the operations that rely on them.
    """

    to_relay: tuple[float, float, float]
    from_relay: tuple[float, float, float]
    P: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "to_relay", tuple(float(g) for g in self.to_relay))
        object.__setattr__(self, "from_relay", tuple(float(g) for g in self.from_relay))
        if len(self.to_relay) != 3 or len(self.from_relay) != 3:
            raise ValueError("to_relay and from_relay must each hold three gains")
        for i in range(3):
            _require_finite(f"to_relay[{i}]", self.to_relay[i])
            _require_finite(f"from_relay[{i}]", self.from_relay[i])
        _require_finite("P", self.P)
        if self.P < 0:
            raise ValueError(f"P must be >= 0, got {self.P}")

    def with_power(self, P: float) -> "NonReciprocalSpec":
        return replace(self, P=P)


@dataclass(frozen=True)
class RateTuple:
    """Six nonnegative unicast rates, indexed like RATE_PAIRS, in bits/use."""

    r12: float
    r13: float
    r21: float
    r23: float
    r31: float
    r32: float

    def __post_init__(self) -> None:
        for name, value in zip(("r12", "r13", "r21", "r23", "r31", "r32"), self.as_tuple()):
            _require_finite(name, value)
            if value < 0:
                raise ValueError(f"{name} must be >= 0, got {value}")

    def as_tuple(self) -> tuple[float, ...]:
        return (self.r12, self.r13, self.r21, self.r23, self.r31, self.r32)

    @property
    def total(self) -> float:
        """The sum rate over all six streams."""
        return sum(self.as_tuple())

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> "RateTuple":
        if len(values) != 6:
            raise ValueError(f"expected six rates, got {len(values)}")
        return cls(*(float(v) for v in values))


def canonicalize(
    gains: Sequence[float], P: float
) -> tuple[ChannelSpec, tuple[int, int, int]]:
    """Sort three gains by descending square into a :class:`ChannelSpec`.

    Returns the spec together with the permutation p, where p[i] is the
    1-based input position of the gain placed in canonical slot i, so that
    gains[p[i]-1] == spec.gains[i].  The sort is stable (equal squares keep
    input order) and signs are preserved.
    """
    g = [float(x) for x in gains]
    if len(g) != 3:
        raise ValueError(f"expected three gains, got {len(g)}")
    for i, x in enumerate(g):
        _require_finite(f"gains[{i}]", x)
    _require_finite("P", P)
    if P < 0:
        raise ValueError(f"P must be >= 0, got {P}")
    order = sorted(range(3), key=lambda i: -(g[i] * g[i]))
    spec = ChannelSpec(g[order[0]], g[order[1]], g[order[2]], float(P))
    return spec, (order[0] + 1, order[1] + 1, order[2] + 1)
