import math

import pytest
from hypothesis import given, strategies as st

from ychannel.model import (
    RATE_PAIRS,
    ChannelSpec,
    KStarSpec,
    NonReciprocalSpec,
    RateTuple,
    canonicalize,
    clamped_capacity,
    gaussian_capacity,
    pair_index,
    snr_db_to_power,
)

finite_gains = st.floats(min_value=-10, max_value=10, allow_nan=False)


class TestGaussianCapacity:
    def test_values(self):
        assert gaussian_capacity(0.0) == 0.0
        assert gaussian_capacity(1.0) == 0.5
        assert gaussian_capacity(100.0) == pytest.approx(0.5 * math.log2(101), abs=1e-15)

    def test_rejects_negative_and_nan(self):
        with pytest.raises(ValueError):
            gaussian_capacity(-0.1)
        with pytest.raises(ValueError):
            gaussian_capacity(float("nan"))

    def test_strictly_increasing_and_concave(self):
        grid = [0.05 * k for k in range(400)]
        vals = [gaussian_capacity(x) for x in grid]
        diffs = [b - a for a, b in zip(vals, vals[1:])]
        assert all(d > 0 for d in diffs)
        assert all(d2 <= d1 + 1e-12 for d1, d2 in zip(diffs, diffs[1:]))


class TestClampedCapacity:
    def test_values(self):
        assert clamped_capacity(-0.25) == 0.0
        assert clamped_capacity(-2.0) == 0.0
        assert clamped_capacity(0.5) == pytest.approx(0.5 * math.log2(1.5), abs=1e-15)

    @given(st.floats(min_value=0, max_value=1e12))
    def test_matches_gaussian_on_nonnegative(self, x):
        assert clamped_capacity(x) == gaussian_capacity(x)

    @given(st.floats(min_value=-1e12, max_value=0))
    def test_zero_on_nonpositive(self, x):
        assert clamped_capacity(x) == 0.0


def test_snr_db_to_power():
    assert snr_db_to_power(0.0) == 1.0
    assert snr_db_to_power(10.0) == pytest.approx(10.0, rel=1e-15)
    assert snr_db_to_power(20.0) == pytest.approx(100.0, rel=1e-15)


def test_rate_pairs_indexing():
    assert len(RATE_PAIRS) == 6
    for i, (j, k) in enumerate(RATE_PAIRS):
        assert pair_index(j, k) == i


class TestChannelSpec:
    def test_ordering_enforced(self):
        with pytest.raises(ValueError):
            ChannelSpec(0.5, 1.0, 0.1, 1.0)

    def test_negative_power_rejected(self):
        with pytest.raises(ValueError):
            ChannelSpec(1.0, 0.5, 0.1, -1.0)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            ChannelSpec(float("inf"), 0.5, 0.1, 1.0)
        with pytest.raises(ValueError):
            ChannelSpec(1.0, 0.5, 0.1, float("nan"))

    def test_negative_gains_allowed(self):
        spec = ChannelSpec(-0.9, 0.5, 0.1, 2.0)
        assert spec.gains == (-0.9, 0.5, 0.1)

    def test_with_power(self):
        spec = ChannelSpec(1.0, 0.8, 0.6, 1.0)
        assert spec.with_power(7.0).P == 7.0
        assert spec.P == 1.0


class TestCanonicalize:
    def test_sorts_by_descending_square(self):
        spec, perm = canonicalize((0.6, 1.0, 0.8), 10.0)
        assert spec.gains == (1.0, 0.8, 0.6)
        assert spec.P == 10.0
        assert perm == (2, 3, 1)

    def test_ties_keep_input_order(self):
        spec, perm = canonicalize((1.0, 1.0, 1.0), 1.0)
        assert spec.gains == (1.0, 1.0, 1.0)
        assert perm == (1, 2, 3)

    def test_uses_squares_preserves_sign(self):
        spec, perm = canonicalize((-0.9, 0.5, 0.1), 2.0)
        assert spec.gains == (-0.9, 0.5, 0.1)
        assert perm == (1, 2, 3)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            canonicalize((1.0, float("nan"), 0.5), 1.0)
        with pytest.raises(ValueError):
            canonicalize((1.0, 0.5, 0.2), -1.0)

    @given(st.tuples(finite_gains, finite_gains, finite_gains),
           st.floats(min_value=0, max_value=1e6))
    def test_roundtrip_and_idempotence(self, gains, power):
        spec, perm = canonicalize(gains, power)
        # applying the permutation to the canonical gains recovers the input
        for slot, source in enumerate(perm):
            assert spec.gains[slot] == gains[source - 1]
        again, perm2 = canonicalize(spec.gains, power)
        assert again.gains == spec.gains
        assert perm2 == (1, 2, 3)


class TestKStarSpec:
    def test_requires_sorted_magnitudes(self):
        with pytest.raises(ValueError):
            KStarSpec((0.5, 1.0), 1.0)

    def test_accepts_sign_mixed_sorted(self):
        spec = KStarSpec((-1.0, 0.8, -0.3), 1.0)
        assert spec.K == 3

    def test_minimum_two_users(self):
        with pytest.raises(ValueError):
            KStarSpec((1.0,), 1.0)


class TestNonReciprocalSpec:
    def test_shape_checked(self):
        with pytest.raises(ValueError):
            NonReciprocalSpec((1.0, 0.5), (1.0, 0.5, 0.1), 1.0)

    def test_finite_checked(self):
        with pytest.raises(ValueError):
            NonReciprocalSpec((1.0, 0.5, float("inf")), (1.0, 0.5, 0.1), 1.0)


class TestRateTuple:
    def test_total(self):
        rt = RateTuple(0.1, 0.2, 0.3, 0.4, 0.5, 0.6)
        assert rt.total == pytest.approx(2.1)

    def test_nonnegative(self):
        with pytest.raises(ValueError):
            RateTuple(-0.1, 0, 0, 0, 0, 0)

    def test_from_sequence(self):
        rt = RateTuple.from_sequence([1, 2, 3, 4, 5, 6])
        assert rt.as_tuple() == (1.0, 2.0, 3.0, 4.0, 5.0, 6.0)
        with pytest.raises(ValueError):
            RateTuple.from_sequence([1, 2, 3])
