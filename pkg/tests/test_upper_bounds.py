import math

import pytest

from ychannel.model import ChannelSpec, KStarSpec
from ychannel.upper_bounds import (
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

C = lambda x: 0.5 * math.log2(1.0 + x)

SYM1 = ChannelSpec(1.0, 1.0, 1.0, 1.0)
ASYM100 = ChannelSpec(1.0, 0.8, 0.6, 100.0)
ZERO_P = ChannelSpec(1.0, 0.8, 0.6, 0.0)


class TestCutset:
    def test_pair_constraints_symmetric_unit(self):
        cons = cutset_pair_constraints(SYM1)
        assert len(cons) == 6
        for c in cons:
            assert c.bound == pytest.approx(0.5, abs=1e-12)

    def test_pair_constraints_zero_power(self):
        assert all(c.bound == 0.0 for c in cutset_pair_constraints(ZERO_P))

    def test_pair_constraint_outflow_user1(self):
        cons = cutset_pair_constraints(ASYM100)
        first = next(c for c in cons if c.label == "cut_out_1")
        # min{h1^2, h2^2 + h3^2} = min{1, 1.0} = 1
        assert first.bound == pytest.approx(C(100.0), abs=1e-12)
        assert first.coefficients == (1.0, 1.0, 0.0, 0.0, 0.0, 0.0)

    def test_sum_upper(self):
        assert cutset_sum_upper(SYM1) == pytest.approx(1.5, abs=1e-12)
        expected = C(100) + C(64) + C(36)
        assert cutset_sum_upper(ASYM100) == pytest.approx(expected, abs=1e-12)
        assert cutset_sum_upper(ZERO_P) == 0.0

    def test_lp_never_exceeds_scalar(self, spec_pool):
        for spec in spec_pool[:60]:
            assert cutset_sum_upper_lp(spec) <= cutset_sum_upper(spec) + 1e-9

    def test_lp_symmetric_unit(self):
        assert cutset_sum_upper_lp(SYM1) == pytest.approx(1.5, abs=1e-9)
        assert cutset_sum_upper_lp(ZERO_P) == pytest.approx(0.0, abs=1e-12)


class TestGenie:
    def test_triple_constraint_213(self):
        cons = genie_triple_constraints(SYM1, "nonrestricted")
        assert len(cons) == 6
        c213 = next(c for c in cons if c.label == "genie_213")
        # min{C(2), C(4)} = C(2)
        assert c213.bound == pytest.approx(C(2.0), abs=1e-12)
        # constraint covers R_12 + R_32 + R_13
        assert c213.coefficients == (1.0, 1.0, 0.0, 0.0, 0.0, 1.0)

    def test_triple_constraint_restricted(self):
        cons = genie_triple_constraints(SYM1, "restricted")
        c213 = next(c for c in cons if c.label == "genie_213")
        assert c213.bound == pytest.approx(C(2.0), abs=1e-12)

    def test_triple_constraints_zero_power(self):
        assert all(c.bound == 0.0 for c in genie_triple_constraints(ZERO_P))

    def test_mode_validated(self):
        with pytest.raises(ValueError):
            genie_triple_constraints(SYM1, "other")

    def test_sum_upper(self):
        assert genie_sum_upper(SYM1) == pytest.approx(math.log2(3.0), abs=1e-12)
        # min{1.36, 1.96} = 1.36
        expected = C(100) + C(136)
        assert genie_sum_upper(ASYM100) == pytest.approx(expected, abs=1e-12)
        assert genie_sum_upper(ZERO_P) == 0.0

    def test_lp_never_exceeds_scalar(self, spec_pool):
        for spec in spec_pool[:40]:
            assert genie_sum_upper_lp(spec, "nonrestricted") <= genie_sum_upper(spec) + 1e-9
            assert genie_sum_upper_lp(spec, "restricted") <= restricted_sum_upper(spec) + 1e-9

    def test_lp_symmetric_unit(self):
        assert genie_sum_upper_lp(SYM1, "nonrestricted") <= math.log2(3.0) + 1e-9
        assert genie_sum_upper_lp(SYM1, "restricted") <= math.log2(3.0) + 1e-9


class TestRestricted:
    def test_values(self):
        assert restricted_sum_upper(ASYM100) == pytest.approx(math.log2(101), abs=1e-12)
        assert restricted_sum_upper(SYM1) == pytest.approx(math.log2(3.0), abs=1e-12)
        assert restricted_sum_upper(ZERO_P) == 0.0

    def test_never_looser_than_genie(self, spec_pool):
        # h_k^2 + h_l^2 <= (|h_k| + |h_l|)^2 makes the restricted bound tighter
        for spec in spec_pool:
            assert restricted_sum_upper(spec) <= genie_sum_upper(spec) + 1e-12


class TestKUser:
    def test_three_users_unit(self):
        kspec = KStarSpec((1.0, 1.0, 1.0), 1.0)
        expected = 0.5 * math.log2(3.0) + 0.5 * math.log2(5.0)
        assert kuser_sum_upper(kspec) == pytest.approx(expected, abs=1e-12)

    def test_three_users_p100(self):
        kspec = KStarSpec((1.0, 1.0, 1.0), 100.0)
        expected = 0.5 * math.log2(201.0) + 0.5 * math.log2(401.0)
        assert kuser_sum_upper(kspec) == pytest.approx(expected, abs=1e-12)

    def test_zero_power(self):
        assert kuser_sum_upper(KStarSpec((1.0, 0.5, 0.2), 0.0)) == 0.0

    def test_two_users_reduces_to_pair_bound(self):
        kspec = KStarSpec((1.0, 0.8), 10.0)
        assert kuser_sum_upper(kspec) == pytest.approx(2.0 * C(6.4), abs=1e-12)


class TestBestUpper:
    def test_symmetric_unit(self):
        report = best_upper(SYM1, "nonrestricted")
        assert report.best == pytest.approx(1.5, abs=1e-12)
        assert report.cutset_lp is not None and report.genie_lp is not None

    def test_genie_wins_at_high_power(self):
        report = best_upper(ASYM100, "nonrestricted")
        assert report.best == pytest.approx(C(100) + C(136), abs=1e-12)

    def test_restricted_mode(self):
        report = best_upper(ASYM100, "restricted")
        assert report.best == pytest.approx(min(cutset_sum_upper(ASYM100), math.log2(101)), abs=1e-12)

    def test_zero_power(self):
        assert best_upper(ZERO_P, "nonrestricted").best == 0.0

    def test_skip_lp(self):
        report = best_upper(SYM1, "nonrestricted", include_lp=False)
        assert report.cutset_lp is None and report.genie_lp is None

    def test_as_dict_keys(self):
        report = best_upper(SYM1, "nonrestricted")
        assert set(report.as_dict()) == {
            "cutset_sum", "genie_sum", "restricted_sum", "cutset_lp", "genie_lp", "best_upper",
        }


class TestMonotonicity:
    def test_nondecreasing_in_power(self):
        powers = [0.0, 0.1, 0.5, 1.0, 5.0, 20.0, 1e3, 1e5]
        for fn in (cutset_sum_upper, genie_sum_upper, restricted_sum_upper):
            vals = [fn(ChannelSpec(1.0, 0.8, 0.6, p)) for p in powers]
            assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_nondecreasing_in_each_gain(self):
        base = (1.0, 0.8, 0.6)
        for fn in (cutset_sum_upper, genie_sum_upper, restricted_sum_upper):
            for idx in range(3):
                scales = [1.0, 1.01, 1.05, 1.1]
                vals = []
                for s in scales:
                    g = list(base)
                    g[idx] *= s
                    g.sort(key=lambda v: -v * v)
                    vals.append(fn(ChannelSpec(*g, 10.0)))
                assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
