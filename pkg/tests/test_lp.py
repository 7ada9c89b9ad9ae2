import math

import numpy as np
import pytest

from ychannel import lp
from ychannel.cli import _random_bounded_lp, _rng
from ychannel.lp import (
    LinearProgram,
    RateConstraint,
    check_feasible,
    enumerate_vertices,
    from_rate_constraints,
    rate_constraint,
    solve,
)


def simple_lp(objective, rows):
    n = len(objective)
    return LinearProgram(objective=tuple(objective), rows=tuple(rows), n=n)


class TestSolve:
    def test_single_variable(self):
        sol = solve(simple_lp([1.0], [((1.0,), 1.0)]))
        assert sol.status == "optimal"
        assert sol.value == pytest.approx(1.0, abs=1e-12)
        assert sol.point == pytest.approx((1.0,), abs=1e-12)

    def test_redundant_row(self):
        sol = solve(simple_lp([1.0, 1.0], [((1.0, 1.0), 2.0), ((1.0, 0.0), 3.0)]))
        assert sol.status == "optimal"
        assert sol.value == pytest.approx(2.0, abs=1e-12)

    def test_infeasible(self):
        sol = solve(simple_lp([1.0], [((1.0,), -1.0)]))
        assert sol.status == "infeasible"
        assert sol.point is None

    def test_unbounded(self):
        sol = solve(simple_lp([1.0, 1.0], [((0.0, 1.0), 1.0)]))
        assert sol.status == "unbounded"
        assert sol.value == math.inf

    def test_unbounded_no_rows(self):
        sol = solve(simple_lp([1.0], []))
        assert sol.status == "unbounded"

    def test_zero_objective_no_rows(self):
        sol = solve(simple_lp([0.0, 0.0], []))
        assert sol.status == "optimal"
        assert sol.value == 0.0

    def test_phase1_required(self):
        # x >= 1 encoded as -x <= -1, together with x <= 3
        sol = solve(simple_lp([1.0], [((-1.0,), -1.0), ((1.0,), 3.0)]))
        assert sol.status == "optimal"
        assert sol.value == pytest.approx(3.0, abs=1e-12)

    def test_phase1_minimisation_direction(self):
        # maximize -x with x >= 1, x <= 3 -> optimum at x = 1
        sol = solve(simple_lp([-1.0], [((-1.0,), -1.0), ((1.0,), 3.0)]))
        assert sol.status == "optimal"
        assert sol.value == pytest.approx(-1.0, abs=1e-12)

    def test_degenerate_duplicated_rows(self):
        rows = [((1.0, 1.0), 1.0)] * 5 + [((1.0, 0.0), 1.0)] * 3
        sol = solve(simple_lp([1.0, 2.0], rows))
        assert sol.status == "optimal"
        assert sol.value == pytest.approx(2.0, abs=1e-12)

    def test_optimum_point_is_feasible(self, spec_pool):
        from ychannel.achievable import cdf_v1_constraints

        for spec in spec_pool[:50]:
            program = from_rate_constraints(cdf_v1_constraints(spec))
            sol = solve(program)
            assert sol.status == "optimal"
            assert check_feasible(program, sol.point)


class TestEnumerateVertices:
    def test_single_variable(self):
        verts, best = enumerate_vertices(simple_lp([1.0], [((1.0,), 1.0)]))
        assert sorted(v[0] for v in verts) == pytest.approx([0.0, 1.0])
        assert best == pytest.approx(1.0)

    def test_infeasible_gives_empty(self):
        verts, best = enumerate_vertices(simple_lp([1.0], [((1.0,), -1.0)]))
        assert verts == []
        assert best is None

    def test_dimension_guard(self):
        with pytest.raises(ValueError):
            enumerate_vertices(LinearProgram((1.0,) * 9, (), 9))

    def test_matches_solver_on_random_programs(self):
        rng = _rng(42)
        worst = 0.0
        for _ in range(300):
            program = _random_bounded_lp(rng)
            sol = solve(program)
            verts, best = enumerate_vertices(program)
            assert sol.status == "optimal"
            assert best is not None
            worst = max(worst, abs(sol.value - best))
        assert worst <= 1e-9

    def test_objective_scaling_keeps_argmax_vertices(self):
        rng = _rng(7)
        for _ in range(25):
            program = _random_bounded_lp(rng)
            verts, best = enumerate_vertices(program)
            scaled = LinearProgram(
                tuple(3.0 * c for c in program.objective), program.rows, program.n
            )
            verts2, best2 = enumerate_vertices(scaled)
            assert best2 == pytest.approx(3.0 * best, abs=1e-9)
            c = np.asarray(program.objective)

            def argmax_set(vs, target, obj):
                return {
                    tuple(round(x, 7) for x in v)
                    for v in vs
                    if abs(float(np.dot(obj, v)) - target) <= 1e-9
                }

            assert argmax_set(verts, best, c) == argmax_set(verts2, best2, 3.0 * c)
            sol = solve(scaled)
            assert sol.value == pytest.approx(3.0 * best, abs=1e-9)


class TestCheckFeasible:
    def test_examples(self):
        program = simple_lp([1.0], [((1.0,), 1.0)])
        assert check_feasible(program, (0.5,))
        assert check_feasible(program, (1.0 + 1e-12,))
        assert not check_feasible(program, (2.0,))
        assert not check_feasible(program, (-1.0,))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            check_feasible(simple_lp([1.0], []), (0.5, 0.5))


class TestRateConstraint:
    def test_dimension_checked(self):
        with pytest.raises(ValueError):
            RateConstraint((1.0, 0.0), 1.0)

    def test_builder_places_pairs(self):
        c = rate_constraint([(1, 2), (3, 1)], 0.75, "demo")
        assert c.coefficients == (1.0, 0.0, 0.0, 0.0, 1.0, 0.0)
        assert c.bound == 0.75
        assert c.label == "demo"

    def test_default_objective_is_sum_rate(self):
        program = from_rate_constraints([rate_constraint([(1, 2)], 1.0)])
        assert program.objective == (1.0,) * 6
        assert program.n == 6
