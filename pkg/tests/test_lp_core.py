import itertools
import math
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modules.lp_core import (
    Constraint, LinearProgram, LpStatus, Relation, SimplexSettings, constraint_residuals, solve
)

def lp(objective, matrix, relations, rhs):
    return LinearProgram.from_arrays(objective, matrix, relations, rhs)

def vertex_optimum(c, A, relations, b, tol=1e-9):
    """Best objective over all basic feasible points, or None when there are none."""
    n = len(c)
    rows = [(np.asarray(a, dtype=float), r, float(bk)) for a, r, bk in zip(A, relations, b)]
    rows += [(-np.eye(n)[j], '<=', 0.0) for j in range(n)]

    def feasible(x):
        for a, r, bk in rows:
            lhs = a @ x
            if r == '<=' and lhs > bk + tol:
                return False
            if r == '>=' and lhs < bk - tol:
                return False
            if r == '=' and abs(lhs - bk) > tol:
                return False
        return True

    best = None
    for subset in itertools.combinations(range(len(rows)), n):
        M = np.array([rows[k][0] for k in subset])
        if abs(np.linalg.det(M)) < 1e-9:
            continue
        x = np.linalg.solve(M, np.array([rows[k][2] for k in subset]))
        if feasible(x):
            value = float(np.dot(c, x))
            best = value if best is None else max(best, value)
    return best

def random_bounded_lp(rng):
    n = int(rng.integers(1, 7))
    m = int(rng.integers(1, 7))
    A = rng.integers(-5, 6, size=(m, n)).astype(float)
    b = rng.integers(-5, 11, size=m).astype(float)
    relations = list(rng.choice(['<=', '>=', '='], size=m, p=[0.6, 0.25, 0.15]))
    # A positive <= row keeps the feasible region bounded
    A[0] = rng.integers(1, 6, size=n)
    relations[0] = '<='
    b[0] = float(rng.integers(1, 20))
    c = rng.integers(-5, 6, size=n).astype(float)
    return c, A, relations, b

class TestExamples:
    def test_box(self):
        solution = solve(lp([1, 1], [[1, 0], [0, 1]], ['<=', '<='], [2, 3]))
        assert solution.status == LpStatus.OPTIMAL
        assert solution.objective_value == pytest.approx(5.0, abs=1e-9)
        assert np.allclose(solution.x, [2.0, 3.0])

    def test_unit_box(self):
        solution = solve(lp([1, 1], [[1, 0], [0, 1]], ['<=', '<='], [1, 1]))
        assert solution.status == LpStatus.OPTIMAL
        assert solution.objective_value == pytest.approx(2.0, abs=1e-9)
        assert np.allclose(solution.x, [1.0, 1.0])

    def test_two_rows_vertex_on_axis(self):
        solution = solve(lp([3, 2], [[1, 1], [1, 3]], ['<=', '<='], [4, 6]))
        assert solution.status == LpStatus.OPTIMAL
        assert solution.objective_value == pytest.approx(12.0, abs=1e-9)
        assert np.allclose(solution.x, [4.0, 0.0])

    def test_lower_bound_above_upper_bound(self):
        solution = solve(lp([1], [[1], [1]], ['>=', '<='], [2, 1]))
        assert solution.status == LpStatus.INFEASIBLE
        assert solution.x is None

    def test_contradictory_rows(self):
        solution = solve(lp([1], [[1], [1]], ['<=', '>='], [1, 2]))
        assert solution.status == LpStatus.INFEASIBLE

    def test_single_row_picks_best_ratio(self):
        solution = solve(lp([3, 2], [[1, 1]], ['<='], [4]))
        assert solution.objective_value == pytest.approx(12.0, abs=1e-9)
        assert np.allclose(solution.x, [4.0, 0.0])

    def test_unbounded(self):
        solution = solve(lp([1, 0], [[1, -1]], ['<='], [1]))
        assert solution.status == LpStatus.UNBOUNDED
        assert solution.x is None

    def test_equality_row(self):
        solution = solve(lp([1, 1], [[1, 1], [1, 0]], ['=', '<='], [3, 2]))
        assert solution.objective_value == pytest.approx(3.0, abs=1e-9)

    def test_redundant_equalities(self):
        solution = solve(lp([1, 0], [[1, 1], [2, 2]], ['=', '='], [2, 4]))
        assert solution.status == LpStatus.OPTIMAL
        assert solution.objective_value == pytest.approx(2.0, abs=1e-9)

    def test_negative_rhs_is_normalized(self):
        # -x1 <= -1 is x1 >= 1
        solution = solve(lp([-1], [[-1]], ['<='], [-1]))
        assert solution.objective_value == pytest.approx(-1.0, abs=1e-9)

    def test_no_constraints(self):
        assert solve(lp([-1, 0], [], [], [])).objective_value == pytest.approx(0.0)
        assert solve(lp([1], [], [], [])).status == LpStatus.UNBOUNDED

    def test_degenerate_cycling_example_terminates(self):
        # Textbook LP on which the largest-coefficient rule cycles
        c = [0.75, -150.0, 0.02, -6.0]
        A = [[0.25, -60.0, -0.04, 9.0],
             [0.5, -90.0, -0.02, 3.0],
             [0.0, 0.0, 1.0, 0.0]]
        solution = solve(lp(c, A, ['<=', '<=', '<='], [0, 0, 1]))
        assert solution.status == LpStatus.OPTIMAL
        assert solution.objective_value == pytest.approx(0.05, abs=1e-9)

class TestLinearProgram:
    def test_rejects_wrong_row_length(self):
        with pytest.raises(ValueError, match="has 3 coefficients"):
            LinearProgram([1.0, 1.0], (Constraint([1, 1, 1], '<=', 1, 'row[0]'),), ('a', 'b'))

    def test_rejects_duplicate_names(self):
        with pytest.raises(ValueError, match="unique"):
            LinearProgram([1.0, 1.0], (), ('a', 'a'))

    def test_without_drops_a_family(self):
        program = LinearProgram(
            [1.0],
            (Constraint([1], '<=', 2, 'cap[1]'), Constraint([1], '<=', 1, 'tight[1]')),
            ('x',),
        )
        assert program.without(['tight']).n_constraints == 1
        assert solve(program).objective_value == pytest.approx(1.0)
        assert solve(program.without(['tight'])).objective_value == pytest.approx(2.0)

    def test_relation_parsing(self):
        assert Constraint([1.0], '>=', 0.0).relation == Relation.GE

class TestAgainstVertexEnumeration:
    def test_random_bounded_programs(self):
        rng = np.random.default_rng(2024)
        for _ in range(200):
            c, A, relations, b = random_bounded_lp(rng)
            solution = solve(lp(c, A, relations, b))
            expected = vertex_optimum(c, A, relations, b)

            assert solution.status != LpStatus.UNBOUNDED
            if expected is None:
                assert solution.status == LpStatus.INFEASIBLE
            else:
                assert solution.status == LpStatus.OPTIMAL
                assert solution.objective_value == pytest.approx(expected, abs=1e-7)

    def test_optimal_points_satisfy_every_row(self):
        rng = np.random.default_rng(99)
        for _ in range(100):
            c, A, relations, b = random_bounded_lp(rng)
            program = lp(c, A, relations, b)
            solution = solve(program)
            if solution.is_optimal:
                assert np.all(solution.x >= 0)
                assert constraint_residuals(program, solution.x).max(initial=0.0) <= 1e-8

    def test_reduced_costs_certify_optimality(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            c, A, relations, b = random_bounded_lp(rng)
            solution = solve(lp(c, A, relations, b))
            if solution.is_optimal:
                assert solution.reduced_costs.max(initial=0.0) <= 1e-9

    def test_pivot_count_is_bounded(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            c, A, relations, b = random_bounded_lp(rng)
            m, n = len(b), len(c)
            # structural + slack + artificial columns choose m
            cols = n + 2 * m
            bound = 2 * math.comb(cols, m)
            assert solve(lp(c, A, relations, b)).pivots <= bound

    def test_pivot_limit_is_enforced(self):
        c = [1.0, 1.0, 1.0]
        A = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        with pytest.raises(RuntimeError, match="exceeded 1 pivots"):
            solve(lp(c, A, ['<='] * 3, [1, 1, 1]), SimplexSettings(max_pivots=1))

@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 10_000), scale=st.floats(0.01, 100.0))
def test_objective_scaling_is_covariant(seed, scale):
    c, A, relations, b = random_bounded_lp(np.random.default_rng(seed))
    base = solve(lp(c, A, relations, b))
    scaled = solve(lp(scale * c, A, relations, b))
    assert scaled.status == base.status
    if base.is_optimal:
        assert scaled.objective_value == pytest.approx(scale * base.objective_value, abs=1e-7 * max(1.0, scale))
