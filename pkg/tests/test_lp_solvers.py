import random
from fractions import Fraction

import pytest

from src.errors import LpError
from src.optimization.branch_and_bound import solve_ilp
from src.optimization.cover_programs import build_program
from src.optimization.rational_simplex import LpProblem, LpStatus, Sense, solve_lp
from src.oracles.brute_force import exhaustive_ilp


def two_constraint_lp() -> LpProblem:
    problem = LpProblem(name="diet")
    x = problem.add_variable("x", 1)
    y = problem.add_variable("y", 1)
    problem.add_constraint({x: 1, y: 2}, Sense.GE, 4)
    problem.add_constraint({x: 3, y: 1}, Sense.GE, 6)
    return problem


def knapsack() -> LpProblem:
    problem = LpProblem(name="knapsack")
    values, weights = [5, 4, 3], [2, 3, 1]
    items = [problem.add_variable(f"x{i}", -v, binary=True) for i, v in enumerate(values)]
    problem.add_constraint(dict(zip(items, weights)), Sense.LE, 5)
    return problem


def test_exact_vertex_optimum():
    result = solve_lp(two_constraint_lp())
    assert result.status == LpStatus.OPTIMAL
    assert result.optimum == Fraction(14, 5)
    assert result.assignment == [Fraction(8, 5), Fraction(6, 5)]


def test_infeasible():
    problem = LpProblem()
    x = problem.add_variable("x", 1, upper=1)
    problem.add_constraint({x: 1}, Sense.GE, 2)
    assert solve_lp(problem).status == LpStatus.INFEASIBLE


def test_unbounded():
    problem = LpProblem()
    x = problem.add_variable("x", -1)
    problem.add_constraint({x: 1}, Sense.GE, 1)
    assert solve_lp(problem).status == LpStatus.UNBOUNDED


def test_upper_bounds_and_equalities():
    problem = LpProblem()
    x = problem.add_variable("x", 1)
    y = problem.add_variable("y", 0, upper=2)
    problem.add_constraint({x: 1, y: 1}, Sense.EQ, 5)
    result = solve_lp(problem)
    assert result.optimum == 3
    assert result.assignment == [Fraction(3), Fraction(2)]


def test_fixed_variables_substituted():
    problem = two_constraint_lp().with_bounds({0: Fraction(0)})
    result = solve_lp(problem)
    assert result.optimum == 6
    assert problem.is_feasible(result.assignment)


def test_bland_rule_terminates_on_degenerate_lp():
    # several constraints tight at the origin
    problem = LpProblem()
    xs = [problem.add_variable(f"x{i}", c) for i, c in enumerate([-10, 57, 9, 24])]
    problem.add_constraint(dict(zip(xs, [Fraction(1, 2), Fraction(-11, 2), Fraction(-5, 2), 9])), Sense.LE, 0)
    problem.add_constraint(dict(zip(xs, [Fraction(1, 2), Fraction(-3, 2), Fraction(-1, 2), 1])), Sense.LE, 0)
    problem.add_constraint({xs[0]: 1}, Sense.LE, 1)
    result = solve_lp(problem)
    assert result.status == LpStatus.OPTIMAL
    assert result.optimum == -1


def test_branch_and_bound_knapsack():
    relaxation = solve_lp(knapsack())
    result = solve_ilp(knapsack())
    assert result.optimum == -9
    assert result.assignment == [1, 1, 0]
    assert relaxation.optimum <= result.optimum


def test_branch_and_bound_matches_enumeration():
    assert solve_ilp(knapsack()).optimum == exhaustive_ilp(knapsack()).optimum


def test_variable_order_does_not_change_the_optimum(six_vertex):
    problem = build_program(six_vertex, "local_partial", relaxed=True)
    rng = random.Random(8)
    for _ in range(5):
        order = list(range(len(problem.variables)))
        rng.shuffle(order)
        permuted = problem.permuted(order)
        result = solve_lp(permuted)
        assert result.optimum == Fraction(7, 2)
        assert permuted.is_feasible(result.assignment)

    reordered = solve_ilp(knapsack().permuted([2, 0, 1]))
    assert reordered.optimum == -9
    assert reordered.assignment == [0, 1, 1]


def test_infeasible_integer_program():
    problem = LpProblem()
    a = problem.add_variable("a", 1, binary=True)
    b = problem.add_variable("b", 1, binary=True)
    problem.add_constraint({a: 2, b: 2}, Sense.EQ, 1)
    assert solve_ilp(problem).status == LpStatus.INFEASIBLE
    assert exhaustive_ilp(problem).status == LpStatus.INFEASIBLE


def test_unknown_variable_in_constraint():
    problem = LpProblem()
    problem.add_variable("x")
    with pytest.raises(LpError):
        problem.add_constraint({3: 1}, Sense.LE, 1)


def test_node_limit():
    with pytest.raises(LpError):
        solve_ilp(knapsack(), node_limit=1)
