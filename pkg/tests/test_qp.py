import numpy as np
import pytest

from v2g_scheduler.solver import SolverConfig
from v2g_scheduler.solver import solve_qp


def test_textbook_kkt(toy_problem):
    # min x^2 s.t. x >= 3
    problem = toy_problem(q=[[2.0]], c=[0.0], a_ub=[[-1.0]], b_ub=[-3.0],
                          lb=[-np.inf])
    result = solve_qp(problem)
    assert result.ok
    assert result.x == pytest.approx([3.0], abs=1e-6)
    assert result.objective == pytest.approx(9.0, rel=1e-6)


def test_linear_program(toy_problem):
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6
    problem = toy_problem(q=np.zeros((2, 2)), c=[-1.0, -1.0],
                          a_ub=[[1.0, 2.0], [3.0, 1.0]], b_ub=[4.0, 6.0])
    result = solve_qp(problem)
    assert result.ok
    assert result.x == pytest.approx([1.6, 1.2], abs=1e-6)
    assert result.objective == pytest.approx(-2.8, rel=1e-6)


def test_equality_projection(toy_problem):
    # min (x - 1)^2 + (y - 2)^2 s.t. x + y = 1
    problem = toy_problem(q=np.diag([2.0, 2.0]), c=[-2.0, -4.0],
                          a_eq=[[1.0, 1.0]], b_eq=[1.0],
                          lb=[-np.inf, -np.inf], constant=5.0)
    result = solve_qp(problem)
    assert result.x == pytest.approx([0.0, 1.0], abs=1e-6)
    assert result.objective == pytest.approx(2.0, rel=1e-6)


def test_bounds_only(toy_problem):
    problem = toy_problem(q=np.diag([2.0, 2.0]), c=[-4.0, 2.0],
                          ub=[1.0, 1.0])
    result = solve_qp(problem)
    assert result.x == pytest.approx([1.0, 0.0], abs=1e-6)


def test_infeasible_rows(toy_problem):
    problem = toy_problem(q=[[2.0]], c=[0.0], a_ub=[[-1.0], [1.0]],
                          b_ub=[-3.0, 1.0])
    assert solve_qp(problem).status == 'infeasible'


def test_crossed_node_bounds(toy_problem):
    problem = toy_problem(q=[[2.0]], c=[0.0], ub=[1.0])
    result = solve_qp(problem, lb=np.array([1.0]), ub=np.array([0.0]))
    assert result.status == 'infeasible'


def test_all_columns_fixed(toy_problem):
    problem = toy_problem(q=[[2.0]], c=[1.0], lb=[2.0], ub=[2.0])
    result = solve_qp(problem)
    assert result.ok
    assert result.objective == pytest.approx(6.0)


def test_warm_start_does_not_change_answer(toy_problem):
    problem = toy_problem(q=np.diag([2.0, 1.0]), c=[-2.0, -3.0],
                          a_ub=[[1.0, 1.0]], b_ub=[2.0])
    cold = solve_qp(problem)
    warm = solve_qp(problem, warm_start=np.array([0.5, 0.5]))
    assert warm.objective == pytest.approx(cold.objective, rel=1e-7)


def test_relaxation_bounds_the_integer_optimum(toy_problem):
    problem = toy_problem(q=[[2.0]], c=[-1.2], ub=[1.0], binaries=[0])
    relaxed = solve_qp(problem, SolverConfig())
    assert relaxed.x == pytest.approx([0.6], abs=1e-6)
    # x in {0, 1}: both give 0 and -0.2.
    assert relaxed.objective <= -0.2


def test_unbounded_linear_program(toy_problem):
    problem = toy_problem(q=np.zeros((1, 1)), c=[-1.0])
    result = solve_qp(problem)
    assert result.status == 'unbounded'
    assert result.x is None


def test_infeasible_linear_program(toy_problem):
    problem = toy_problem(q=np.zeros((1, 1)), c=[1.0], a_ub=[[-1.0]],
                          b_ub=[-3.0], ub=[1.0])
    assert solve_qp(problem).status == 'infeasible'


def test_linear_program_with_fixed_binary(toy_problem):
    # the knapsack relaxation with the first item forced in.
    problem = toy_problem(q=np.zeros((3, 3)), c=[-3.0, -2.0, -2.0],
                          a_ub=[[2.0, 1.5, 1.5]], b_ub=[3.0],
                          ub=[1.0, 1.0, 1.0], binaries=[0, 1, 2])
    lb, ub = problem.lb.copy(), problem.ub.copy()
    lb[0] = 1.0
    result = solve_qp(problem, lb=lb, ub=ub)
    assert result.ok
    assert result.objective == pytest.approx(-3.0 - 2.0 / 1.5, rel=1e-7)


def test_multipliers_in_full_indexing(toy_problem):
    # min x^2 s.t. x >= 3: the row carries the whole gradient, 2x = 6.
    problem = toy_problem(q=[[2.0]], c=[0.0], a_ub=[[-1.0]], b_ub=[-3.0],
                          lb=[-np.inf])
    duals = solve_qp(problem).duals
    assert duals.ub == pytest.approx([6.0], abs=1e-5)
    assert duals.lower == pytest.approx([0.0], abs=1e-6)
    assert len(duals.eq) == 0


def test_child_warm_started_from_parent(toy_problem):
    problem = toy_problem(q=np.diag([2.0, 2.0, 1.0]), c=[-3.0, -1.0, -2.0],
                          a_ub=[[1.0, 1.0, 1.0]], b_ub=[1.5],
                          ub=[1.0, 1.0, 1.0], binaries=[0, 1])
    parent = solve_qp(problem)
    assert parent.duals is not None
    for value in (0.0, 1.0):
        lb, ub = problem.lb.copy(), problem.ub.copy()
        lb[0] = ub[0] = value
        cold = solve_qp(problem, lb=lb, ub=ub)
        warm = solve_qp(problem, warm_start=parent, lb=lb, ub=ub)
        assert warm.ok
        assert warm.objective == pytest.approx(cold.objective, rel=1e-7,
                                               abs=1e-9)
        assert warm.x == pytest.approx(cold.x, abs=1e-5)
