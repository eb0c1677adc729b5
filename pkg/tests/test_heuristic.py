import numpy as np
import pytest

from v2g_scheduler.model import build_static
from v2g_scheduler.model import presolve
from v2g_scheduler.solver import complementarity_heuristic
from v2g_scheduler.solver import enumerate_binaries
from v2g_scheduler.solver import round_binaries
from v2g_scheduler.solver import solve_qp


@pytest.fixture
def one_period(make_session, make_scenario):
    scenario = make_scenario(
        [make_session(t_arr=1, t_dep=2, soc_init=10.0, soc_desired=9.0,
                      v2g=True)],
        horizon=3, wind=[0.0, 1.0, 0.0],
    )
    return presolve(build_static(scenario))


def _col(problem, role, t=1):
    return problem.directory.col(role, 'a', t)


def test_rounding_keeps_the_larger_rate(one_period):
    p = one_period
    x = np.zeros(p.n)
    x[_col(p, 'x_c')] = x[_col(p, 'x_d')] = 0.5
    x[_col(p, 'y_c')] = x[_col(p, 'y_d')] = 0.5
    lb, ub = round_binaries(p, x)
    # y_c = 1 would block charging.
    assert lb[_col(p, 'y_c')] == ub[_col(p, 'y_c')] == 0.0
    assert lb[_col(p, 'y_d')] == ub[_col(p, 'y_d')] == 1.0
    x[_col(p, 'x_d')] = 0.7
    lb, ub = round_binaries(p, x)
    assert ub[_col(p, 'y_c')] == 1.0 and ub[_col(p, 'y_d')] == 0.0


def test_rounding_respects_node_fixings(one_period):
    p = one_period
    x = np.zeros(p.n)
    x[_col(p, 'x_c')] = 0.9
    lb, ub = p.lb.copy(), p.ub.copy()
    lb[_col(p, 'y_d')] = ub[_col(p, 'y_d')] = 0.0
    lb, ub = round_binaries(p, x, lb, ub)
    assert lb[_col(p, 'y_c')] == 1.0


def test_heuristic_point_is_complementary(one_period):
    p = one_period
    x = np.zeros(p.n)
    x[_col(p, 'x_c')] = x[_col(p, 'x_d')] = 0.5
    x[_col(p, 'y_c')] = x[_col(p, 'y_d')] = 0.5
    found = complementarity_heuristic(p, x)
    assert found is not None
    point, objective = found
    assert min(point[_col(p, 'x_c')], point[_col(p, 'x_d')]) <= 1e-7
    assert p.max_violation(point) <= 1e-6
    assert objective == pytest.approx(p.objective(point))


def test_heuristic_bounds_the_optimum_from_above(random_scenario):
    problem = presolve(build_static(random_scenario(7)))
    relaxed = solve_qp(problem)
    found = complementarity_heuristic(problem, relaxed.x)
    best = enumerate_binaries(problem)
    assert found is not None and best is not None
    assert found[1] >= best[1] - 1e-6 * max(abs(best[1]), 1)


def test_heuristic_is_close_to_the_optimum(make_session, make_scenario):
    # two V2G vehicles, three plug periods each, overlapping in period 3.
    scenario = make_scenario(
        [make_session('a', 1, 4, 8.0, 10.0, soc_min=2.0, v2g=True),
         make_session('b', 3, 6, 5.0, 9.0, soc_min=2.0, v2g=True)],
        wind=[0, 2, 0, 3, 1, 0, 0, 0],
        price=[20, 25, 30, 10, 15, 30, 20, 20],
    )
    problem = presolve(build_static(scenario))
    assert len(problem.binaries) <= 12
    relaxed = solve_qp(problem)
    found = complementarity_heuristic(problem, relaxed.x)
    best = enumerate_binaries(problem)
    assert found is not None and best is not None
    assert found[1] <= best[1] + 0.05 * abs(best[1]) + 1e-6
