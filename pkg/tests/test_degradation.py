import numpy as np
import pytest

from v2g_scheduler.degradation import DegradationParams
from v2g_scheduler.degradation import linear_coefficients
from v2g_scheduler.degradation import linear_cost
from v2g_scheduler.degradation import quadratic_cost
from v2g_scheduler.degradation import schedule_degradation
from v2g_scheduler.domain import EvSpec
from v2g_scheduler.domain import Schedule


def test_quadratic_single_period(make_session):
    s = make_session()
    assert quadratic_cost(s, [1.0], None) == \
        pytest.approx(0.15 * 1.485 ** 2, abs=1e-12)
    assert quadratic_cost(s, [1.0], None) == pytest.approx(0.3308, abs=1e-4)


def test_quadratic_zero(make_session):
    assert quadratic_cost(make_session(v2g=True), [0, 0], [0, 0]) == 0


def test_quadratic_constant_rate_has_no_ramp(make_session):
    s = make_session()
    cost = quadratic_cost(s, [0.5, 0.5], None, previous_rate_c=0.5)
    assert cost == pytest.approx(2 * 0.1 * (1.485 * 0.5) ** 2)


def test_quadratic_counts_discharge_for_v2g_only(make_session):
    g2v, v2g = make_session(), make_session(v2g=True)
    assert quadratic_cost(g2v, [0], [1]) == 0
    assert quadratic_cost(v2g, [0], [1]) == \
        pytest.approx(0.15 * (1.65 / 0.9) ** 2)


def test_linear_cost(make_session):
    ev = EvSpec('Ford Focus EV', 6.6, 23.0, 7.7, 5000.0)
    s = make_session(ev=ev)
    assert linear_cost(s, [1.0], None) == pytest.approx(4.2 * 1.65 / 23)
    assert linear_cost(s, [1.0], None) == pytest.approx(0.3013, abs=1e-4)
    assert linear_cost(s, [0.0, 0.0], None) == 0
    double = make_session(ev=EvSpec('x', 6.6, 23.0, 7.7, 10000.0))
    assert linear_cost(double, [1.0], None) == \
        pytest.approx(2 * linear_cost(s, [1.0], None))


def test_linear_discharge_sign(make_session):
    s = make_session(v2g=True)
    kc, kd = linear_coefficients(s, DegradationParams())
    assert kd == -kc
    kc, kd = linear_coefficients(
        s, DegradationParams(linear_uses_throughput=True)
    )
    assert kd == kc


def test_schedule_degradation(make_session, make_scenario):
    scenario = make_scenario([make_session(t_arr=2, t_dep=4)])
    x = np.zeros((1, 8))
    x[0, 2:4] = 1.0
    schedule = Schedule.from_rates(scenario, x, np.zeros_like(x))
    quad = schedule_degradation(scenario, schedule)
    # one ramp up from zero, two full periods.
    assert quad[0] == pytest.approx(0.05 * 1.485 ** 2 + 0.2 * 1.485 ** 2)
    with pytest.raises(ValueError):
        schedule_degradation(scenario, schedule, 'cubic')
