import numpy as np
import pytest

from v2g_scheduler.baseline import bau_schedule
from v2g_scheduler.domain import validate_schedule


def test_partial_last_period(make_session, make_scenario):
    scenario = make_scenario([make_session(t_arr=1, t_dep=8, soc_init=20.0,
                                           soc_desired=21.0)])
    x = bau_schedule(scenario).x_c[0]
    assert x[:4] == pytest.approx([0, 1, 1, 3.0 / 1.485 - 2])
    assert x[3] == pytest.approx(0.0202, abs=1e-4)
    assert not x[4:].any()
    assert bau_schedule(scenario).soc[0, 8] == pytest.approx(23.0)


def test_full_battery_stays_idle(make_session, make_scenario):
    scenario = make_scenario([make_session(soc_init=23.0,
                                           soc_desired=23.0)])
    assert not bau_schedule(scenario).x_c.any()


def test_short_stay_is_truncated(make_session, make_scenario):
    scenario = make_scenario([make_session(t_dep=3, soc_init=0.0)])
    assert bau_schedule(scenario).x_c[0].tolist() == [1, 1, 1, 0, 0, 0, 0, 0]


def test_grid_supply_scales_with_fleet(make_session, make_scenario):
    one = make_scenario([make_session('a')])
    two = make_scenario([make_session('a'), make_session('b')])
    assert bau_schedule(two).g_kwh == \
        pytest.approx(2 * bau_schedule(one).g_kwh)


def test_never_discharges(make_session, make_scenario):
    scenario = make_scenario([make_session(v2g=True, soc_init=5.0)],
                             wind=[0, 5, 5, 0, 0, 0, 0, 0])
    schedule = bau_schedule(scenario)
    assert not schedule.x_d.any()
    kinds = {v.kind for v in validate_schedule(scenario, schedule)}
    assert not kinds & {'balance', 'complementarity', 'soc-capacity'}
