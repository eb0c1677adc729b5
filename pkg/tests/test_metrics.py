import numpy as np
import pytest

from v2g_scheduler.baseline import bau_schedule
from v2g_scheduler.core import ScenarioMismatchError
from v2g_scheduler.domain import Schedule
from v2g_scheduler.metrics import Report
from v2g_scheduler.metrics import compare
from v2g_scheduler.metrics import objective_value
from v2g_scheduler.metrics import report
from v2g_scheduler.metrics import sweep_table
from v2g_scheduler.model import build_static
from v2g_scheduler.model import extract_schedule
from v2g_scheduler.model import presolve
from v2g_scheduler.solver import solve


@pytest.fixture
def pair(make_session, make_scenario):
    """ a V2G vehicle leaving early next to a G2V one charging late. """
    return make_scenario(
        [make_session('giver', 0, 4, 20.0, 10.0, v2g=True),
         make_session('taker', 0, 8, 2.0, 12.0)],
        wind=[0, 0, 0, 0, 6, 6, 0, 0],
        price=[10, 20, 30, 40, 10, 10, 10, 10],
    )


def test_zero_wind(make_session, make_scenario):
    scenario = make_scenario([make_session()], price=[5, 6, 7, 8, 9, 9, 9, 9])
    schedule = bau_schedule(scenario)
    rep = report(scenario, schedule)
    assert rep.wind_utilization_pct is None
    assert rep.charge_cost_cents == pytest.approx(
        float(scenario.price_cents_per_kwh @ schedule.charge_kwh(scenario))
    )
    assert rep.total_curtailment_kwh == 0


def test_g2v_fleet_has_no_discharge_money(make_session, make_scenario):
    scenario = make_scenario([make_session()], wind=1.0)
    rep = report(scenario, bau_schedule(scenario))
    assert rep.discharge_revenue_cents == 0
    assert rep.discharge_payments_cents == 0
    assert rep.total_cost_cents == pytest.approx(
        rep.charge_cost_cents + rep.degradation_cost_cents
    )


def test_discharge_is_settled_within_the_fleet(pair):
    x_c, x_d = np.zeros((2, 8)), np.zeros((2, 8))
    x_d[0, 2:4] = 1.0
    x_c[1, 2:4] = 1.0
    schedule = Schedule.from_rates(pair, x_c, x_d)
    rep = report(pair, schedule)
    assert rep.discharged_kwh == pytest.approx(3.3)
    assert rep.discharge_revenue_cents == pytest.approx(0.9 * 1.65 * 70)
    assert rep.discharge_payments_cents == rep.discharge_revenue_cents
    giver, taker = rep.sessions
    assert giver.discharge_revenue_cents == \
        pytest.approx(rep.discharge_revenue_cents)
    # the taker alone draws in periods 2 and 3, so it pays for all of it.
    assert taker.charge_cost_cents == pytest.approx(rep.charge_cost_cents)
    assert sum(s.charge_cost_cents for s in rep.sessions) == \
        pytest.approx(rep.charge_cost_cents)


def test_only_consumed_discharge_is_settled(pair):
    x_c, x_d = np.zeros((2, 8)), np.zeros((2, 8))
    # period 1: nobody charges. period 2: the taker draws half.
    x_d[0, 1:3] = 1.0
    x_c[1, 2] = 0.5
    rep = report(pair, Schedule.from_rates(pair, x_c, x_d))
    assert rep.discharged_kwh == pytest.approx(3.3)
    assert rep.discharge_revenue_cents == pytest.approx(0.9 * 30 * 0.825)
    assert rep.discharge_payments_cents == rep.discharge_revenue_cents
    for key in ('charge_cost_cents', 'discharge_revenue_cents'):
        assert sum(getattr(s, key) for s in rep.sessions) == \
            pytest.approx(getattr(rep, key))
    assert rep.total_cost_cents == pytest.approx(
        sum(s.charge_cost_cents + s.degradation_cost_cents -
            s.discharge_revenue_cents for s in rep.sessions)
    )


def test_utilization(make_session, make_scenario):
    scenario = make_scenario([make_session(t_dep=2, soc_init=0.0,
                                           soc_desired=2.0)],
                             horizon=2, wind=[1.0, 1.0])
    rep = report(scenario, bau_schedule(scenario))
    assert rep.total_curtailment_kwh == 0
    assert rep.wind_utilization_pct == pytest.approx(100.0)
    idle = Schedule.from_rates(scenario, np.zeros((1, 2)), np.zeros((1, 2)))
    assert report(scenario, idle).wind_utilization_pct == 0


def test_objective_matches_the_solver(pair):
    problem = presolve(build_static(pair))
    solution = solve(problem)
    schedule = extract_schedule(problem, solution.x, pair)
    assert objective_value(pair, schedule) == \
        pytest.approx(solution.objective, rel=1e-4, abs=1e-3)


def test_smart_beats_bau(pair):
    problem = presolve(build_static(pair))
    smart = extract_schedule(problem, solve(problem).x, pair)
    assert report(pair, smart).total_cost_cents <= \
        report(pair, bau_schedule(pair)).total_cost_cents


def test_report_dict_round_trip(pair):
    rep = report(pair, bau_schedule(pair), label='bau')
    again = Report.from_dict(rep.to_dict())
    assert again == rep


def test_compare(pair):
    bau = report(pair, bau_schedule(pair), label='bau')
    df = compare([bau, bau], labels=['a', 'b'])
    assert list(df.columns) == ['a', 'b', 'delta:b']
    assert (df['delta:b'].dropna() == 0).all()
    with pytest.raises(ValueError):
        compare([bau])


def test_compare_other_scenario(pair, make_scenario):
    other = make_scenario(wind=1.0)
    with pytest.raises(ScenarioMismatchError):
        compare([report(pair, bau_schedule(pair)),
                 report(other, bau_schedule(other))])


def test_sweep_table():
    rows = [
        {'delta': 0.5, 'seed': 0, 'total_cost_cents': 10.0},
        {'delta': 0.5, 'seed': 1, 'total_cost_cents': 20.0},
        {'delta': 0.0, 'seed': 0, 'total_cost_cents': 4.0},
    ]
    df = sweep_table(rows, 'delta')
    assert df.index.tolist() == [0.0, 0.5]
    assert df['total_cost_cents'].tolist() == [4.0, 15.0]
    assert df['runs'].tolist() == [1, 2]
