"""
desk-scale runs on generated fleets. run with `pytest -m slow`.

results are cached per (seed, mode, settings), so the sweeps below share
their runs.
"""
from functools import lru_cache

import numpy as np
import pytest

from v2g_scheduler.io import save_report
from v2g_scheduler.model import build_static
from v2g_scheduler.model import presolve
from v2g_scheduler.simgen import ScenarioConfig
from v2g_scheduler.simgen import fit_future_demand_model
from v2g_scheduler.simgen import generate
from v2g_scheduler.simgen import history_config
from v2g_scheduler.simgen import make_scenario
from v2g_scheduler.simulation import SimulationConfig
from v2g_scheduler.simulation import run_simulation
from v2g_scheduler.solver import enumerate_binaries
from v2g_scheduler.solver import solve

pytestmark = pytest.mark.slow

SEEDS = tuple(range(10))
SWEEP_SEEDS = (0, 1, 2)


def _config(seed, vehicles=10, r_v2g=0.5) -> ScenarioConfig:
    return ScenarioConfig(n_vehicles=vehicles, days=1, seed=seed,
                          r_v2g=r_v2g, arrival_slot_mode='hour',
                          turbine_kw=2.3 * vehicles)


@lru_cache(maxsize=None)
def _run(seed, mode, r_v2g=0.5, forecast='perfect', future_demand=True,
         **weights):
    config = _config(seed, r_v2g=r_v2g)
    scenario = make_scenario(config, **weights)
    demand_model = None
    if mode == 'dynamic' and future_demand:
        history = generate(history_config(config))
        demand_model = fit_future_demand_model(history.sessions,
                                               scenario.grid, config.days)
    result = run_simulation(
        scenario,
        SimulationConfig(mode=mode, forecast=forecast,
                         use_future_demand=future_demand),
        demand_model=demand_model,
    )
    assert not result.violations
    return result


def _seed_mean(metric, mode='static', **settings):
    return float(np.mean([getattr(_run(s, mode, **settings).report, metric)
                          for s in SWEEP_SEEDS]))


# -----------------------------------------------------------------------------

@pytest.mark.parametrize('seed', range(25))
def test_branch_and_bound_matches_enumeration(random_scenario, seed):
    problem = presolve(build_static(random_scenario(seed)))
    best = enumerate_binaries(problem)
    solution = solve(problem)
    if best is None:
        assert not solution.has_incumbent
        return
    assert solution.objective == pytest.approx(best[1], rel=1e-5, abs=1e-6)


@pytest.mark.parametrize('seed', SEEDS)
def test_static_dominates_rolling_horizon(seed):
    static = _run(seed, 'static')
    dynamic = _run(seed, 'dynamic', future_demand=False)
    committed = dynamic.objective
    assert static.objective <= committed + 1e-6 * max(1.0, abs(committed))


@pytest.mark.parametrize('mode', ['static', 'dynamic'])
def test_smart_charging_beats_bau(mode):
    strict = 0
    for seed in SEEDS:
        bau, smart = _run(seed, 'bau').report, _run(seed, mode).report
        assert smart.wind_utilization_pct >= \
            bau.wind_utilization_pct - 1e-6
        assert smart.total_cost_cents <= \
            bau.total_cost_cents + 1e-6 * max(1.0, bau.total_cost_cents)
        if smart.total_cost_cents < bau.total_cost_cents * (1 - 1e-6):
            strict += 1
    assert strict >= 8


def test_utilization_rises_with_delta():
    values = [_seed_mean('wind_utilization_pct', lambda_=1.0, delta=d)
              for d in (0.0, 0.1, 0.25, 0.5, 1.0)]
    for low, high in zip(values, values[1:]):
        assert high >= low - 1e-2


def test_degradation_falls_with_lambda():
    values = [_seed_mean('degradation_cost_cents', lambda_=w)
              for w in (0.0, 0.25, 0.5, 1.0)]
    for low, high in zip(values, values[1:]):
        assert high <= low * (1 + 1e-3) + 1e-3


def test_full_v2g_share_pays_off():
    g2v = [_run(s, 'static', r_v2g=0.0).report for s in SWEEP_SEEDS]
    v2g = [_run(s, 'static', r_v2g=1.0).report for s in SWEEP_SEEDS]
    
    def mean(reports, metric):
        return float(np.mean([getattr(r, metric) for r in reports]))
    
    assert mean(v2g, 'wind_utilization_pct') >= \
        mean(g2v, 'wind_utilization_pct') - 1e-6
    assert mean(v2g, 'total_cost_cents') <= \
        mean(g2v, 'total_cost_cents') * (1 + 1e-6)
    for rep in v2g:
        assert rep.discharge_payments_cents == rep.discharge_revenue_cents
        assert sum(s.discharge_revenue_cents for s in rep.sessions) == \
            pytest.approx(rep.discharge_revenue_cents, abs=1e-9)


def test_markov_forecast_is_close_to_perfect():
    perfect = _seed_mean('total_cost_cents', 'dynamic')
    markov = _seed_mean('total_cost_cents', 'dynamic', forecast='markov')
    assert abs(markov - perfect) <= 0.15 * perfect


@pytest.mark.parametrize('mode', ['static', 'dynamic'])
def test_reports_are_byte_identical(mode, tmp_path):
    files = []
    for k in range(2):
        _run.cache_clear()
        files.append(tmp_path / f'{mode}-{k}.json')
        save_report(_run(4, mode).report, str(files[-1]))
    assert files[0].read_bytes() == files[1].read_bytes()
