import numpy as np
import pytest

from v2g_scheduler.core import ConfigError
from v2g_scheduler.simgen import ScenarioConfig
from v2g_scheduler.simgen import WIND_COLUMN
from v2g_scheduler.simgen import default_arrival_pmfs
from v2g_scheduler.simgen import ev_catalog
from v2g_scheduler.simgen import expand_hourly
from v2g_scheduler.simgen import fit_future_demand_model
from v2g_scheduler.simgen import generate
from v2g_scheduler.simgen import history_config
from v2g_scheduler.simgen import make_scenario
from v2g_scheduler.simgen import read_trace
from v2g_scheduler.simgen import synthetic_price
from v2g_scheduler.simgen import synthetic_wind
from v2g_scheduler.simgen import write_trace


def _by_name():
    return {s.name: s for s in ev_catalog()}


def test_catalog():
    catalog = _by_name()
    assert len(catalog) == 10
    bolt = catalog['Chevy Bolt']
    assert (bolt.acceptance_rate_kw, bolt.battery_capacity_kwh,
            bolt.charger_power_kw, bolt.battery_cost_usd) == \
           (7.2, 60.0, 7.7, 8700.0)
    tesla = catalog['Tesla Model S 90 Dual']
    assert (tesla.acceptance_rate_kw, tesla.battery_capacity_kwh,
            tesla.charger_power_kw, tesla.battery_cost_usd) == \
           (19.2, 90.0, 15.4, 13000.0)


def test_bundled_pmfs():
    for pmf in default_arrival_pmfs():
        assert len(pmf) == 24
        assert sum(pmf) == pytest.approx(1.0)


def test_generate_is_deterministic():
    config = ScenarioConfig(n_vehicles=30, days=2, seed=11)
    assert generate(config).sessions == generate(config).sessions
    other = generate(ScenarioConfig(n_vehicles=30, days=2, seed=12))
    assert other.sessions != generate(config).sessions


def test_generated_sessions():
    fleet = generate(ScenarioConfig(n_vehicles=50, days=2, seed=0))
    assert len(fleet.sessions) == 100
    assert fleet.horizon_periods % 4 == 0
    assert fleet.horizon_periods >= max(s.t_dep for s in fleet.sessions)
    for s in fleet.sessions:
        assert 16 <= s.t_dep - s.t_arr <= 48
        assert s.soc_init_kwh <= 0.65 * s.capacity + 1e-9
        assert 0.75 * s.capacity - 1e-9 <= s.soc_desired_kwh
        assert s.soc_min_kwh == 5.0


def test_no_v2g_share():
    fleet = generate(ScenarioConfig(n_vehicles=40, days=1, r_v2g=0.0))
    assert not any(s.is_v2g for s in fleet.sessions)
    fleet = generate(ScenarioConfig(n_vehicles=40, days=1, r_v2g=1.0))
    assert all(s.is_v2g for s in fleet.sessions)


def test_mean_plug_duration():
    fleet = generate(ScenarioConfig(n_vehicles=2000, days=10, seed=4))
    hours = np.mean([s.t_dep - s.t_arr for s in fleet.sessions]) / 4
    assert hours == pytest.approx(8.0, rel=0.01)


def test_hour_arrivals_fall_on_planning_times():
    fleet = generate(ScenarioConfig(n_vehicles=40, days=1,
                                    arrival_slot_mode='hour'))
    assert all(s.t_arr % 4 == 0 for s in fleet.sessions)


def test_config_validation():
    with pytest.raises(ConfigError):
        ScenarioConfig(r_v2g=1.5)
    with pytest.raises(ConfigError):
        ScenarioConfig(arrival_pmf_home=(1.0,) * 24)
    with pytest.raises(ConfigError):
        ScenarioConfig(arrival_slot_mode='minute')


def test_config_dict_round_trip():
    config = ScenarioConfig(n_vehicles=7, plug_hours=(2.0, 6.0))
    assert ScenarioConfig.from_dict(config.to_dict()) == config


def test_fit_identical_history(make_session):
    history = [make_session(f's{k}', 8, 24, 5.0, 15.0) for k in range(3)]
    model = fit_future_demand_model(history, days=1)
    assert model.expected_required_charge_kwh == pytest.approx(10.0)
    assert model.expected_plug_periods == pytest.approx(16.0)
    assert model.arrival_rate[8] == pytest.approx(3.0)
    assert model.arrival_rate.sum() == pytest.approx(3.0)


def test_fit_single_day_counts_trips():
    config = ScenarioConfig(n_vehicles=25, days=1, seed=2)
    model = fit_future_demand_model(generate(config).sessions, days=1)
    assert model.arrival_rate.sum() == pytest.approx(25.0)


def test_history_uses_another_seed():
    config = ScenarioConfig(seed=3)
    assert history_config(config).seed == 4
    assert history_config(config).n_vehicles == config.n_vehicles


def test_make_scenario_covers_the_horizon():
    config = ScenarioConfig(n_vehicles=5, days=1, seed=9, turbine_kw=23.0)
    scenario = make_scenario(config, lambda_=0.5)
    assert len(scenario.wind_kwh) == scenario.horizon
    assert len(scenario.price_cents_per_kwh) == scenario.horizon
    assert scenario.lambda_ == 0.5
    assert scenario.seed == 9


def test_synthetic_traces():
    wind = synthetic_wind(2, seed=1, turbine_kw=100.0)
    assert wind.shape == (192,)
    assert np.all((wind >= 0) & (wind <= 25.0))
    # held over each hour.
    assert np.all(wind.reshape(-1, 4) == wind.reshape(-1, 4)[:, :1])
    assert np.array_equal(wind, synthetic_wind(2, seed=1, turbine_kw=100.0))
    assert np.all(synthetic_price(2, seed=1) > 0)


def test_trace_files(tmp_path):
    file = str(tmp_path / 'wind.csv')
    write_trace(file, [1.0, 2.5, 0.0], WIND_COLUMN)
    assert read_trace(file, WIND_COLUMN).tolist() == [1.0, 2.5, 0.0]
    assert read_trace(file, WIND_COLUMN, 2).tolist() == \
        [1.0, 1.0, 2.5, 2.5, 0.0, 0.0]
    with pytest.raises(ConfigError):
        read_trace(file, 'cents_per_kwh')
    with pytest.raises(FileNotFoundError):
        read_trace(str(tmp_path / 'missing.csv'), WIND_COLUMN)


def test_trace_gaps_rejected(tmp_path):
    file = tmp_path / 'gaps.csv'
    file.write_text('period,kwh\n0,1.0\n2,1.0\n')
    with pytest.raises(ConfigError):
        read_trace(str(file), WIND_COLUMN)


def test_expand_hourly():
    assert expand_hourly([1.0, 2.0], 2).tolist() == [1.0, 1.0, 2.0, 2.0]
