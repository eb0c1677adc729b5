import numpy as np
import pytest

from v2g_scheduler.core import ForecastError
from v2g_scheduler.forecast import MarkovForecaster
from v2g_scheduler.forecast import PerfectForecaster
from v2g_scheduler.forecast import evaluate_forecaster
from v2g_scheduler.forecast import hourly_means
from v2g_scheduler.forecast import split_trace
from v2g_scheduler.simgen import synthetic_wind


@pytest.fixture
def two_state():
    return MarkovForecaster([10.0, 50.0], [[0.9, 0.1], [0.2, 0.8]])


def test_two_step_expectation(two_state):
    assert two_state.forecast(10.0, 2) == pytest.approx(16.8, abs=1e-12)
    assert two_state.distribution(10.0, 2) == pytest.approx([0.83, 0.17])


def test_zero_steps_returns_current(two_state):
    assert two_state.forecast(12.3, 0) == 12.3
    with pytest.raises(ForecastError):
        two_state.forecast(10.0, -1)


def test_identity_chain_keeps_the_state():
    f = MarkovForecaster([10.0, 50.0], np.eye(2))
    assert f.forecast(12.0, 5) == pytest.approx(10.0)
    assert f.forecast(44.0, 3) == pytest.approx(50.0)


def test_uniform_rows_forecast_the_mean():
    f = MarkovForecaster([10.0, 30.0, 50.0], np.full((3, 3), 1 / 3))
    assert f.forecast(10.0, 1) == pytest.approx(30.0)
    assert f.forecast(50.0, 4) == pytest.approx(30.0)


def test_state_of_picks_nearest(two_state):
    assert two_state.state_of(29.9) == 0
    assert two_state.state_of(30.0) == 1
    assert two_state.state_of(1000.0) == 1


def test_chapman_kolmogorov():
    f = MarkovForecaster.fit(synthetic_wind(15, seed=3), n_states=12)
    assert f.power(5) == pytest.approx(f.power(2) @ f.power(3), abs=1e-9)
    assert f.matrix.sum(axis=1) == pytest.approx(np.ones(12), abs=1e-12)
    assert max(abs(np.linalg.eigvals(f.matrix))) == pytest.approx(1.0)


def test_constant_trace_is_a_self_loop():
    f = MarkovForecaster.fit(np.full(96, 5.0), n_states=4)
    s = f.state_of(5.0)
    assert f.matrix[s, s] == 1.0
    assert f.forecast(5.0, 3) == pytest.approx(f.states[s])


def test_alternating_trace():
    f = MarkovForecaster.fit([0.0, 10.0] * 20, n_states=2, step_periods=1)
    assert f.matrix == pytest.approx(np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_fit_needs_two_steps():
    with pytest.raises(ForecastError):
        MarkovForecaster.fit(np.ones(7), step_periods=4)


def test_invalid_chain():
    with pytest.raises(ForecastError):
        MarkovForecaster([1.0, 2.0], [[0.5, 0.4], [0.0, 1.0]])
    with pytest.raises(ForecastError):
        MarkovForecaster([2.0, 1.0], np.eye(2))
    with pytest.raises(ForecastError):
        MarkovForecaster.from_dict({'states': [1.0]})


def test_window_realizes_the_first_step(two_state):
    realized = np.r_[np.full(4, 10.0), np.full(8, 50.0)]
    out = two_state.window(realized, 0, 10)
    assert out[:4] == pytest.approx([10.0] * 4)
    assert out[4:8] == pytest.approx([two_state.forecast(10.0, 1)] * 4)
    assert out[8:] == pytest.approx([16.8] * 2)


def test_perfect_forecaster():
    trace = np.arange(10.0)
    assert PerfectForecaster().window(trace, 2, 5).tolist() == [2, 3, 4]


def test_dict_round_trip(two_state):
    again = MarkovForecaster.from_dict(two_state.to_dict())
    assert again.forecast(10.0, 2) == pytest.approx(16.8)
    assert again.step_periods == 4


def test_split_and_evaluate():
    trace = synthetic_wind(25, seed=1)
    train, test = split_trace(trace, 15)
    assert (len(train), len(test)) == (15 * 96, 10 * 96)
    f = MarkovForecaster.fit(train)
    errors = evaluate_forecaster(f, test, max_steps=6)
    assert errors.shape == (6,)
    assert np.all(errors >= 0)
    with pytest.raises(ForecastError):
        split_trace(trace, 25)


def test_hourly_means_drops_partial_step():
    assert hourly_means(np.arange(10.0), 4).tolist() == [1.5, 5.5]
