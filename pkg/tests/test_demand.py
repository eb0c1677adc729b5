import numpy as np
import pytest

from v2g_scheduler.core import DemandModelError
from v2g_scheduler.domain import TimeGrid
from v2g_scheduler.planner import FutureDemandModel
from v2g_scheduler.planner import estimate_future_demand


def _model(rate, er=20.0, pt=16.0):
    return FutureDemandModel(er, pt, rate)


def test_no_arrivals_no_demand():
    d_f = estimate_future_demand(_model(np.zeros(96)), 8, (32, 80))
    assert d_f.shape == (48,)
    assert not d_f.any()


def test_single_expected_arrival():
    rate = np.zeros(96)
    rate[40] = 1.0
    d_f = estimate_future_demand(_model(rate), 8, (32, 80))
    expected = np.zeros(48)
    expected[40 - 32:56 - 32] = 1.25
    assert d_f == pytest.approx(expected)


def test_arrivals_at_or_before_planning_time_are_known():
    rate = np.zeros(96)
    rate[32] = rate[30] = 1.0
    d_f = estimate_future_demand(_model(rate), 8, (32, 60))
    assert not d_f.any()


def test_rate_wraps_around_the_day():
    rate = np.zeros(96)
    rate[2] = 2.0
    d_f = estimate_future_demand(_model(rate, er=8.0, pt=4.0), 23, (92, 104),
                                 TimeGrid(horizon_periods=104))
    # slot 98 is 02:30 of the next day.
    assert d_f[98 - 92:102 - 92] == pytest.approx([4.0] * 4)
    assert d_f[:98 - 92].sum() == 0


def test_fractional_plug_duration():
    rate = np.zeros(96)
    rate[10] = 1.0
    d_f = estimate_future_demand(_model(rate, er=5.0, pt=2.5), 0, (0, 16))
    assert d_f[10:13] == pytest.approx([2.0] * 3)
    assert d_f[13] == 0


def test_zero_plug_duration():
    with pytest.raises(DemandModelError):
        estimate_future_demand(_model(np.ones(96), pt=0.0), 0, (0, 4))


def test_negative_values_rejected():
    with pytest.raises(DemandModelError):
        _model(np.full(96, -1.0))
    with pytest.raises(DemandModelError):
        _model(np.zeros(96), er=-1.0)


def test_dict_round_trip():
    model = _model(np.linspace(0, 1, 96))
    again = FutureDemandModel.from_dict(model.to_dict())
    assert again.expected_plug_periods == 16.0
    assert again.arrival_rate == pytest.approx(model.arrival_rate)
