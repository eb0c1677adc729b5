from dataclasses import dataclass
from math import ceil
from typing import Tuple

import numpy as np

from ..core import DemandModelError
from ..domain import TimeGrid

__all__ = ['FutureDemandModel', 'estimate_future_demand']


@dataclass(frozen=True, eq=False)
class FutureDemandModel:
    """
    expected_required_charge_kwh: mean energy a vehicle asks for.
    expected_plug_periods: mean plug duration, in periods.
    arrival_rate: expected arrivals per period of the day.
    """
    expected_required_charge_kwh: float
    expected_plug_periods: float
    arrival_rate: np.ndarray
    
    def __post_init__(self):
        rate = np.asarray(self.arrival_rate, dtype=float)
        object.__setattr__(self, 'arrival_rate', rate)
        if self.expected_required_charge_kwh < 0 or \
                self.expected_plug_periods < 0 or np.any(rate < 0):
            raise DemandModelError('future demand model holds negative '
                                   'values')
    
    def to_dict(self) -> dict:
        return {
            'expected_required_charge_kwh': self.expected_required_charge_kwh,
            'expected_plug_periods': self.expected_plug_periods,
            'arrival_rate': self.arrival_rate.tolist(),
        }
    
    @classmethod
    def from_dict(cls, data: dict) -> 'FutureDemandModel':
        return cls(data['expected_required_charge_kwh'],
                   data['expected_plug_periods'], data['arrival_rate'])


def estimate_future_demand(
        model: FutureDemandModel,
        j: int,
        window: Tuple[int, int],
        grid: TimeGrid = TimeGrid(),
) -> np.ndarray:
    """
    expected charging demand of vehicles that have not arrived yet:
        D_f[t] = ER * N[t] / PT
        N[t] = sum over arrival slots s in (phi_j, t] of
               rate(s mod day) * [t - s < PT]
    
    returns:
        one value per window period (zero up to phi_j).
    
    raises:
        DemandModelError: PT = 0.
    """
    pt = model.expected_plug_periods
    if pt <= 0:
        raise DemandModelError('expected plug duration is zero')
    start, end = window
    phi = grid.phi(j)
    rate, day = model.arrival_rate, len(model.arrival_rate)
    reach = ceil(pt)
    out = np.zeros(end - start)
    for k, t in enumerate(range(start, end)):
        slots = [s for s in range(max(phi + 1, t - reach + 1), t + 1)
                 if t - s < pt]
        if slots:
            out[k] = rate[np.array(slots) % day].sum()
    return model.expected_required_charge_kwh * out / pt
