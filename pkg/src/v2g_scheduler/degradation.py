"""
battery degradation cost models, all results in cents.

quadratic: penalizes rate fluctuation (alpha) and processed energy (beta);
    this is the model inside the scheduling objective.
linear: replacement-cost share of the battery fraction cycled per period,
    `rate * (C_bat / reference_pack_cost) * fraction`, with the fraction
    taken on the signed net energy. the unit of `rate` is quoted per kWh
    while the fraction is dimensionless; kept as is.
"""
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .domain import EvSession
from .domain import Schedule
from .domain import Scenario
from .domain import TimeGrid
from .domain import charge_step
from .domain import discharge_step
from .domain import max_energy_per_period

__all__ = [
    'DegradationModel',
    'DegradationParams',
    'linear_coefficients',
    'linear_cost',
    'quadratic_cost',
    'schedule_degradation',
]

DegradationModel = Literal['quadratic', 'linear']


@dataclass(frozen=True)
class DegradationParams:
    alpha: float = 0.05
    beta: float = 0.1
    linear_rate_cents_per_kwh: float = 4.2
    reference_pack_cost_usd: float = 5000.0
    # count |charge| + |discharge| instead of the signed net energy.
    linear_uses_throughput: bool = False
    
    def __post_init__(self):
        for k in ('alpha', 'beta', 'linear_rate_cents_per_kwh',
                  'reference_pack_cost_usd'):
            if getattr(self, k) < 0:
                raise ValueError(f'{k} must be non-negative')


def quadratic_cost(
        session: EvSession,
        x_c, x_d,
        params: DegradationParams = DegradationParams(),
        previous_rate_c: float = 0.0,
        previous_rate_d: float = 0.0,
        grid: TimeGrid = TimeGrid(),
) -> float:
    """
    args:
        x_c, x_d: rate rows over a contiguous stretch of the plug period.
        previous_rate_c, previous_rate_d: the rates of the period before the
            stretch (0 at arrival; LC / LD when re-planning).
    """
    kc = charge_step(session.spec, grid)
    cost = _quadratic_terms(np.asarray(x_c, dtype=float), previous_rate_c,
                            kc, params)
    if session.is_v2g and x_d is not None:
        kd = discharge_step(session.spec, grid)
        cost += _quadratic_terms(np.asarray(x_d, dtype=float),
                                 previous_rate_d, kd, params)
    return cost


def _quadratic_terms(x, previous, k, params) -> float:
    if len(x) == 0:
        return 0.0
    ramps = np.diff(np.concatenate(([previous], x)))
    return float(params.alpha * np.sum((k * ramps) ** 2) +
                 params.beta * np.sum((k * x) ** 2))


def linear_coefficients(session: EvSession, params: DegradationParams,
                        grid: TimeGrid = TimeGrid()):
    """
    cents per unit of charge rate and of discharge rate in one period.
    """
    p = max_energy_per_period(session.spec, grid)
    scale = params.linear_rate_cents_per_kwh * \
        session.spec.battery_cost_usd / params.reference_pack_cost_usd * \
        p / session.capacity
    if not session.is_v2g:
        return scale, 0.0
    return scale, (scale if params.linear_uses_throughput else -scale)


def linear_cost(
        session: EvSession,
        x_c, x_d,
        params: DegradationParams = DegradationParams(),
        grid: TimeGrid = TimeGrid(),
) -> float:
    kc, kd = linear_coefficients(session, params, grid)
    cost = kc * float(np.sum(x_c))
    if session.is_v2g and x_d is not None:
        cost += kd * float(np.sum(x_d))
    return cost


def schedule_degradation(
        scenario: Scenario,
        schedule: Schedule,
        model: DegradationModel = 'quadratic',
        params: DegradationParams = DegradationParams(),
) -> np.ndarray:
    """ per-session degradation cost of a whole-horizon schedule. """
    out = np.zeros(len(scenario.sessions))
    for k, s in enumerate(scenario.sessions):
        xc = schedule.x_c[k, s.t_arr:s.t_dep]
        xd = schedule.x_d[k, s.t_arr:s.t_dep]
        if model == 'quadratic':
            out[k] = quadratic_cost(s, xc, xd, params, grid=scenario.grid)
        elif model == 'linear':
            out[k] = linear_cost(s, xc, xd, params, grid=scenario.grid)
        else:
            raise ValueError(f'unknown degradation model: {model!r}')
    return out
