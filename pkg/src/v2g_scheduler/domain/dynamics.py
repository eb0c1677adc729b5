"""
per-vehicle energy limits and state-of-charge dynamics.
"""
from math import ceil

import numpy as np

from .fleet import ENERGY_TOL
from .fleet import EvSession
from .fleet import EvSpec
from .grid import TimeGrid
from ..core import UnreachableMinimumError

__all__ = [
    'charge_step',
    'discharge_step',
    'max_energy_per_period',
    'soc_trajectory',
    't_min',
]


def max_energy_per_period(spec: EvSpec, grid: TimeGrid) -> float:
    """
    P^c (= P^d): the most energy a vehicle can take, or give, in one period.
    """
    return min(spec.acceptance_rate_kw, spec.charger_power_kw) * grid.dt_hours


def charge_step(spec: EvSpec, grid: TimeGrid) -> float:
    """ SOC gain of one full-rate charging period: eta_c * P^c. """
    return spec.eta_c * max_energy_per_period(spec, grid)


def discharge_step(spec: EvSpec, grid: TimeGrid) -> float:
    """ SOC loss of one full-rate discharging period: P^d / eta_d. """
    return max_energy_per_period(spec, grid) / spec.eta_d


def t_min(session: EvSession, grid: TimeGrid, start: int = None) -> int:
    """
    number of full-speed periods needed to lift the battery from its initial
    level to `soc_min_kwh`.
    
    args:
        start: the period charging can begin (defaults to t_arr). the
            session's `soc_init_kwh` is the level held at `start`.
    
    raises:
        UnreachableMinimumError: start + T_min > t_dep.
    """
    start = session.t_arr if start is None else start
    deficit = session.soc_min_kwh - session.soc_init_kwh
    if deficit <= ENERGY_TOL:
        return 0
    step = charge_step(session.spec, grid)
    if step <= 0:
        raise UnreachableMinimumError(session.id, start, float('inf'),
                                      session.t_dep)
    # the 1e-9 keeps exact multiples (e.g. 3 * 1.485) from rounding up.
    periods = ceil(deficit / step - 1e-9)
    if start + periods > session.t_dep:
        raise UnreachableMinimumError(session.id, start, periods,
                                      session.t_dep)
    return periods


def soc_trajectory(session: EvSession, x_c, x_d, grid: TimeGrid) -> np.ndarray:
    """
    args:
        x_c, x_d: rate rows over the plug period, `x_d` is ignored for G2V
            sessions (may be None).
    
    returns:
        SOC at times t_arr, t_arr + 1, ..., t_arr + len(x_c).
    """
    x_c = np.asarray(x_c, dtype=float)
    delta = charge_step(session.spec, grid) * x_c
    if session.is_v2g and x_d is not None:
        delta = delta - discharge_step(session.spec, grid) * \
                np.asarray(x_d, dtype=float)
    return session.soc_init_kwh + np.concatenate(([0.0], np.cumsum(delta)))
