from math import floor

import numpy as np

from .domain import Scenario
from .domain import Schedule
from .domain import charge_step

__all__ = ['bau_schedule']


def bau_schedule(scenario: Scenario) -> Schedule:
    """
    business as usual: every vehicle charges at full speed from arrival
    until its battery is full; the last period gets the partial rate that
    lands exactly on capacity. nothing is discharged.
    """
    x_c = np.zeros((len(scenario.sessions), scenario.horizon))
    for k, s in enumerate(scenario.sessions):
        step = charge_step(s.spec, scenario.grid)
        deficit = s.capacity - s.soc_init_kwh
        if step <= 0 or deficit <= 0:
            continue
        periods = deficit / step
        full = floor(periods + 1e-9)
        rates = [1.0] * full
        if periods - full > 1e-9:
            rates.append(periods - full)
        rates = rates[:s.t_dep - s.t_arr]
        x_c[k, s.t_arr:s.t_arr + len(rates)] = rates
    return Schedule.from_rates(scenario, x_c, np.zeros_like(x_c))
