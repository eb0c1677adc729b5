from dataclasses import dataclass
from typing import List
from typing import Mapping
from typing import Optional

import numpy as np

from .dynamics import charge_step
from .dynamics import soc_trajectory
from .dynamics import t_min
from .fleet import ENERGY_TOL
from .scenario import Scenario
from .scenario import Schedule
from .scenario import net_demand
from ..core import ShapeError
from ..core import UnreachableMinimumError

__all__ = ['Violation', 'validate_schedule']

RATE_TOL = 1e-6


@dataclass(frozen=True)
class Violation:
    kind: str
    #   one of: 'rate-bounds', 'idle-rate', 'complementarity', 'soc-dynamics',
    #   'soc-capacity', 'soc-minimum', 'desired-level', 'full-speed',
    #   'transformer', 'balance', 'grid-curtailment-overlap'
    session_id: Optional[str]
    period: Optional[int]
    amount: float
    
    def __str__(self):
        where = ', '.join(x for x in (
            self.session_id and f'session {self.session_id}',
            self.period is not None and f't={self.period}',
        ) if x)
        return f'{self.kind} ({where}): {self.amount:.3g}'


def validate_schedule(
        scenario: Scenario,
        schedule: Schedule,
        release_times: Mapping[str, int] = None,
        tighten: bool = False,
        tol: float = ENERGY_TOL,
) -> List[Violation]:
    """
    check a schedule against the constraints of the scheduling model.
    
    args:
        release_times: per session, the first period the aggregator controls
            it (defaults to t_arr). a rolling-horizon run only takes a
            vehicle over at the first planning time after its arrival; the
            minimum-level and desired-level rules count from there.
        tighten: reset G / Omega to the balance-identity values first (for
            raw optimizer points whose G / Omega carry slack).
    
    returns:
        empty list iff every constraint holds within `tol`.
    """
    n, horizon = len(scenario.sessions), scenario.horizon
    for name, shape in (('x_c', (n, horizon)), ('x_d', (n, horizon)),
                        ('soc', (n, horizon + 1)), ('g_kwh', (horizon,)),
                        ('omega_kwh', (horizon,)), ('d_f_kwh', (horizon,))):
        got = np.shape(getattr(schedule, name))
        if got != shape:
            raise ShapeError(f'{name}: expected shape {shape}, got {got}')
    if tuple(schedule.session_ids) != tuple(s.id for s in scenario.sessions):
        raise ShapeError('schedule rows do not follow the scenario sessions')
    if tighten:
        schedule = schedule.tightened(scenario)
    
    out = []
    release_times = release_times or {}
    for k, s in enumerate(scenario.sessions):
        out.extend(_check_session(
            scenario, schedule, k, release_times.get(s.id, s.t_arr), tol
        ))
    out.extend(_check_balance(scenario, schedule, tol))
    return out


def _check_session(scenario, schedule, k, release, tol):
    s = scenario.sessions[k]
    xc, xd = schedule.x_c[k], schedule.x_d[k]
    plug = slice(s.t_arr, s.t_dep)
    
    for arr, label in ((xc, 'x_c'), (xd, 'x_d')):
        for t in np.flatnonzero((arr < -RATE_TOL) | (arr > 1 + RATE_TOL)):
            yield Violation('rate-bounds', s.id, int(t), float(arr[t]))
        outside = np.ones(len(arr), dtype=bool)
        if label == 'x_c' or s.is_v2g:
            outside[plug] = False
        for t in np.flatnonzero(outside & (np.abs(arr) > RATE_TOL)):
            yield Violation('idle-rate', s.id, int(t), float(arr[t]))
    
    if s.is_v2g:
        both = (xc[plug] > RATE_TOL) & (xd[plug] > RATE_TOL)
        for t in np.flatnonzero(both):
            yield Violation('complementarity', s.id, s.t_arr + int(t),
                            float(min(xc[s.t_arr + t], xd[s.t_arr + t])))
    
    soc = schedule.soc[k, s.t_arr:s.t_dep + 1]
    expected = soc_trajectory(s, xc[plug], xd[plug], scenario.grid)
    for t in np.flatnonzero(np.abs(soc - expected) > tol):
        yield Violation('soc-dynamics', s.id, s.t_arr + int(t),
                        float(soc[t] - expected[t]))
    for t in np.flatnonzero((soc > s.capacity + tol) | (soc < -tol)):
        yield Violation('soc-capacity', s.id, s.t_arr + int(t), float(soc[t]))
    
    if release >= s.t_dep:
        # never controlled: no minimum or desired-level obligation.
        return
    soc_at_release = soc[release - s.t_arr]
    controlled = s.snapshot(release, soc_at_release)
    try:
        first_min = release + t_min(controlled, scenario.grid)
    except UnreachableMinimumError:
        first_min = None
    if first_min is not None:
        tail = soc[first_min - s.t_arr:]
        for t in np.flatnonzero(tail < s.soc_min_kwh - tol):
            yield Violation('soc-minimum', s.id, first_min + int(t),
                            float(s.soc_min_kwh - tail[t]))
    
    step = charge_step(s.spec, scenario.grid)
    reachable = soc_at_release + step * (s.t_dep - release) >= \
        s.soc_desired_kwh - tol
    if reachable:
        short = s.soc_desired_kwh - soc[-1]
        if short > tol:
            yield Violation('desired-level', s.id, s.t_dep, float(short))
    else:
        lazy = xc[release:s.t_dep] < 1 - RATE_TOL
        for t in np.flatnonzero(lazy):
            yield Violation('full-speed', s.id, release + int(t),
                            float(1 - xc[release + t]))


def _check_balance(scenario, schedule, tol):
    g, omega = schedule.g_kwh, schedule.omega_kwh
    net = net_demand(scenario, schedule.x_c, schedule.x_d) + \
        schedule.d_f_kwh - scenario.wind_kwh
    for t in np.flatnonzero(np.abs((g - omega) - net) > tol):
        yield Violation('balance', None, int(t), float((g - omega)[t] - net[t]))
    for t in np.flatnonzero((g < -tol) | (omega < -tol)):
        yield Violation('balance', None, int(t), float(min(g[t], omega[t])))
    for t in np.flatnonzero(np.minimum(g, omega) > tol):
        yield Violation('grid-curtailment-overlap', None, int(t),
                        float(min(g[t], omega[t])))
    for t in np.flatnonzero(g > scenario.p_g_max_kwh + tol):
        yield Violation('transformer', None, int(t),
                        float(g[t] - scenario.p_g_max_kwh))
