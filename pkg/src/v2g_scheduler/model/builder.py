"""
translate a scenario (whole horizon) or a planning-window snapshot into a
standard-form MIQP.

column order: per session (sorted by id) its x_c, x_d and soc blocks by
period, then z, then (y_c, y_d) pairs by period; last g and omega by period.
"""
from dataclasses import replace
from typing import Dict
from typing import Mapping
from typing import Sequence
from typing import Tuple

import numpy as np
from scipy import sparse

from .problem import MiqpProblem
from .problem import ModelLayout
from .problem import VariableDirectory
from ..core import ShapeError
from ..core import UnreachableMinimumError
from ..core import emit
from ..core import logw
from ..degradation import DegradationModel
from ..degradation import DegradationParams
from ..degradation import linear_coefficients
from ..domain import EvSession
from ..domain import Scenario
from ..domain import charge_step
from ..domain import discharge_step
from ..domain import max_energy_per_period
from ..domain import t_min

__all__ = ['build_dynamic', 'build_static']


class _Rows:
    
    def __init__(self):
        self.rows, self.cols, self.vals = [], [], []
        self.rhs, self.labels = [], []
    
    def add(self, coefs: Mapping[int, float], rhs: float, label: str):
        r = len(self.rhs)
        for col, v in coefs.items():
            if v != 0:
                self.rows.append(r)
                self.cols.append(col)
                self.vals.append(v)
        self.rhs.append(rhs)
        self.labels.append(label)
    
    def matrix(self, n: int) -> sparse.csr_matrix:
        return sparse.csr_matrix(
            (self.vals, (self.rows, self.cols)), shape=(len(self.rhs), n)
        )


class _Template:
    
    def __init__(self, layout: ModelLayout, lambda_: float, delta: float,
                 p_g_max_kwh: float, params: DegradationParams,
                 degradation: DegradationModel):
        self.layout = layout
        self.lambda_ = lambda_
        self.delta = delta
        self.p_g_max = p_g_max_kwh
        self.params = params
        self.degradation = degradation
        
        self.directory = VariableDirectory()
        self.lb, self.ub, self.c = [], [], []
        self.binaries = []
        self.q_rows, self.q_cols, self.q_vals = [], [], []
        self.ineq = _Rows()
        self.eq = _Rows()
        self.waived = set()
        # per period: column -> energy coefficient of the net fleet draw.
        self.draw = {t: {} for t in layout.periods}
    
    def column(self, role, sid=None, t=None, lb=0.0, ub=1.0, cost=0.0,
               binary=False) -> int:
        col = self.directory.add(role, sid, t)
        self.lb.append(lb)
        self.ub.append(ub)
        self.c.append(cost)
        if binary:
            self.binaries.append(col)
        return col
    
    def square(self, coefs: Mapping[int, float], weight: float):
        """ add weight * (sum_k coefs[k] * x_k)^2 to the objective. """
        if weight == 0:
            return
        items = list(coefs.items())
        for i, a in items:
            for j, b in items:
                self.q_rows.append(i)
                self.q_cols.append(j)
                # 0.5 x'Qx convention.
                self.q_vals.append(2 * weight * a * b)
    
    # -------------------------------------------------------------------------
    
    def add_session(self, s: EvSession):
        grid = self.layout.grid
        p = max_energy_per_period(s.spec, grid)
        kc, kd = charge_step(s.spec, grid), discharge_step(s.spec, grid)
        periods = range(s.t_arr, s.t_dep)
        big_m = s.capacity
        
        try:
            forced = t_min(s, grid)
            soc_floor_from = s.t_arr + forced
        except UnreachableMinimumError as e:
            logw(f'session {s.id}: minimum level unreachable ({e}); '
                 f'charging at full speed, minimum-level rows waived')
            emit('minimum_waived', s.id)
            self.waived.add(s.id)
            forced, soc_floor_from = len(periods), None
        
        prev = self.layout.previous_rates.get(s.id)
        xc_prev = xd_prev = None
        if prev is not None:
            xc_prev = self.column('x_c_prev', s.id, s.t_arr - 1,
                                  lb=prev[0], ub=prev[0])
            self.eq.add({xc_prev: 1.0}, prev[0], f'pin_c[{s.id}]')
            if s.is_v2g:
                xd_prev = self.column('x_d_prev', s.id, s.t_arr - 1,
                                      lb=prev[1], ub=prev[1])
                self.eq.add({xd_prev: 1.0}, prev[1], f'pin_d[{s.id}]')
        
        xc = [self.column('x_c', s.id, t, lb=1.0 if k < forced else 0.0)
              for k, t in enumerate(periods)]
        xd = [self.column('x_d', s.id, t) for t in periods] \
            if s.is_v2g else []
        soc = []
        for t in range(s.t_arr, s.t_dep + 1):
            floor = s.soc_min_kwh if soc_floor_from is not None \
                and t >= soc_floor_from else 0.0
            if t == s.t_arr:
                floor = min(floor, s.soc_init_kwh)
            soc.append(self.column('soc', s.id, t, lb=floor, ub=s.capacity))
        z = self.column('z', s.id, binary=True)
        
        # soc dynamics.
        self.eq.add({soc[0]: 1.0}, s.soc_init_kwh, f'soc_init[{s.id}]')
        for k, t in enumerate(periods):
            row = {soc[k + 1]: 1.0, soc[k]: -1.0, xc[k]: -kc}
            if xd:
                row[xd[k]] = kd
            self.eq.add(row, 0.0, f'soc_update[{s.id},{t}]')
        
        # desired level, or full speed when it cannot be reached.
        reach = s.soc_init_kwh + kc * len(periods) - s.soc_desired_kwh
        self.ineq.add({z: -big_m}, reach, f'desired_reach[{s.id}]')
        for k, t in enumerate(periods):
            self.ineq.add({z: 1.0, xc[k]: -1.0}, 0.0,
                          f'full_speed[{s.id},{t}]')
        self.ineq.add({soc[-1]: -1.0, z: -big_m}, -s.soc_desired_kwh,
                      f'desired_level[{s.id}]')
        
        # charge, discharge or idle.
        if s.is_v2g:
            for k, t in enumerate(periods):
                yc = self.column('y_c', s.id, t, binary=True)
                yd = self.column('y_d', s.id, t, binary=True)
                self.ineq.add({xc[k]: 1.0, yc: 1.0}, 1.0,
                              f'charge_gate[{s.id},{t}]')
                self.ineq.add({xd[k]: 1.0, yd: 1.0}, 1.0,
                              f'discharge_gate[{s.id},{t}]')
                self.eq.add({yc: 1.0, yd: 1.0}, 1.0,
                            f'exclusive[{s.id},{t}]')
        
        for k, t in enumerate(periods):
            self.draw[t][xc[k]] = p
            if xd:
                self.draw[t][xd[k]] = -p
        
        self._add_degradation(s, xc, xc_prev, kc, xd, xd_prev, kd)
    
    def _add_degradation(self, s, xc, xc_prev, kc, xd, xd_prev, kd):
        if self.lambda_ == 0:
            return
        if self.degradation == 'linear':
            lc, ld = linear_coefficients(s, self.params, self.layout.grid)
            for col in xc:
                self.c[col] += self.lambda_ * lc
            for col in xd:
                self.c[col] += self.lambda_ * ld
            return
        for cols, prev, k in ((xc, xc_prev, kc), (xd, xd_prev, kd)):
            w = self.lambda_ * k * k
            for i, col in enumerate(cols):
                before = cols[i - 1] if i else prev
                if before is None:
                    self.square({col: 1.0}, self.params.alpha * w)
                else:
                    self.square({col: 1.0, before: -1.0},
                                self.params.alpha * w)
                self.square({col: 1.0}, self.params.beta * w)
    
    def add_balance(self):
        lay = self.layout
        for k, t in enumerate(lay.periods):
            price = float(lay.price_cents_per_kwh[k])
            g = self.column('g', None, t, ub=self.p_g_max, cost=price)
            omega = self.column('omega', None, t, ub=np.inf,
                                cost=self.delta * price)
            # net wind left after the expected demand of unknown arrivals.
            supply = float(lay.wind_kwh[k] - lay.d_f_kwh[k])
            row = dict(self.draw[t])
            row[g] = -1.0
            self.ineq.add(row, supply, f'grid_supply[{t}]')
            row = {col: -v for col, v in self.draw[t].items()}
            row[omega] = -1.0
            self.ineq.add(row, -supply, f'curtailment[{t}]')
    
    def finish(self) -> MiqpProblem:
        n = len(self.c)
        layout = replace(self.layout, waived=frozenset(self.waived))
        return MiqpProblem(
            q=sparse.csc_matrix((self.q_vals, (self.q_rows, self.q_cols)),
                                shape=(n, n)),
            c=np.array(self.c, dtype=float),
            constant=0.0,
            a_ub=self.ineq.matrix(n),
            b_ub=np.array(self.ineq.rhs, dtype=float),
            a_eq=self.eq.matrix(n),
            b_eq=np.array(self.eq.rhs, dtype=float),
            lb=np.array(self.lb, dtype=float),
            ub=np.array(self.ub, dtype=float),
            binaries=np.array(self.binaries, dtype=int),
            directory=self.directory,
            layout=layout,
            ub_labels=tuple(self.ineq.labels),
            eq_labels=tuple(self.eq.labels),
        )


def _build(layout, scenario, params, degradation) -> MiqpProblem:
    tpl = _Template(layout, scenario.lambda_, scenario.delta,
                    scenario.p_g_max_kwh, params, degradation)
    for s in sorted(layout.sessions, key=lambda x: x.id):
        tpl.add_session(s)
    tpl.add_balance()
    return tpl.finish()


def build_static(
        scenario: Scenario,
        params: DegradationParams = DegradationParams(),
        degradation: DegradationModel = 'quadratic',
) -> MiqpProblem:
    """ the day-ahead model over the whole horizon, every session known. """
    horizon = scenario.horizon
    layout = ModelLayout(
        grid=scenario.grid,
        sessions=scenario.sessions,
        start=0,
        end=horizon,
        wind_kwh=np.asarray(scenario.wind_kwh),
        price_cents_per_kwh=np.asarray(scenario.price_cents_per_kwh),
        d_f_kwh=np.zeros(horizon),
        previous_rates={},
    )
    return _build(layout, scenario, params, degradation)


def build_dynamic(
        planner_state,
        window: Tuple[int, int],
        wind_forecast: Sequence[float],
        price: Sequence[float],
        future_demand: Sequence[float],
        scenario: Scenario,
        params: DegradationParams = DegradationParams(),
        degradation: DegradationModel = 'quadratic',
) -> MiqpProblem:
    """
    the model of one planning window {phi_j, ..., tau_max - 1}.
    
    args:
        planner_state: provides `active_sessions` (snapshots starting at
            phi_j with their current SOC as initial level) and `last_rates`
            (session id -> (LC, LD), the rates of period phi_j - 1).
        wind_forecast, price, future_demand: one value per window period.
    """
    start, end = window
    length = end - start
    sessions = tuple(planner_state.active_sessions.values())
    for s in sessions:
        if s.t_arr != start or s.t_dep > end:
            raise ShapeError(f'session {s.id} is not a snapshot of window '
                             f'[{start}, {end})')
    arrays = {}
    for name, values in (('wind_kwh', wind_forecast),
                         ('price_cents_per_kwh', price),
                         ('d_f_kwh', future_demand)):
        arr = np.asarray(values, dtype=float)
        if arr.shape != (length,):
            raise ShapeError(f'{name}: expected {length} values, '
                             f'got {arr.shape}')
        arrays[name] = arr
    last_rates = planner_state.last_rates  # type: Dict[str, Tuple]
    layout = ModelLayout(
        grid=scenario.grid,
        sessions=sessions,
        start=start,
        end=end,
        previous_rates={s.id: tuple(last_rates.get(s.id, (0.0, 0.0)))
                        for s in sessions},
        **arrays,
    )
    return _build(layout, scenario, params, degradation)
