from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace
from hashlib import sha256
from typing import Dict
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np

from .dynamics import max_energy_per_period
from .dynamics import soc_trajectory
from .fleet import EvSession
from .grid import TimeGrid
from ..core import ConfigError

__all__ = ['Scenario', 'Schedule']


def _frozen_array(values, name: str, length: int = None) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise ConfigError(f'{name} must be one-dimensional')
    if length is not None and len(arr) < length:
        raise ConfigError(
            f'{name} covers {len(arr)} periods, scenario needs {length}'
        )
    if not np.all(np.isfinite(arr)):
        raise ConfigError(f'{name} holds non-finite values')
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Scenario:
    """
    everything one scheduling run needs: the time grid, the wind and price
    traces over every period, the fleet and the objective weights.
    
    `delta` is a multiplier of the price: curtailing one kWh in period t
    costs `delta * price[t]`.
    """
    grid: TimeGrid
    wind_kwh: np.ndarray
    price_cents_per_kwh: np.ndarray
    sessions: Tuple[EvSession, ...]
    lambda_: float = 1.0
    delta: float = 0.25
    p_g_max_kwh: float = 1000.0
    discharge_price_factor: float = 0.9
    name: str = ''
    seed: Optional[int] = None
    
    def __post_init__(self):
        horizon = self.grid.horizon_periods
        object.__setattr__(self, 'sessions', tuple(
            sorted(self.sessions, key=lambda s: (s.t_arr, s.id))
        ))
        object.__setattr__(self, 'wind_kwh', _frozen_array(
            self.wind_kwh, 'wind trace', horizon
        )[:horizon])
        object.__setattr__(self, 'price_cents_per_kwh', _frozen_array(
            self.price_cents_per_kwh, 'price trace', horizon
        )[:horizon])
        
        if np.any(self.wind_kwh < 0):
            raise ConfigError('wind trace holds negative values')
        if np.any(self.price_cents_per_kwh <= 0):
            raise ConfigError('price trace must be strictly positive')
        if not 0 <= self.lambda_ <= 1:
            raise ConfigError(f'lambda={self.lambda_} not in [0, 1]')
        if self.delta < 0:
            raise ConfigError(f'delta={self.delta} is negative')
        if self.p_g_max_kwh <= 0:
            raise ConfigError('p_g_max_kwh must be positive')
        if not 0 < self.discharge_price_factor <= 1:
            raise ConfigError('discharge_price_factor not in (0, 1]')
        
        ids = [s.id for s in self.sessions]
        if len(set(ids)) != len(ids):
            raise ConfigError('session ids are not unique')
        for s in self.sessions:
            if s.t_dep > horizon:
                raise ConfigError(
                    f'session {s.id} departs at t={s.t_dep}, beyond the '
                    f'horizon ({horizon} periods)'
                )
    
    @property
    def horizon(self) -> int:
        return self.grid.horizon_periods
    
    @property
    def session_index(self) -> Dict[str, int]:
        return {s.id: k for k, s in enumerate(self.sessions)}
    
    def replace(self, **changes) -> 'Scenario':
        return replace(self, **changes)
    
    def fingerprint(self) -> str:
        """
        identity of the physical scenario (fleet + traces). objective weights
        are left out so that a lambda or delta sweep shares one fingerprint.
        """
        h = sha256()
        h.update(repr(self.grid).encode())
        h.update(np.round(self.wind_kwh, 9).tobytes())
        h.update(np.round(self.price_cents_per_kwh, 9).tobytes())
        for s in self.sessions:
            h.update(repr((
                s.id, s.spec.name, s.t_arr, s.t_dep,
                round(s.soc_init_kwh, 9), round(s.soc_desired_kwh, 9),
                round(s.soc_min_kwh, 9), s.mode.value,
            )).encode())
        return h.hexdigest()[:16]


@dataclass(frozen=True, eq=False)
class Schedule:
    """
    fleet decisions over the whole horizon.
    
    x_c, x_d: [session x period] rates in [0, 1]; zero outside the plug
        period, `x_d` rows of G2V sessions are zero.
    soc: [session x time] (horizon + 1 columns), nan outside
        [t_arr, t_dep].
    g_kwh, omega_kwh: grid supply and curtailment per period.
    d_f_kwh: expected demand of unknown arrivals, priced in the balance
        (zero for anything but rolling-horizon windows).
    """
    session_ids: Tuple[str, ...]
    x_c: np.ndarray
    x_d: np.ndarray
    soc: np.ndarray
    g_kwh: np.ndarray
    omega_kwh: np.ndarray
    d_f_kwh: np.ndarray = field(default=None)
    
    def __post_init__(self):
        if self.d_f_kwh is None:
            object.__setattr__(self, 'd_f_kwh', np.zeros_like(self.g_kwh))
    
    @classmethod
    def from_rates(cls, scenario: Scenario, x_c: np.ndarray, x_d: np.ndarray,
                   d_f_kwh: Sequence[float] = None) -> 'Schedule':
        """
        derive SOC from the rates and G / Omega from the balance identity
            G - Omega = charge - discharge + D_f - W,  min(G, Omega) = 0.
        rates are clipped to [0, 1] and zeroed outside each plug period.
        """
        n, horizon = len(scenario.sessions), scenario.horizon
        x_c = np.clip(np.asarray(x_c, dtype=float), 0.0, 1.0)
        x_d = np.clip(np.asarray(x_d, dtype=float), 0.0, 1.0)
        if x_c.shape != (n, horizon) or x_d.shape != (n, horizon):
            raise ConfigError(
                f'rate matrices must be {(n, horizon)}, got {x_c.shape}'
            )
        soc = np.full((n, horizon + 1), np.nan)
        for k, s in enumerate(scenario.sessions):
            mask = np.zeros(horizon, dtype=bool)
            mask[s.t_arr:s.t_dep] = True
            x_c[k, ~mask] = 0.0
            if not s.is_v2g:
                x_d[k, :] = 0.0
            x_d[k, ~mask] = 0.0
            soc[k, s.t_arr:s.t_dep + 1] = soc_trajectory(
                s, x_c[k, s.t_arr:s.t_dep], x_d[k, s.t_arr:s.t_dep],
                scenario.grid
            )
        d_f = np.zeros(horizon) if d_f_kwh is None else \
            np.asarray(d_f_kwh, dtype=float)
        net = net_demand(scenario, x_c, x_d) + d_f - scenario.wind_kwh
        return cls(
            session_ids=tuple(s.id for s in scenario.sessions),
            x_c=x_c, x_d=x_d, soc=soc,
            g_kwh=np.maximum(net, 0.0),
            omega_kwh=np.maximum(-net, 0.0),
            d_f_kwh=d_f,
        )
    
    def charge_kwh(self, scenario: Scenario) -> np.ndarray:
        """ per-period fleet charging draw, sum_i P^c X_c. """
        return _power_column(scenario) @ self.x_c
    
    def discharge_kwh(self, scenario: Scenario) -> np.ndarray:
        return _power_column(scenario) @ self.x_d
    
    def tightened(self, scenario: Scenario) -> 'Schedule':
        """ same rates, G / Omega reset to the balance-identity values. """
        net = net_demand(scenario, self.x_c, self.x_d) + self.d_f_kwh - \
            scenario.wind_kwh
        return replace(self, g_kwh=np.maximum(net, 0.0),
                       omega_kwh=np.maximum(-net, 0.0))


def _power_column(scenario: Scenario) -> np.ndarray:
    return np.array([max_energy_per_period(s.spec, scenario.grid)
                     for s in scenario.sessions])


def net_demand(scenario: Scenario, x_c: np.ndarray,
               x_d: np.ndarray) -> np.ndarray:
    p = _power_column(scenario)
    if len(p) == 0:
        return np.zeros(scenario.horizon)
    return p @ x_c - p @ x_d
