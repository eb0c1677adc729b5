"""
seeded fleet generation.

every day `n_vehicles` trips are drawn; the first `home_fraction` of them
park at home, the rest at work. a trip gets a catalog vehicle, an arrival
hour from the location's PMF, a plug duration of 4 to 12 hours in 15-minute
steps and uniform initial / desired levels.
"""
import os
from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace
from math import ceil
from typing import Literal
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np
from lk_utils import loads

from .catalog import ev_catalog
from .traces import synthetic_price
from .traces import synthetic_wind
from ..core import ConfigError
from ..core import DemandModelError
from ..domain import EvSession
from ..domain import Mode
from ..domain import Scenario
from ..domain import TimeGrid
from ..planner import FutureDemandModel

__all__ = [
    'Fleet',
    'ScenarioConfig',
    'default_arrival_pmfs',
    'fit_future_demand_model',
    'generate',
    'history_config',
    'make_scenario',
]

_PMF_FILE = os.path.join(os.path.dirname(__file__), 'data', 'arrival_pmfs.json')


def default_arrival_pmfs() -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    """ (home, work) 24-bin arrival-hour PMFs shipped with the package. """
    data = loads(_PMF_FILE)
    return tuple(data['home']), tuple(data['work'])


@dataclass(frozen=True)
class ScenarioConfig:
    """
    args:
        n_vehicles: trips per day.
        arrival_slot_mode: 'uniform' draws the quarter within the arrival
            hour, 'hour' arrives on the hour (a planning time).
        arrival_pmf_home, arrival_pmf_work: None for the bundled PMFs.
    """
    n_vehicles: int = 100
    home_fraction: float = 0.5
    r_v2g: float = 0.5
    days: int = 10
    seed: int = 0
    arrival_pmf_home: Optional[Tuple[float, ...]] = None
    arrival_pmf_work: Optional[Tuple[float, ...]] = None
    plug_hours: Tuple[float, float] = (4.0, 12.0)
    soc_init_frac: Tuple[float, float] = (0.0, 0.65)
    soc_desired_frac: Tuple[float, float] = (0.75, 0.95)
    soc_min_kwh: float = 5.0
    eta: float = 0.9
    arrival_slot_mode: Literal['uniform', 'hour'] = 'uniform'
    turbine_kw: float = 230.0
    grid: TimeGrid = field(default_factory=TimeGrid)
    
    def __post_init__(self):
        if self.n_vehicles < 0 or self.days < 1:
            raise ConfigError('n_vehicles >= 0 and days >= 1 required')
        for k in ('home_fraction', 'r_v2g'):
            if not 0 <= getattr(self, k) <= 1:
                raise ConfigError(f'{k} not in [0, 1]')
        for k in ('soc_init_frac', 'soc_desired_frac'):
            lo, hi = getattr(self, k)
            if not 0 <= lo <= hi <= 1:
                raise ConfigError(f'{k}={getattr(self, k)} is not a '
                                  f'sub-range of [0, 1]')
        lo, hi = self.plug_hours
        if not 0 < lo <= hi:
            raise ConfigError(f'plug_hours={self.plug_hours} is invalid')
        if not 0 < self.eta <= 1 or self.soc_min_kwh < 0:
            raise ConfigError('eta in (0, 1] and soc_min_kwh >= 0 required')
        if self.arrival_slot_mode not in ('uniform', 'hour'):
            raise ConfigError(f'unknown arrival_slot_mode: '
                              f'{self.arrival_slot_mode!r}')
        for pmf in (self.arrival_pmf_home, self.arrival_pmf_work):
            if pmf is not None:
                _check_pmf(pmf)
    
    def pmfs(self) -> Tuple[np.ndarray, np.ndarray]:
        home, work = default_arrival_pmfs()
        return (np.asarray(self.arrival_pmf_home or home, dtype=float),
                np.asarray(self.arrival_pmf_work or work, dtype=float))
    
    def to_dict(self) -> dict:
        out = asdict(self)
        out['grid'] = asdict(self.grid)
        return out
    
    @classmethod
    def from_dict(cls, data: dict) -> 'ScenarioConfig':
        data = dict(data)
        if 'grid' in data:
            data['grid'] = TimeGrid(**data['grid'])
        for k in ('arrival_pmf_home', 'arrival_pmf_work', 'plug_hours',
                  'soc_init_frac', 'soc_desired_frac'):
            if data.get(k) is not None:
                data[k] = tuple(data[k])
        return cls(**data)


def _check_pmf(pmf):
    pmf = np.asarray(pmf, dtype=float)
    if pmf.shape != (24,) or np.any(pmf < 0) or abs(pmf.sum() - 1) > 1e-6:
        raise ConfigError('arrival PMFs need 24 non-negative values '
                          'summing to 1')


@dataclass(frozen=True, eq=False)
class Fleet:
    sessions: Tuple[EvSession, ...]
    horizon_periods: int
    config: ScenarioConfig


def generate(config: ScenarioConfig) -> Fleet:
    """
    the horizon covers `config.days` days, extended to the last departure
    (rounded up to a planning interval).
    """
    grid = config.grid
    rng = np.random.default_rng(config.seed)
    home_pmf, work_pmf = config.pmfs()
    catalog = ev_catalog(config.eta, config.eta)
    per_hour = grid.periods_per_day // 24
    plug_lo = int(round(config.plug_hours[0] * 60 / grid.delta_t_minutes))
    plug_hi = int(round(config.plug_hours[1] * 60 / grid.delta_t_minutes))
    n_home = int(round(config.home_fraction * config.n_vehicles))
    
    sessions = []
    for day in range(config.days):
        for k in range(config.n_vehicles):
            spec = catalog[rng.integers(len(catalog))]
            pmf = home_pmf if k < n_home else work_pmf
            hour = int(rng.choice(24, p=pmf))
            slot = int(rng.integers(per_hour)) \
                if config.arrival_slot_mode == 'uniform' else 0
            t_arr = day * grid.periods_per_day + hour * per_hour + slot
            duration = int(rng.integers(plug_lo, plug_hi + 1))
            cap = spec.battery_capacity_kwh
            soc_init = rng.uniform(*config.soc_init_frac) * cap
            soc_desired = rng.uniform(*config.soc_desired_frac) * cap
            v2g = rng.random() < config.r_v2g
            sessions.append(EvSession(
                id=f'ev{day:02d}{k:03d}',
                spec=spec,
                t_arr=t_arr,
                t_dep=t_arr + duration,
                soc_init_kwh=float(soc_init),
                soc_desired_kwh=float(soc_desired),
                soc_min_kwh=min(config.soc_min_kwh, cap),
                mode=Mode.V2G if v2g else Mode.G2V,
            ))
    
    horizon = config.days * grid.periods_per_day
    if sessions:
        horizon = max(horizon, max(s.t_dep for s in sessions))
    step = grid.periods_per_interval
    horizon = ceil(horizon / step) * step
    sessions.sort(key=lambda s: (s.t_arr, s.id))
    return Fleet(tuple(sessions), horizon, config)


def fit_future_demand_model(
        sessions: Sequence[EvSession],
        grid: TimeGrid = TimeGrid(),
        days: int = None,
) -> FutureDemandModel:
    """
    args:
        days: days the history covers; defaults to the days spanned by the
            arrivals.
    
    raises:
        DemandModelError: empty history.
    """
    if not sessions:
        raise DemandModelError('cannot fit a demand model on an empty '
                               'history')
    ppd = grid.periods_per_day
    if days is None:
        days = ceil((max(s.t_arr for s in sessions) + 1) / ppd)
    required = np.mean([s.soc_desired_kwh for s in sessions]) - \
        np.mean([s.soc_init_kwh for s in sessions])
    plug = np.mean([s.t_dep - s.t_arr for s in sessions])
    counts = np.bincount([s.t_arr % ppd for s in sessions], minlength=ppd)
    return FutureDemandModel(
        expected_required_charge_kwh=float(max(required, 0.0)),
        expected_plug_periods=float(plug),
        arrival_rate=counts / days,
    )


def make_scenario(
        config: ScenarioConfig,
        wind_kwh: Sequence[float] = None,
        price_cents_per_kwh: Sequence[float] = None,
        name: str = '',
        **weights,
) -> Scenario:
    """
    a scenario from a generated fleet. missing traces are synthesized from
    the config's seed and cover the whole horizon.
    
    args:
        weights: lambda_, delta, p_g_max_kwh, discharge_price_factor.
    """
    fleet = generate(config)
    grid = config.grid.with_horizon(fleet.horizon_periods)
    days = ceil(fleet.horizon_periods / grid.periods_per_day)
    if wind_kwh is None:
        wind_kwh = synthetic_wind(days, config.seed, config.turbine_kw, grid)
    if price_cents_per_kwh is None:
        price_cents_per_kwh = synthetic_price(days, config.seed, grid)
    return Scenario(
        grid=grid,
        wind_kwh=np.asarray(wind_kwh, dtype=float)[:fleet.horizon_periods],
        price_cents_per_kwh=np.asarray(
            price_cents_per_kwh, dtype=float
        )[:fleet.horizon_periods],
        sessions=fleet.sessions,
        name=name or f'seed-{config.seed}',
        seed=config.seed,
        **weights,
    )


def history_config(config: ScenarioConfig) -> ScenarioConfig:
    """ the config of the history a demand model is fitted on. """
    return replace(config, seed=config.seed + 1)
