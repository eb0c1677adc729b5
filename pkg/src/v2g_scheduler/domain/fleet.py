from dataclasses import dataclass
from dataclasses import replace
from enum import Enum

from ..core import ConfigError

__all__ = ['ENERGY_TOL', 'EvSession', 'EvSpec', 'Mode']

# absolute tolerance for every energy comparison (kWh).
ENERGY_TOL = 1e-6


class Mode(str, Enum):
    G2V = 'G2V'
    V2G = 'V2G'


@dataclass(frozen=True)
class EvSpec:
    name: str
    acceptance_rate_kw: float
    battery_capacity_kwh: float
    charger_power_kw: float
    battery_cost_usd: float
    eta_c: float = 0.9
    eta_d: float = 0.9
    
    def __post_init__(self):
        # a zero-power charger is accepted (it only ever yields zero energy).
        if self.acceptance_rate_kw < 0 or self.charger_power_kw < 0:
            raise ConfigError(f'{self.name}: negative charging power')
        if self.battery_capacity_kwh <= 0 or self.battery_cost_usd <= 0:
            raise ConfigError(f'{self.name}: capacity and battery cost '
                              f'must be positive')
        for eta in (self.eta_c, self.eta_d):
            if not 0 < eta <= 1:
                raise ConfigError(f'{self.name}: efficiency {eta} not in (0, 1]')


@dataclass(frozen=True)
class EvSession:
    """
    one plug-in episode. the plug period is {t_arr, ..., t_dep - 1}; the
    battery holds `soc_init_kwh` at time t_arr and should hold at least
    `soc_desired_kwh` at time t_dep.
    """
    id: str
    spec: EvSpec
    t_arr: int
    t_dep: int
    soc_init_kwh: float
    soc_desired_kwh: float
    soc_min_kwh: float
    mode: Mode = Mode.G2V
    
    def __post_init__(self):
        if not isinstance(self.mode, Mode):
            object.__setattr__(self, 'mode', Mode(self.mode))
        if self.t_arr < 0 or self.t_arr >= self.t_dep:
            raise ConfigError(
                f'session {self.id}: need 0 <= t_arr < t_dep, '
                f'got {self.t_arr}, {self.t_dep}'
            )
        cap = self.spec.battery_capacity_kwh + ENERGY_TOL
        for field in ('soc_init_kwh', 'soc_desired_kwh', 'soc_min_kwh'):
            value = getattr(self, field)
            if not 0 <= value <= cap:
                raise ConfigError(
                    f'session {self.id}: {field}={value} outside '
                    f'[0, {self.spec.battery_capacity_kwh}]'
                )
    
    @property
    def capacity(self) -> float:
        return self.spec.battery_capacity_kwh
    
    @property
    def is_v2g(self) -> bool:
        return self.mode is Mode.V2G
    
    @property
    def plug_periods(self) -> range:
        return range(self.t_arr, self.t_dep)
    
    @property
    def below_minimum(self) -> bool:
        """ membership of set B. """
        return self.soc_min_kwh - self.soc_init_kwh > ENERGY_TOL
    
    def plugged_at(self, t: int) -> bool:
        return self.t_arr <= t < self.t_dep
    
    def snapshot(self, t_start: int, soc_kwh: float) -> 'EvSession':
        """
        the same session seen from a later planning time: it "arrives" at
        `t_start` holding `soc_kwh`.
        """
        return replace(self, t_arr=t_start,
                       soc_init_kwh=min(max(soc_kwh, 0.0), self.capacity))
