from dataclasses import dataclass

from ..core import ConfigError

__all__ = ['TimeGrid']

MINUTES_PER_DAY = 1440


@dataclass(frozen=True)
class TimeGrid:
    """
    period `t` denotes the time slot [t, t + 1) of length `delta_t_minutes`.
    planning times `j` are spaced `planning_interval_minutes` apart; `phi(j)`
    maps a planning time to its period index.
    """
    delta_t_minutes: int = 15
    planning_interval_minutes: int = 60
    horizon_periods: int = 96
    
    def __post_init__(self):
        if self.delta_t_minutes <= 0 or self.planning_interval_minutes <= 0:
            raise ConfigError('time steps must be positive')
        if MINUTES_PER_DAY % self.delta_t_minutes:
            raise ConfigError(
                f'delta_t={self.delta_t_minutes} min does not divide a day'
            )
        if self.planning_interval_minutes % self.delta_t_minutes:
            raise ConfigError(
                f'delta_t={self.delta_t_minutes} min does not divide the '
                f'planning interval {self.planning_interval_minutes} min'
            )
        if self.horizon_periods <= 0:
            raise ConfigError('horizon must hold at least one period')
    
    @property
    def dt_hours(self) -> float:
        return self.delta_t_minutes / 60
    
    @property
    def periods_per_day(self) -> int:
        return MINUTES_PER_DAY // self.delta_t_minutes
    
    @property
    def periods_per_interval(self) -> int:
        return self.planning_interval_minutes // self.delta_t_minutes
    
    @property
    def planning_times(self) -> range:
        """ every j whose phi(j) falls inside the horizon. """
        step = self.periods_per_interval
        return range(-(-self.horizon_periods // step))
    
    def phi(self, j: int) -> int:
        return self.periods_per_interval * j
    
    def planning_index(self, t: int) -> int:
        """ the first planning time j with phi(j) >= t. """
        return -(-t // self.periods_per_interval)
    
    def with_horizon(self, horizon_periods: int) -> 'TimeGrid':
        return TimeGrid(self.delta_t_minutes, self.planning_interval_minutes,
                        horizon_periods)
