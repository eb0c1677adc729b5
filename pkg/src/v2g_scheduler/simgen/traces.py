"""
wind and price traces: CSV import/export and seeded synthetic profiles.

CSV schema: header `period,<value column>`, one row per period, periods
0-based and contiguous. wind uses `kwh`, price `cents_per_kwh`.
"""
import os

import numpy as np
import pandas as pd

from ..core import ConfigError
from ..domain import TimeGrid

__all__ = [
    'PRICE_COLUMN',
    'WIND_COLUMN',
    'expand_hourly',
    'hourly_factor',
    'read_trace',
    'synthetic_price',
    'synthetic_wind',
    'write_trace',
]

WIND_COLUMN = 'kwh'
PRICE_COLUMN = 'cents_per_kwh'


def hourly_factor(grid: TimeGrid) -> int:
    """
    periods per hour of `grid`.
    
    raises:
        ConfigError: the grid's period does not divide an hour.
    """
    if 60 % grid.delta_t_minutes:
        raise ConfigError(f'delta_t={grid.delta_t_minutes} min does not '
                          f'divide an hour, hourly rows cannot be expanded')
    return 60 // grid.delta_t_minutes


def read_trace(file: str, column: str, expand_hourly_by: int = 1) -> np.ndarray:
    """
    args:
        expand_hourly_by: repeat every row this many times (for hourly
            sources on a finer grid).
    
    raises:
        FileNotFoundError: `file` does not exist.
        ConfigError: wrong header, gaps in `period`.
    """
    if not os.path.exists(file):
        raise FileNotFoundError(f'trace file not found: {file}')
    df = pd.read_csv(file)
    if list(df.columns) != ['period', column]:
        raise ConfigError(f'{file}: expected header "period,{column}", got '
                          f'"{",".join(map(str, df.columns))}"')
    df = df.sort_values('period')
    if not np.array_equal(df['period'].to_numpy(), np.arange(len(df))):
        raise ConfigError(f'{file}: periods must run 0, 1, 2, ... without '
                          f'gaps')
    values = df[column].to_numpy(dtype=float)
    return expand_hourly(values, expand_hourly_by)


def write_trace(file: str, values, column: str):
    values = np.asarray(values, dtype=float)
    pd.DataFrame({'period': np.arange(len(values)), column: values}) \
        .to_csv(file, index=False)


def expand_hourly(values, periods_per_hour: int) -> np.ndarray:
    return np.repeat(np.asarray(values, dtype=float), periods_per_hour)


# -----------------------------------------------------------------------------

def synthetic_wind(days: int, seed: int = 0, turbine_kw: float = 230.0,
                   grid: TimeGrid = TimeGrid()) -> np.ndarray:
    """
    energy per period of one turbine: an hourly capacity factor following
    a night-heavy diurnal shape plus AR(1) noise, held over each hour.
    """
    rng = np.random.default_rng(seed)
    hours = np.arange(days * 24)
    shape = 0.38 + 0.14 * np.cos(2 * np.pi * (hours % 24 - 3) / 24)
    noise = np.zeros(len(hours))
    for h in range(1, len(hours)):
        noise[h] = 0.85 * noise[h - 1] + rng.normal(0.0, 0.09)
    cf = np.clip(shape + noise, 0.0, 1.0)
    per_hour = grid.periods_per_day // 24
    return expand_hourly(cf * turbine_kw * grid.dt_hours, per_hour)


def synthetic_price(days: int, seed: int = 0,
                    grid: TimeGrid = TimeGrid()) -> np.ndarray:
    """ hourly LMP-like prices (cents/kWh) with morning and evening peaks. """
    rng = np.random.default_rng(seed)
    hours = np.arange(days * 24) % 24
    base = 3.2 + 0.9 * np.exp(-((hours - 8) / 2.0) ** 2) + \
        2.1 * np.exp(-((hours - 19) / 2.5) ** 2)
    level = rng.uniform(0.85, 1.15, size=days).repeat(24)
    price = base * level * rng.lognormal(0.0, 0.08, size=len(hours))
    per_hour = grid.periods_per_day // 24
    return expand_hourly(np.maximum(np.round(price, 4), 0.5), per_hour)
