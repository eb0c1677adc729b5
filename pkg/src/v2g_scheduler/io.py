"""
file formats.

scenario JSON references its wind / price CSVs by paths relative to the
JSON file itself. schedule CSV rows are
    session_id,period,x_c,x_d,soc_kwh
plus one pseudo-row per period for the grid:
    _grid,period,g_kwh,omega_kwh,
report CSV rows are the per-session costs plus a `_fleet` totals row.
"""
import json
import os
from dataclasses import asdict
from dataclasses import replace
from typing import Iterable
from typing import Optional

import numpy as np
import pandas as pd
from lk_utils import dumps
from lk_utils import loads

from .core import ConfigError
from .domain import EvSession
from .domain import EvSpec
from .domain import Scenario
from .domain import Schedule
from .domain import TimeGrid
from .forecast import MarkovForecaster
from .metrics import Report
from .simgen import PRICE_COLUMN
from .simgen import ScenarioConfig
from .simgen import WIND_COLUMN
from .simgen import hourly_factor
from .simgen import read_trace
from .simgen import write_trace

__all__ = [
    'load_forecaster',
    'load_report',
    'load_scenario',
    'load_scenario_config',
    'read_schedule_csv',
    'save_forecaster',
    'save_report',
    'save_scenario',
    'write_diagnostics',
    'write_report_csv',
    'write_schedule_csv',
]

GRID_ROW = '_grid'
SCHEDULE_COLUMNS = ['session_id', 'period', 'x_c', 'x_d', 'soc_kwh']
FLEET_ROW = '_fleet'
REPORT_COLUMNS = ['session_id', 'charged_kwh', 'discharged_kwh',
                  'charge_cost_cents', 'degradation_cost_cents',
                  'discharge_revenue_cents', 'final_soc_kwh']


# -----------------------------------------------------------------------------
# scenario

def _session_to_dict(s: EvSession) -> dict:
    spec = s.spec
    return {
        'id': s.id,
        'spec': {
            'name': spec.name,
            'acceptance_rate_kw': spec.acceptance_rate_kw,
            'battery_capacity_kwh': spec.battery_capacity_kwh,
            'charger_power_kw': spec.charger_power_kw,
            'battery_cost_usd': spec.battery_cost_usd,
            'eta_c': spec.eta_c,
            'eta_d': spec.eta_d,
        },
        't_arr': s.t_arr,
        't_dep': s.t_dep,
        'soc_init_kwh': s.soc_init_kwh,
        'soc_desired_kwh': s.soc_desired_kwh,
        'soc_min_kwh': s.soc_min_kwh,
        'mode': s.mode.value,
    }


def _session_from_dict(data: dict) -> EvSession:
    try:
        return EvSession(
            id=str(data['id']),
            spec=EvSpec(**data['spec']),
            t_arr=int(data['t_arr']),
            t_dep=int(data['t_dep']),
            soc_init_kwh=float(data['soc_init_kwh']),
            soc_desired_kwh=float(data['soc_desired_kwh']),
            soc_min_kwh=float(data['soc_min_kwh']),
            mode=data.get('mode', 'G2V'),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f'invalid session entry {data.get("id")!r}: {e}')


def save_scenario(scenario: Scenario, file: str,
                  config: ScenarioConfig = None):
    """ writes `file` plus `<stem>.wind.csv` and `<stem>.price.csv` beside it. """
    folder = os.path.dirname(os.path.abspath(file))
    stem = os.path.splitext(os.path.basename(file))[0]
    wind_csv, price_csv = f'{stem}.wind.csv', f'{stem}.price.csv'
    write_trace(os.path.join(folder, wind_csv), scenario.wind_kwh,
                WIND_COLUMN)
    write_trace(os.path.join(folder, price_csv),
                scenario.price_cents_per_kwh, PRICE_COLUMN)
    grid = scenario.grid
    dumps({
        'name': scenario.name,
        'grid': {
            'delta_t_minutes': grid.delta_t_minutes,
            'planning_interval_minutes': grid.planning_interval_minutes,
            'horizon_periods': grid.horizon_periods,
        },
        'lambda': scenario.lambda_,
        'delta': scenario.delta,
        'p_g_max_kwh': scenario.p_g_max_kwh,
        'discharge_price_factor': scenario.discharge_price_factor,
        'wind_csv': wind_csv,
        'price_csv': price_csv,
        'sessions': [_session_to_dict(s) for s in scenario.sessions],
        'config': config.to_dict() if config else None,
        'seed': scenario.seed,
    }, file)


def load_scenario(file: str, expand_hourly: bool = False) -> Scenario:
    """
    args:
        expand_hourly: the CSVs hold hourly rows, repeated onto the
            scenario's own grid.
    
    raises:
        FileNotFoundError: the JSON or a referenced CSV is missing.
        ConfigError: invalid content.
    """
    if not os.path.exists(file):
        raise FileNotFoundError(f'scenario file not found: {file}')
    data = loads(file)
    folder = os.path.dirname(os.path.abspath(file))
    try:
        grid = TimeGrid(**data['grid'])
        expand_hourly_by = hourly_factor(grid) if expand_hourly else 1
        wind = read_trace(os.path.join(folder, data['wind_csv']),
                          WIND_COLUMN, expand_hourly_by)
        price = read_trace(os.path.join(folder, data['price_csv']),
                           PRICE_COLUMN, expand_hourly_by)
        return Scenario(
            grid=grid,
            wind_kwh=wind,
            price_cents_per_kwh=price,
            sessions=tuple(_session_from_dict(s) for s in data['sessions']),
            lambda_=float(data.get('lambda', 1.0)),
            delta=float(data.get('delta', 0.25)),
            p_g_max_kwh=float(data.get('p_g_max_kwh', 1000.0)),
            discharge_price_factor=float(
                data.get('discharge_price_factor', 0.9)
            ),
            name=data.get('name', ''),
            seed=data.get('seed'),
        )
    except KeyError as e:
        raise ConfigError(f'{file}: missing field {e}')


def load_scenario_config(file: str) -> Optional[ScenarioConfig]:
    """ the generator config echoed in a scenario file, if any. """
    data = loads(file).get('config')
    return ScenarioConfig.from_dict(data) if data else None


# -----------------------------------------------------------------------------
# schedule

def write_schedule_csv(scenario: Scenario, schedule: Schedule, file: str):
    rows = []
    for k, s in enumerate(scenario.sessions):
        for t in range(s.t_arr, s.t_dep):
            rows.append((s.id, t, schedule.x_c[k, t], schedule.x_d[k, t],
                         schedule.soc[k, t + 1]))
    for t in range(scenario.horizon):
        rows.append((GRID_ROW, t, schedule.g_kwh[t], schedule.omega_kwh[t],
                     None))
    pd.DataFrame(rows, columns=SCHEDULE_COLUMNS).to_csv(
        file, index=False, float_format='%.10g'
    )


def read_schedule_csv(scenario: Scenario, file: str) -> Schedule:
    """ rebuild a schedule; SOC comes from the rates, G / Omega from the file. """
    if not os.path.exists(file):
        raise FileNotFoundError(f'schedule file not found: {file}')
    df = pd.read_csv(file, dtype={'session_id': str})
    if list(df.columns) != SCHEDULE_COLUMNS:
        raise ConfigError(f'{file}: unexpected columns {list(df.columns)}')
    n, horizon = len(scenario.sessions), scenario.horizon
    x_c, x_d = np.zeros((n, horizon)), np.zeros((n, horizon))
    index = scenario.session_index
    ev = df[df['session_id'] != GRID_ROW]
    unknown = set(ev['session_id']) - set(index)
    if unknown:
        raise ConfigError(f'{file}: sessions not in the scenario: '
                          f'{sorted(unknown)}')
    rows = ev['session_id'].map(index).to_numpy()
    periods = ev['period'].to_numpy(dtype=int)
    x_c[rows, periods] = ev['x_c'].to_numpy(dtype=float)
    x_d[rows, periods] = ev['x_d'].to_numpy(dtype=float)
    schedule = Schedule.from_rates(scenario, x_c, x_d)
    grid_rows = df[df['session_id'] == GRID_ROW].sort_values('period')
    if len(grid_rows) == horizon:
        schedule = replace(
            schedule,
            g_kwh=grid_rows['x_c'].to_numpy(dtype=float),
            omega_kwh=grid_rows['x_d'].to_numpy(dtype=float),
        )
    return schedule


# -----------------------------------------------------------------------------
# reports, forecasters, diagnostics

def save_report(report: Report, file: str):
    dumps(report.to_dict(), file)


def write_report_csv(report: Report, file: str):
    """
    one row per session plus a `_fleet` row holding the totals. columns
    follow `SessionCost`.
    """
    rows = [asdict(s) for s in report.sessions]
    rows.append({
        'session_id': FLEET_ROW,
        'charged_kwh': sum(s.charged_kwh for s in report.sessions),
        'discharged_kwh': report.discharged_kwh,
        'charge_cost_cents': report.charge_cost_cents,
        'degradation_cost_cents': report.degradation_cost_cents,
        'discharge_revenue_cents': report.discharge_revenue_cents,
        'final_soc_kwh': np.nan,
    })
    df = pd.DataFrame(rows, columns=REPORT_COLUMNS)
    df.to_csv(file, index=False, float_format='%.10g')


def load_report(file: str) -> Report:
    if not os.path.exists(file):
        raise FileNotFoundError(f'report file not found: {file}')
    try:
        return Report.from_dict(loads(file))
    except TypeError as e:
        raise ConfigError(f'{file}: not a report ({e})')


def save_forecaster(forecaster: MarkovForecaster, file: str):
    dumps(forecaster.to_dict(), file)


def load_forecaster(file: str) -> MarkovForecaster:
    if not os.path.exists(file):
        raise FileNotFoundError(f'forecaster file not found: {file}')
    return MarkovForecaster.from_dict(loads(file))


def write_diagnostics(records: Iterable[dict], file: str):
    """ JSON lines, keys sorted. """
    lines = [json.dumps(r, sort_keys=True) for r in records]
    dumps('\n'.join(lines) + ('\n' if lines else ''), file)
