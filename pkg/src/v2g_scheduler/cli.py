"""
command line front end.

exit codes: 1 invalid config, 2 solver failure, 3 file IO.
"""
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from functools import wraps
from typing import Optional

import click
from rich.console import Console
from rich.table import Table

from . import io
from .core import ConfigError
from .core import SolverError
from .core import V2GError
from .core import get_logger
from .core import log
from .core import loge
from .degradation import DegradationParams
from .forecast import MarkovForecaster
from .forecast import evaluate_forecaster
from .forecast import split_trace
from .metrics import compare as compare_reports
from .metrics import sweep_table
from .simgen import PRICE_COLUMN
from .simgen import ScenarioConfig
from .simgen import WIND_COLUMN
from .simgen import fit_future_demand_model
from .simgen import generate as generate_fleet
from .simgen import history_config
from .simgen import hourly_factor
from .simgen import make_scenario
from .simgen import read_trace
from .simulation import SimulationConfig
from .simulation import run_simulation
from .solver import SolverConfig

__all__ = ['cli']


def _exit_codes(func):
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ConfigError as e:
            loge(f'invalid config: {e}')
            sys.exit(1)
        except SolverError as e:
            loge(f'solver failure: {e}')
            sys.exit(2)
        except OSError as e:
            loge(f'io error: {e}')
            sys.exit(3)
        except V2GError as e:
            loge(str(e))
            sys.exit(1)
    return wrapper


@click.group()
@click.option('--verbose', is_flag=True, help='Debug logging (same as '
                                              'V2G_LOG=debug).')
@click.option('--log-file', type=click.Path(), default=None,
              help='Also write the printed log lines to this file.')
def cli(verbose: bool, log_file: Optional[str]):
    """ Charge / discharge scheduling for EV fleets on a wind microgrid. """
    if verbose:
        get_logger().set_level('debug')
    if log_file:
        click.get_current_context().call_on_close(
            lambda: _dump_log(log_file)
        )


# -----------------------------------------------------------------------------
# generate

@cli.command()
@click.option('--vehicles', default=100, show_default=True,
              help='EV trips per day.')
@click.option('--days', default=1, show_default=True)
@click.option('--seed', default=0, show_default=True)
@click.option('--r-v2g', default=0.5, show_default=True,
              help='Share of V2G participants.')
@click.option('--home-fraction', default=0.5, show_default=True)
@click.option('--arrival-mode', type=click.Choice(['uniform', 'hour']),
              default='uniform', show_default=True,
              help='Quarter within the arrival hour, or on the hour.')
@click.option('--turbine-kw', default=230.0, show_default=True,
              help='Rated power of the synthetic wind profile.')
@click.option('--wind', type=click.Path(), default=None,
              help='Wind CSV (period,kwh) instead of the synthetic trace.')
@click.option('--price', type=click.Path(), default=None,
              help='Price CSV (period,cents_per_kwh) instead of the '
                   'synthetic trace.')
@click.option('--expand-hourly', is_flag=True,
              help='Input CSVs hold hourly rows.')
@click.option('--lambda', 'lambda_', default=1.0, show_default=True)
@click.option('--delta', default=0.25, show_default=True)
@click.option('--out', type=click.Path(), required=True,
              help='Scenario JSON to write.')
@_exit_codes
def generate(vehicles, days, seed, r_v2g, home_fraction, arrival_mode,
             turbine_kw, wind, price, expand_hourly, lambda_, delta, out):
    """ Generate a seeded scenario. """
    config = ScenarioConfig(
        n_vehicles=vehicles, days=days, seed=seed, r_v2g=r_v2g,
        home_fraction=home_fraction, arrival_slot_mode=arrival_mode,
        turbine_kw=turbine_kw,
    )
    by = hourly_factor(config.grid) if expand_hourly else 1
    scenario = make_scenario(
        config,
        wind_kwh=read_trace(wind, WIND_COLUMN, by) if wind else None,
        price_cents_per_kwh=read_trace(price, PRICE_COLUMN, by)
        if price else None,
        lambda_=lambda_, delta=delta,
    )
    _ensure_parent(out)
    io.save_scenario(scenario, out, config)
    log(f'{len(scenario.sessions)} sessions over {scenario.horizon} periods '
        f'written to {out}')


# -----------------------------------------------------------------------------
# scheduling

def _run_options(func):
    options = [
        click.option('--config', 'config_file', type=click.Path(),
                     required=True, help='Scenario JSON.'),
        click.option('--seed', type=int, default=None,
                     help='Seed of the demand history (defaults to the '
                          'scenario seed).'),
        click.option('--out', type=click.Path(), required=True,
                     help='Output directory.'),
        click.option('--degradation', type=click.Choice(['quadratic',
                                                         'linear']),
                     default='quadratic', show_default=True,
                     help='Degradation model in the objective and report.'),
        click.option('--lambda', 'lambda_', type=float, default=None,
                     help='Override the scenario lambda.'),
        click.option('--delta', type=float, default=None,
                     help='Override the scenario delta.'),
        click.option('--node-limit', default=5000, show_default=True),
        click.option('--time-limit', type=float, default=120.0,
                     show_default=True,
                     help='Seconds per MIQP, 0 for none. A solve that hits '
                          'it keeps its incumbent and is timing '
                          'dependent.'),
        click.option('--branching', type=click.Choice(['most-fractional',
                                                       'pseudo-cost']),
                     default='most-fractional', show_default=True),
        click.option('--workers', default=1, show_default=True,
                     help='Parallel node relaxations.'),
        click.option('--record-timings', is_flag=True,
                     help='Keep solve times in diagnostics.jsonl.'),
        click.option('--node-trace', type=click.Path(), default=None,
                     help='Write one line per branch-and-bound node.'),
        click.option('--expand-hourly', is_flag=True,
                     help='The scenario CSVs hold hourly rows.'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _simulate(mode, config_file, seed, out, degradation, lambda_, delta,
              node_limit, time_limit, branching, workers, record_timings,
              node_trace, expand_hourly, forecast='perfect', forecaster=None,
              future_demand=True, train_days=None, dump_problem=None):
    scenario = io.load_scenario(config_file, expand_hourly)
    changes = {k: v for k, v in (('lambda_', lambda_), ('delta', delta))
               if v is not None}
    if changes:
        scenario = scenario.replace(**changes)
    os.makedirs(out, exist_ok=True)
    
    sim_config = SimulationConfig(
        mode=mode,
        forecast=forecast,
        degradation=degradation,
        params=DegradationParams(),
        solver=SolverConfig(node_limit=node_limit,
                            time_limit=time_limit or None,
                            branching_rule=branching, workers=workers),
        use_future_demand=future_demand,
        train_days=train_days,
        record_timings=record_timings,
        dump_problem=dump_problem,
    )
    demand_model = None
    if mode == 'dynamic' and future_demand:
        demand_model = _demand_model(config_file, scenario, seed)
    fc = io.load_forecaster(forecaster) if forecaster else None
    
    lines = []
    trace = (lambda j, t: lines.append(f'{"-" if j is None else j} {t}')) \
        if node_trace else None
    result = run_simulation(scenario, sim_config, fc, demand_model, trace)
    
    io.write_schedule_csv(scenario, result.schedule,
                          os.path.join(out, 'schedule.csv'))
    io.save_report(result.report, os.path.join(out, 'report.json'))
    io.write_report_csv(result.report, os.path.join(out, 'report.csv'))
    io.write_diagnostics(result.diagnostics,
                         os.path.join(out, 'diagnostics.jsonl'))
    if node_trace:
        _ensure_parent(node_trace)
        with open(node_trace, 'w') as f:
            f.write('\n'.join(lines) + ('\n' if lines else ''))
    log(f'{mode} run written to {out}')


def _demand_model(config_file, scenario, seed):
    """ fit on a history drawn like the scenario, with a different seed. """
    config = io.load_scenario_config(config_file)
    if config is None:
        log('no generator config in the scenario, future demand disabled')
        return None
    if seed is not None:
        config = replace(config, seed=seed)
    history = generate_fleet(history_config(config))
    return fit_future_demand_model(history.sessions, scenario.grid,
                                   config.days)


@cli.command()
@_run_options
@click.option('--mode', type=click.Choice(['bau', 'static', 'dynamic']),
              default='static', show_default=True)
@click.option('--forecast', type=click.Choice(['perfect', 'markov']),
              default='perfect', show_default=True)
@click.option('--forecaster', type=click.Path(), default=None,
              help='Forecaster JSON from train-forecast (markov only).')
@click.option('--train-days', type=int, default=None,
              help='Fit the markov forecaster on the first N days only.')
@click.option('--no-future-demand', is_flag=True,
              help='Leave expected future arrivals out of dynamic windows.')
@_exit_codes
def simulate(mode, forecast, forecaster, train_days, no_future_demand,
             **kwargs):
    """ Schedule a scenario and write schedule.csv, report.json,
    report.csv and diagnostics.jsonl. """
    _simulate(mode, forecast=forecast, forecaster=forecaster,
              train_days=train_days, future_demand=not no_future_demand,
              **kwargs)


@cli.command('solve-static')
@_run_options
@click.option('--dump-problem', type=click.Path(), default=None,
              help='Write the standard-form problem (before presolve).')
@_exit_codes
def solve_static(dump_problem, **kwargs):
    """ Day-ahead schedule with every session known in advance. """
    if dump_problem:
        _ensure_parent(dump_problem)
    _simulate('static', dump_problem=dump_problem, **kwargs)


@cli.command('solve-dynamic')
@_run_options
@click.option('--forecast', type=click.Choice(['perfect', 'markov']),
              default='perfect', show_default=True)
@click.option('--forecaster', type=click.Path(), default=None)
@click.option('--train-days', type=int, default=None)
@click.option('--no-future-demand', is_flag=True)
@_exit_codes
def solve_dynamic(forecast, forecaster, train_days, no_future_demand,
                  **kwargs):
    """ Rolling-horizon schedule, re-planned every planning interval. """
    _simulate('dynamic', forecast=forecast, forecaster=forecaster,
              train_days=train_days, future_demand=not no_future_demand,
              **kwargs)


# -----------------------------------------------------------------------------
# forecasting, comparison, sweeps

@cli.command('train-forecast')
@click.option('--wind', type=click.Path(), required=True,
              help='Wind CSV (period,kwh).')
@click.option('--train-days', type=int, default=None,
              help='Train on the first N days, evaluate on the rest.')
@click.option('--states', default=20, show_default=True)
@click.option('--step-periods', default=4, show_default=True,
              help='Periods per chain step.')
@click.option('--periods-per-day', default=96, show_default=True)
@click.option('--expand-hourly', is_flag=True)
@click.option('--out', type=click.Path(), required=True,
              help='Forecaster JSON to write.')
@_exit_codes
def train_forecast(wind, train_days, states, step_periods, periods_per_day,
                   expand_hourly, out):
    """ Fit a Markov wind forecaster. """
    if expand_hourly and periods_per_day % 24:
        raise ConfigError(f'{periods_per_day} periods per day cannot hold '
                          f'hourly rows')
    by = periods_per_day // 24 if expand_hourly else 1
    trace = read_trace(wind, WIND_COLUMN, by)
    test = None
    if train_days:
        trace, test = split_trace(trace, train_days, periods_per_day)
    forecaster = MarkovForecaster.fit(trace, states, step_periods)
    _ensure_parent(out)
    io.save_forecaster(forecaster, out)
    log(f'{forecaster.n_states} states written to {out}')
    if test is not None and len(test) >= 2 * step_periods:
        errors = evaluate_forecaster(forecaster, test)
        table = Table('steps ahead', 'mean abs error (kWh)')
        for k in (1, 2, 4, 8, 12, 24):
            if k <= len(errors):
                table.add_row(str(k), f'{errors[k - 1]:.3f}')
        Console(stderr=True).print(table)


@cli.command()
@click.argument('reports', nargs=-1, type=click.Path(), required=True)
@click.option('--out', type=click.Path(), default=None,
              help='CSV file for the comparison table.')
@_exit_codes
def compare(reports, out):
    """ Compare two or more report.json files of one scenario. """
    loaded = [io.load_report(f) for f in reports]
    try:
        df = compare_reports(loaded, _labels(reports, loaded))
    except ValueError as e:
        raise ConfigError(str(e))
    if out:
        _ensure_parent(out)
        df.to_csv(out, float_format='%.10g')
    _print_frame(df)


def _sweep_run(task) -> dict:
    parameter, value, seed, vehicles, days, mode, r_v2g, node_limit = task
    config = ScenarioConfig(n_vehicles=vehicles, days=days, seed=seed,
                            r_v2g=value if parameter == 'r_v2g' else r_v2g,
                            turbine_kw=2.3 * vehicles)
    weights = {}
    if parameter == 'lambda':
        weights['lambda_'] = value
    elif parameter == 'delta':
        weights['delta'] = value
    scenario = make_scenario(config, **weights)
    demand_model = None
    if mode == 'dynamic':
        history = generate_fleet(history_config(config))
        demand_model = fit_future_demand_model(history.sessions,
                                               scenario.grid, days)
    result = run_simulation(
        scenario,
        SimulationConfig(mode=mode,
                         solver=replace(SimulationConfig.solver,
                                        node_limit=node_limit)),
        demand_model=demand_model,
    )
    return {parameter: value, 'seed': seed, **result.report.metrics()}


@cli.command()
@click.option('--param', 'parameter',
              type=click.Choice(['lambda', 'delta', 'r_v2g']), required=True)
@click.option('--values', required=True,
              help='Comma separated, e.g. 0,0.25,0.5,1')
@click.option('--seeds', default='0,1,2', show_default=True)
@click.option('--vehicles', default=10, show_default=True)
@click.option('--days', default=1, show_default=True)
@click.option('--r-v2g', default=0.5, show_default=True)
@click.option('--mode', type=click.Choice(['bau', 'static', 'dynamic']),
              default='static', show_default=True)
@click.option('--node-limit', default=2000, show_default=True)
@click.option('--jobs', default=1, show_default=True,
              help='Scenario runs in parallel.')
@click.option('--out', type=click.Path(), required=True,
              help='CSV for the seed-averaged sweep table.')
@_exit_codes
def sweep(parameter, values, seeds, vehicles, days, r_v2g, mode, node_limit,
          jobs, out):
    """ Seed-averaged lambda, delta or R_v2g sweep. """
    try:
        values = [float(v) for v in values.split(',')]
        seeds = [int(s) for s in seeds.split(',')]
    except ValueError as e:
        raise ConfigError(f'bad --values / --seeds: {e}')
    tasks = [(parameter, v, s, vehicles, days, mode, r_v2g, node_limit)
             for v in values for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            rows = list(pool.map(_sweep_run, tasks))
    else:
        rows = [_sweep_run(t) for t in tasks]
    df = sweep_table(rows, parameter)
    _ensure_parent(out)
    df.to_csv(out, float_format='%.10g')
    _print_frame(df)


# -----------------------------------------------------------------------------

def _ensure_parent(file: str):
    folder = os.path.dirname(os.path.abspath(file))
    os.makedirs(folder, exist_ok=True)


def _print_frame(df, title: Optional[str] = None):
    table = Table(title=title)
    table.add_column(df.index.name or '')
    for col in df.columns:
        table.add_column(str(col), justify='right')
    for idx, row in df.iterrows():
        table.add_row(str(idx), *('' if v != v else f'{v:.4g}'
                                  for v in row.tolist()))
    Console().print(table)


def _labels(files, reports) -> list:
    """ report labels, qualified by the parent folder when they repeat. """
    labels = [r.label or os.path.splitext(os.path.basename(f))[0]
              for f, r in zip(files, reports)]
    out = []
    for f, label in zip(files, labels):
        if labels.count(label) > 1:
            parent = os.path.basename(os.path.dirname(os.path.abspath(f)))
            label = f'{label}@{parent}'
        while label in out:
            label += "'"
        out.append(label)
    return out


def _dump_log(file: str):
    _ensure_parent(file)
    get_logger().dump(file)
