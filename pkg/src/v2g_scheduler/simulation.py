"""
one scheduling run end to end: schedule the scenario in the chosen mode,
validate the result and report on it.
"""
from dataclasses import dataclass
from dataclasses import field
from typing import Dict
from typing import List
from typing import Literal
from typing import Optional

from .baseline import bau_schedule
from .core import ConfigError
from .core import SolverError
from .core import log
from .core import logw
from .degradation import DegradationModel
from .degradation import DegradationParams
from .domain import Scenario
from .domain import Schedule
from .domain import Violation
from .domain import validate_schedule
from .forecast import Forecaster
from .forecast import MarkovForecaster
from .forecast import split_trace
from .metrics import Report
from .metrics import objective_value
from .metrics import report
from .model import build_static
from .model import dump_problem
from .model import extract_schedule
from .model import presolve
from .planner import FutureDemandModel
from .planner import PlannerConfig
from .planner import RollingHorizonPlanner
from .solver import BranchAndBound
from .solver import NodeTrace
from .solver import SolverConfig

__all__ = ['SimulationConfig', 'SimulationResult', 'run_simulation']

Mode = Literal['bau', 'static', 'dynamic']


@dataclass(frozen=True)
class SimulationConfig:
    """
    args:
        forecast: wind forecast of dynamic runs. 'markov' uses the given
            forecaster, or fits one on the scenario's own trace (its first
            `train_days` days when set).
        record_timings: keep solve times in the diagnostics (they differ
            between otherwise identical runs).
    """
    mode: Mode = 'static'
    forecast: Literal['perfect', 'markov'] = 'perfect'
    degradation: DegradationModel = 'quadratic'
    params: DegradationParams = DegradationParams()
    solver: SolverConfig = SolverConfig(node_limit=5000, time_limit=120.0)
    use_future_demand: bool = True
    train_days: Optional[int] = None
    markov_states: int = 20
    record_timings: bool = False
    dump_problem: Optional[str] = None
    
    def __post_init__(self):
        if self.mode not in ('bau', 'static', 'dynamic'):
            raise ConfigError(f'unknown mode: {self.mode!r}')
        if self.forecast not in ('perfect', 'markov'):
            raise ConfigError(f'unknown forecast: {self.forecast!r}')
        if self.degradation not in ('quadratic', 'linear'):
            raise ConfigError(f'unknown degradation model: '
                              f'{self.degradation!r}')


@dataclass(frozen=True, eq=False)
class SimulationResult:
    schedule: Schedule
    report: Report
    objective: float
    diagnostics: List[dict] = field(default_factory=list)
    release_times: Dict[str, int] = field(default_factory=dict)
    violations: List[Violation] = field(default_factory=list)


def run_simulation(
        scenario: Scenario,
        config: SimulationConfig = SimulationConfig(),
        forecaster: Forecaster = None,
        demand_model: FutureDemandModel = None,
        node_trace=None,
) -> SimulationResult:
    """
    args:
        node_trace: optional callback receiving (j, NodeTrace) for every
            branch-and-bound node (j is None in static runs).
    
    raises:
        SolverError: no schedule could be found.
    """
    diagnostics, release = [], {}
    if config.mode == 'bau':
        schedule = bau_schedule(scenario)
    elif config.mode == 'static':
        schedule, record = _solve_static(scenario, config, node_trace)
        diagnostics.append(record)
    else:
        planner = RollingHorizonPlanner(
            scenario,
            wind_forecaster=_wind_forecaster(scenario, config, forecaster),
            demand_model=demand_model,
            config=PlannerConfig(
                solver=config.solver,
                degradation=config.degradation,
                params=config.params,
                use_future_demand=config.use_future_demand,
            ),
        )
        if node_trace is not None:
            planner.node_processed.connect(node_trace)
        try:
            result = planner.run()
        finally:
            if node_trace is not None:
                planner.node_processed.disconnect(node_trace)
        schedule, release = result.schedule, result.release_times
        diagnostics = [d.to_dict(config.record_timings)
                       for d in result.diagnostics]
    
    violations = validate_schedule(scenario, schedule, release or None)
    for v in violations:
        logw(f'{config.mode} schedule violates: {v}')
    rep = report(scenario, schedule, config.degradation, config.params,
                 label=config.mode)
    objective = objective_value(scenario, schedule, config.degradation,
                                config.params)
    log(f'{config.mode}: total cost {rep.total_cost_cents:.2f} cents, '
        f'wind utilization {rep.wind_utilization_pct}')
    return SimulationResult(schedule, rep, objective, diagnostics, release,
                            violations)


def _solve_static(scenario, config, node_trace):
    problem = build_static(scenario, config.params, config.degradation)
    if config.dump_problem:
        dump_problem(problem, config.dump_problem)
    problem = presolve(problem)
    solver = BranchAndBound(problem, config.solver)
    
    def forward(trace: NodeTrace):
        node_trace(None, trace)
    
    if node_trace is not None:
        solver.node_processed.connect(forward)
    try:
        solution = solver.solve()
    finally:
        solver.node_processed.disconnect(forward)
    if not solution.has_incumbent:
        raise SolverError(f'static problem: solver status '
                          f'{solution.status.value}')
    if not solution.is_optimal:
        logw(f'static problem: accepting {solution.status.value} '
             f'incumbent, gap {solution.gap:.2e}')
    stats = problem.stats()
    record = {
        'j': None,
        'phi': 0,
        'active_sessions': len(scenario.sessions),
        'window_length': scenario.horizon,
        'status': solution.status.value,
        'objective': float(solution.objective),
        'bound': float(solution.bound),
        'gap': float(solution.gap),
        'nodes': solution.nodes,
        'variables': stats.variables,
        'binaries': stats.binaries,
    }
    if config.record_timings:
        record['solve_seconds'] = solution.stats.seconds
    return extract_schedule(problem, solution.x, scenario), record


def _wind_forecaster(scenario, config, forecaster):
    if config.forecast == 'perfect':
        return None
    if forecaster is not None:
        return forecaster
    trace = scenario.wind_kwh
    if config.train_days:
        trace, _ = split_trace(trace, config.train_days,
                               scenario.grid.periods_per_day)
    return MarkovForecaster.fit(trace, config.markov_states,
                                scenario.grid.periods_per_interval)
