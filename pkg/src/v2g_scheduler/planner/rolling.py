"""
hourly re-planning over the fleet.

at planning time j (period phi_j) the planner takes the vehicles that
arrived since the last planning time, carries over those still plugged in,
solves the window problem up to the last departure and commits the rates
of [phi_j, phi_{j+1}) only. later steps never touch committed periods.
"""
from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace
from time import monotonic
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np

from .demand import FutureDemandModel
from .demand import estimate_future_demand
from .state import PlannerState
from ..core import PlannerStepError
from ..core import SignalSupport
from ..core import SolverError
from ..core import log
from ..core import logd
from ..core import logw
from ..core import signal
from ..degradation import DegradationModel
from ..degradation import DegradationParams
from ..domain import EvSession
from ..domain import Scenario
from ..domain import Schedule
from ..domain import soc_trajectory
from ..forecast import Forecaster
from ..forecast import PerfectForecaster
from ..model import build_dynamic
from ..model import extract_window_rates
from ..model import presolve
from ..solver import BranchAndBound
from ..solver import NodeTrace
from ..solver import SolverConfig

__all__ = ['PlannerConfig', 'PlannerResult', 'RollingHorizonPlanner',
           'StepDiagnostics']

Rates = Dict[str, Tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class PlannerConfig:
    solver: SolverConfig = SolverConfig()
    degradation: DegradationModel = 'quadratic'
    params: DegradationParams = DegradationParams()
    use_future_demand: bool = True
    presolve: bool = True


@dataclass(frozen=True)
class StepDiagnostics:
    j: int
    phi: int
    active_sessions: int
    window_length: int
    status: str
    objective: float
    bound: float
    gap: float
    nodes: int
    variables: int
    binaries: int
    solve_seconds: Optional[float] = None
    
    def to_dict(self, record_timings: bool = False) -> dict:
        out = asdict(self)
        if not record_timings:
            out.pop('solve_seconds')
        return out


@dataclass(frozen=True, eq=False)
class PlannerResult:
    schedule: Schedule
    diagnostics: List[StepDiagnostics]
    release_times: Dict[str, int] = field(default_factory=dict)


class RollingHorizonPlanner(SignalSupport):
    step_committed = signal(StepDiagnostics)
    node_processed = signal(int, NodeTrace)
    
    def __init__(
            self,
            scenario: Scenario,
            wind_forecaster: Forecaster = None,
            price_forecaster: Forecaster = None,
            demand_model: FutureDemandModel = None,
            config: PlannerConfig = PlannerConfig(),
    ):
        super().__init__()
        self.scenario = scenario
        self.wind_forecaster = wind_forecaster or PerfectForecaster()
        self.price_forecaster = price_forecaster or PerfectForecaster()
        self.demand_model = demand_model
        self.config = config
        self._index = scenario.session_index
    
    def new_state(self) -> PlannerState:
        return PlannerState.initial(len(self.scenario.sessions),
                                    self.scenario.horizon)
    
    def arrivals(self, j: int) -> List[EvSession]:
        """ sessions with t_arr in (phi_{j-1}, phi_j]. """
        grid = self.scenario.grid
        return [s for s in self.scenario.sessions
                if grid.planning_index(s.t_arr) == j]
    
    def run(self) -> PlannerResult:
        scenario = self.scenario
        state = self.new_state()
        diagnostics = []
        self.step_committed.connect(diagnostics.append)
        try:
            for j in scenario.grid.planning_times:
                state, _ = self.step(state, self.arrivals(j))
        finally:
            self.step_committed.disconnect(diagnostics.append)
        
        release = dict(state.release)
        for s in scenario.sessions:
            if s.id not in release:
                logw(f'session {s.id} arrives after the last planning time, '
                     f'left uncontrolled')
                release[s.id] = s.t_dep
        schedule = Schedule.from_rates(scenario, state.committed_x_c,
                                       state.committed_x_d)
        log(f'rolling horizon: {len(diagnostics)} steps solved')
        return PlannerResult(schedule, diagnostics, release)
    
    def step(
            self,
            state: PlannerState,
            new_arrivals: Sequence[EvSession],
            wind_forecast: Sequence[float] = None,
            price: Sequence[float] = None,
    ) -> Tuple[PlannerState, Rates]:
        """
        args:
            wind_forecast, price: per-period values over the window; by
                default taken from the planner's forecasters.
        
        returns:
            (state at j + 1, {session_id: (x_c, x_d)} committed over
            [phi_j, phi_{j+1})).
        
        raises:
            PlannerStepError: the window problem has no solution.
        """
        scenario, grid = self.scenario, self.scenario.grid
        j = state.j
        phi = grid.phi(j)
        nxt = min(grid.phi(j + 1), scenario.horizon)
        
        sessions, soc = dict(state.sessions), dict(state.soc)
        last, release = dict(state.last_rates), dict(state.release)
        for s in new_arrivals:
            if s.t_dep <= phi:
                logw(f'session {s.id} leaves at t={s.t_dep} before planning '
                     f'time t={phi}, left uncontrolled')
                release[s.id] = s.t_dep
                continue
            sessions[s.id] = s
            soc[s.id] = s.soc_init_kwh
            last[s.id] = (0.0, 0.0)
            release[s.id] = phi
        view = replace(state, phi=phi, sessions=sessions, soc=soc,
                       last_rates=last, release=release)
        active = view.active_sessions
        view = replace(view, below_minimum=frozenset(
            sid for sid, s in active.items() if s.below_minimum
        ))
        if not sessions:
            return self._advance(view, {}, nxt), {}
        
        end = max(s.t_dep for s in sessions.values())
        window = (phi, end)
        wind = self.wind_forecaster.window(scenario.wind_kwh, phi, end) \
            if wind_forecast is None else np.asarray(wind_forecast, float)
        prices = self.price_forecaster.window(
            scenario.price_cents_per_kwh, phi, end
        ) if price is None else np.asarray(price, float)
        if self.demand_model is not None and self.config.use_future_demand:
            d_f = estimate_future_demand(self.demand_model, j, window, grid)
            # arrivals after phi_j are first scheduled at phi_{j+1}.
            d_f[:nxt - phi] = 0.0
        else:
            d_f = np.zeros(end - phi)
        
        cfg = self.config
        problem = build_dynamic(view, window, wind, prices, d_f, scenario,
                                cfg.params, cfg.degradation)
        if cfg.presolve:
            problem = presolve(problem)
        solver = BranchAndBound(problem, cfg.solver)
        
        def forward(trace):
            self.node_processed.emit(j, trace)
        
        solver.node_processed.connect(forward)
        started = monotonic()
        try:
            solution = solver.solve()
        except SolverError as e:
            raise PlannerStepError(j, str(e)) from e
        finally:
            solver.node_processed.disconnect(forward)
        seconds = monotonic() - started
        if not solution.has_incumbent:
            raise PlannerStepError(j, f'solver status '
                                      f'{solution.status.value}')
        if not solution.is_optimal:
            logw(f'step {j}: accepting {solution.status.value} incumbent, '
                 f'gap {solution.gap:.2e}')
        
        rates = extract_window_rates(problem, solution.x)
        committed = {sid: (rc[:nxt - phi], rd[:nxt - phi])
                     for sid, (rc, rd) in rates.items()}
        next_state = self._advance(view, committed, nxt)
        
        stats = problem.stats()
        diag = StepDiagnostics(
            j=j, phi=phi,
            active_sessions=len(sessions),
            window_length=end - phi,
            status=solution.status.value,
            objective=float(solution.objective),
            bound=float(solution.bound),
            gap=float(solution.gap),
            nodes=solution.nodes,
            variables=stats.variables,
            binaries=stats.binaries,
            solve_seconds=seconds,
        )
        logd(f'step {j}: {len(sessions)} sessions, window {window}, '
             f'objective {diag.objective:.4f}')
        self.step_committed.emit(diag)
        return next_state, committed
    
    def _advance(self, view: PlannerState, committed: Rates,
                 nxt: int) -> PlannerState:
        """ write the committed rates and roll SOC and LC / LD forward. """
        grid, phi = self.scenario.grid, view.phi
        if view.committed_until > phi:
            raise RuntimeError(f'periods before {view.committed_until} are '
                               f'already committed')
        x_c, x_d = view.committed_x_c.copy(), view.committed_x_d.copy()
        soc, last = {}, {}
        active = view.active_sessions
        for sid, s in view.sessions.items():
            rc, rd = committed.get(sid, (np.zeros(0), np.zeros(0)))
            n = max(min(nxt, s.t_dep) - phi, 0)
            rc, rd = rc[:n], rd[:n]
            row = self._index[sid]
            x_c[row, phi:phi + len(rc)] = rc
            x_d[row, phi:phi + len(rd)] = rd
            if s.t_dep > nxt:
                snap = active[sid]
                rc = np.pad(rc, (0, n - len(rc)))
                rd = np.pad(rd, (0, n - len(rd)))
                soc[sid] = float(soc_trajectory(snap, rc, rd, grid)[-1])
                last[sid] = (float(rc[-1]), float(rd[-1])) if n else \
                    view.last_rates[sid]
        carried = {sid: s for sid, s in view.sessions.items()
                   if s.t_dep > nxt}
        return PlannerState(
            j=view.j + 1,
            phi=nxt,
            sessions=carried,
            soc=soc,
            last_rates=last,
            committed_x_c=x_c,
            committed_x_d=x_d,
            committed_until=nxt,
            release=view.release,
            below_minimum=view.below_minimum,
        )
