"""
charge / discharge scheduling of aggregated EV fleets in a wind-primary
microgrid: day-ahead MIQP, rolling-horizon re-planning and a
business-as-usual baseline.
"""
from .baseline import bau_schedule
from .core import *
from .degradation import DegradationParams
from .domain import *
from .forecast import MarkovForecaster
from .forecast import PerfectForecaster
from .metrics import Report
from .metrics import compare
from .metrics import objective_value
from .metrics import report
from .model import build_dynamic
from .model import build_static
from .model import presolve
from .planner import FutureDemandModel
from .planner import RollingHorizonPlanner
from .planner import estimate_future_demand
from .simulation import SimulationConfig
from .simulation import run_simulation
from .solver import SolverConfig
from .solver import solve
from .solver import solve_qp

__version__ = '0.1.0'
