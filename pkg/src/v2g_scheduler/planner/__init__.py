from .demand import FutureDemandModel
from .demand import estimate_future_demand
from .rolling import PlannerConfig
from .rolling import PlannerResult
from .rolling import RollingHorizonPlanner
from .rolling import StepDiagnostics
from .state import PlannerState
