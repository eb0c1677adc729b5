from .dynamics import charge_step
from .dynamics import discharge_step
from .dynamics import max_energy_per_period
from .dynamics import soc_trajectory
from .dynamics import t_min
from .fleet import ENERGY_TOL
from .fleet import EvSession
from .fleet import EvSpec
from .fleet import Mode
from .grid import TimeGrid
from .scenario import Scenario
from .scenario import Schedule
from .scenario import net_demand
from .validation import Violation
from .validation import validate_schedule
