from .builder import build_dynamic
from .builder import build_static
from .dump import dump_problem
from .dump import format_problem
from .extract import extract_schedule
from .extract import extract_window_rates
from .presolve import presolve
from .problem import Key
from .problem import MiqpProblem
from .problem import ModelLayout
from .problem import ModelStats
from .problem import VariableDirectory
