from .branch_bound import BranchAndBound
from .branch_bound import solve
from .config import BranchingRule
from .config import NodeTrace
from .config import Solution
from .config import SolveStats
from .config import SolveStatus
from .config import SolverConfig
from .heuristic import complementarity_heuristic
from .heuristic import round_binaries
from .oracle import enumerate_binaries
from .qp import QpDuals
from .qp import QpResult
from .qp import UNBOUNDED_GUARD
from .qp import solve_qp
