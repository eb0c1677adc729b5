from dataclasses import dataclass
from dataclasses import field
from enum import Enum
from typing import Literal
from typing import Optional

import numpy as np

from ..core import ConfigError

__all__ = ['BranchingRule', 'NodeTrace', 'Solution', 'SolveStats',
           'SolveStatus', 'SolverConfig']

BranchingRule = Literal['most-fractional', 'pseudo-cost']


class SolveStatus(str, Enum):
    OPTIMAL = 'optimal'
    GAP_LIMIT = 'gap-limit'
    NODE_LIMIT = 'node-limit'
    TIME_LIMIT = 'time-limit'
    INFEASIBLE = 'infeasible'
    # no incumbent, and some relaxations broke down instead of proving
    # their subtrees empty.
    NUMERICAL_FAILURE = 'numerical-failure'
    UNBOUNDED_GUARD = 'unbounded-guard'


@dataclass(frozen=True)
class SolverConfig:
    """
    args:
        gap_limit: stop as soon as the relative gap drops to this value
            (status 'gap-limit'). None searches until the gap is within
            `relative_gap_tolerance`.
        time_limit: seconds of wall time, None for no limit.
        heuristic_frequency: run the complementarity heuristic at the root
            and at every n-th node (0 disables it).
        workers: nodes whose relaxations are solved concurrently. 1 is the
            deterministic reference.
    """
    relative_gap_tolerance: float = 1e-6
    absolute_feasibility_tolerance: float = 1e-7
    integrality_tolerance: float = 1e-6
    node_limit: int = 10 ** 6
    time_limit: Optional[float] = None
    gap_limit: Optional[float] = None
    qp_max_iterations: int = 100
    branching_rule: BranchingRule = 'most-fractional'
    heuristic_frequency: int = 10
    polish: bool = True
    workers: int = 1
    
    def __post_init__(self):
        for k in ('relative_gap_tolerance', 'absolute_feasibility_tolerance',
                  'integrality_tolerance'):
            if not getattr(self, k) > 0:
                raise ConfigError(f'{k} must be positive')
        if self.node_limit < 1 or self.qp_max_iterations < 1:
            raise ConfigError('node_limit and qp_max_iterations must be '
                              'at least 1')
        if self.time_limit is not None and self.time_limit <= 0:
            raise ConfigError('time_limit must be positive')
        if self.branching_rule not in ('most-fractional', 'pseudo-cost'):
            raise ConfigError(f'unknown branching rule: '
                              f'{self.branching_rule!r}')
        if self.workers < 1 or self.heuristic_frequency < 0:
            raise ConfigError('workers >= 1 and heuristic_frequency >= 0 '
                              'required')


@dataclass(frozen=True)
class NodeTrace:
    id: int
    depth: int
    bound: float
    action: str
    #   'branched', 'integral', 'pruned', 'infeasible', 'failed'
    
    def __str__(self):
        return f'{self.id} {self.depth} {self.bound!r} {self.action}'


@dataclass(frozen=True)
class SolveStats:
    nodes: int = 0
    qp_solves: int = 0
    qp_iterations: int = 0
    heuristic_incumbents: int = 0
    failed_nodes: int = 0
    max_depth: int = 0
    seconds: float = 0.0


@dataclass(frozen=True, eq=False)
class Solution:
    """
    `x` lives in the column space of the solved problem (None without an
    incumbent). `gap` is (objective - bound) / max(|objective|, 1).
    """
    status: SolveStatus
    x: Optional[np.ndarray]
    objective: float
    bound: float
    gap: float
    nodes: int
    stats: SolveStats = field(default_factory=SolveStats)
    
    @property
    def has_incumbent(self) -> bool:
        return self.x is not None
    
    @property
    def is_optimal(self) -> bool:
        return self.status is SolveStatus.OPTIMAL
