"""
best-first branch and bound over the binaries of a convex MIQP.

a node is a set of binary fixings. its bound is the larger of the parent's
bound and its own relaxation optimum, so bounds never decrease down the
tree. ties on the bound go to the lower node id.

the direction binaries (y_c, y_d) only matter where the relaxation charges
and discharges one vehicle at once. a node whose remaining fractional
binaries all sit on pairs that are already complementary is closed by
fixing them and confirming the point, not by branching.
"""
import heapq
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from dataclasses import field
from time import monotonic
from typing import Dict
from typing import List
from typing import Optional
from typing import Union

import numpy as np

from .config import NodeTrace
from .config import Solution
from .config import SolveStats
from .config import SolveStatus
from .config import SolverConfig
from .heuristic import complementarity_heuristic
from .heuristic import round_binaries
from .qp import QpResult
from .qp import solve_qp
from ..core import SignalSupport
from ..core import SolverError
from ..core import logd
from ..core import logw
from ..core import signal
from ..model import MiqpProblem

__all__ = ['BranchAndBound', 'solve']


@dataclass
class _Node:
    id: int
    depth: int
    bound: float
    fixings: Dict[int, float] = field(default_factory=dict)
    warm: Union[np.ndarray, QpResult, None] = None
    # (column, fractional part moved) of the branching that made this node.
    branch: Optional[tuple] = None
    parent_objective: float = -np.inf


class BranchAndBound(SignalSupport):
    node_processed = signal(NodeTrace)
    incumbent_updated = signal(float)
    
    def __init__(self, problem: MiqpProblem,
                 config: SolverConfig = SolverConfig()):
        super().__init__()
        self.problem = problem
        self.config = config
        self._open = []  # heap of (bound, id, node)
        self._next_id = 0
        self._incumbent = None  # type: Optional[np.ndarray]
        self._incumbent_obj = np.inf
        self._lost_bounds = []  # type: List[float]
        self._pseudo = {}  # col -> [down_sum, down_n, up_sum, up_n]
        self._stats = dict(nodes=0, qp_solves=0, qp_iterations=0,
                           heuristic_incumbents=0, failed_nodes=0,
                           max_depth=0)
        self._is_z = np.zeros(problem.n, dtype=bool)
        self._pairs = {}  # y column -> (session_id, period)
        for col in problem.binaries:
            key = problem.directory[col]
            self._is_z[col] = key.role == 'z'
            if key.role in ('y_c', 'y_d'):
                self._pairs[col] = (key.session_id, key.period)
    
    def solve(self) -> Solution:
        start = monotonic()
        problem, cfg = self.problem, self.config
        if problem.n == 0:
            return self._empty_solution(start)
        
        self._push(_Node(self._new_id(), 0, -np.inf))
        status = None
        while self._open:
            if self._stats['nodes'] >= cfg.node_limit:
                status = SolveStatus.NODE_LIMIT
                break
            if cfg.time_limit is not None and \
                    monotonic() - start > cfg.time_limit:
                status = SolveStatus.TIME_LIMIT
                break
            if cfg.gap_limit is not None and self._incumbent is not None \
                    and self._gap(self._global_bound()) <= cfg.gap_limit:
                status = SolveStatus.GAP_LIMIT
                break
            batch = self._pop_batch()
            if not batch:
                break
            for node, result in zip(batch, self._solve_batch(batch)):
                unbounded = self._process(node, result)
                if unbounded:
                    return self._finish(SolveStatus.UNBOUNDED_GUARD, start)
        
        if status is None:
            if self._incumbent is None and self._stats['failed_nodes']:
                status = SolveStatus.NUMERICAL_FAILURE
            elif self._incumbent is None:
                status = SolveStatus.INFEASIBLE
            elif self._gap(self._global_bound()) <= \
                    cfg.relative_gap_tolerance:
                status = SolveStatus.OPTIMAL
            else:
                # some nodes failed and their subtrees stay unexplored.
                status = SolveStatus.GAP_LIMIT
        return self._finish(status, start)
    
    # -------------------------------------------------------------------------
    
    def _new_id(self) -> int:
        self._next_id += 1
        return self._next_id - 1
    
    def _push(self, node: _Node):
        heapq.heappush(self._open, (node.bound, node.id, node))
    
    def _cutoff(self) -> float:
        inc = self._incumbent_obj
        return inc - max(self.config.relative_gap_tolerance * abs(inc), 1e-9)
    
    def _pop_batch(self) -> List[_Node]:
        out = []
        while self._open and len(out) < self.config.workers:
            bound, _, node = heapq.heappop(self._open)
            if bound >= self._cutoff():
                self._trace(node, 'pruned')
                continue
            out.append(node)
        return out
    
    def _bounds(self, node: _Node):
        lb, ub = self.problem.lb.copy(), self.problem.ub.copy()
        for col, value in node.fixings.items():
            lb[col] = ub[col] = value
        return lb, ub
    
    def _solve_node(self, node: _Node) -> Optional[QpResult]:
        lb, ub = self._bounds(node)
        try:
            return solve_qp(self.problem, self.config, node.warm, lb, ub)
        except SolverError as e:
            logw(f'node {node.id}: relaxation failed ({e}), subtree left '
                 f'unexplored')
            return None
    
    def _solve_batch(self, batch: List[_Node]) -> List[Optional[QpResult]]:
        if len(batch) == 1 or self.config.workers == 1:
            return [self._solve_node(n) for n in batch]
        with ThreadPoolExecutor(self.config.workers) as pool:
            return list(pool.map(self._solve_node, batch))
    
    def _process(self, node: _Node, result: Optional[QpResult]) -> bool:
        """ returns True when the relaxation is unbounded. """
        stats = self._stats
        stats['nodes'] += 1
        stats['max_depth'] = max(stats['max_depth'], node.depth)
        if result is None:
            stats['failed_nodes'] += 1
            self._lost_bounds.append(node.bound)
            self._trace(node, 'failed')
            return False
        stats['qp_solves'] += 1
        stats['qp_iterations'] += result.iterations
        if result.status == 'unbounded':
            self._trace(node, 'unbounded')
            return True
        if not result.ok:
            self._trace(node, 'infeasible')
            return False
        
        self._learn(node, result.objective)
        node.bound = max(node.bound, result.objective)
        if node.bound >= self._cutoff():
            self._trace(node, 'pruned')
            return False
        
        x = result.x
        fractional = self._fractional(x)
        open_cols = [c for c in fractional if not self._settled(x, c)]
        if not open_cols:
            self._try_incumbent(x, node)
            if not fractional or node.bound >= self._cutoff():
                self._trace(node, 'integral')
                return False
            open_cols = fractional
        
        freq = self.config.heuristic_frequency
        if freq and node.id % freq == 0:
            lb, ub = self._bounds(node)
            found = complementarity_heuristic(self.problem, x, self.config,
                                              lb, ub)
            if found and self._update(*found):
                stats['heuristic_incumbents'] += 1
            if node.bound >= self._cutoff():
                self._trace(node, 'pruned')
                return False
        
        col = self._select(x, open_cols)
        frac = x[col] - np.floor(x[col])
        # the child on the rounding side first.
        for value in ((1.0, 0.0) if frac >= 0.5 else (0.0, 1.0)):
            child = _Node(
                id=self._new_id(),
                depth=node.depth + 1,
                bound=node.bound,
                fixings={**node.fixings, col: value},
                warm=result,
                branch=(col, value, frac if value == 0 else 1 - frac),
                parent_objective=result.objective,
            )
            self._push(child)
        self._trace(node, 'branched')
        return False
    
    def _fractional(self, x) -> List[int]:
        tol = self.config.integrality_tolerance
        return [int(c) for c in self.problem.binaries
                if abs(x[c] - np.round(x[c])) > tol]
    
    def _settled(self, x, col: int) -> bool:
        """ y column whose charge/discharge pair is already complementary. """
        if col not in self._pairs:
            return False
        sid, t = self._pairs[col]
        xc = self.problem.value(x, 'x_c', sid, t)
        xd = self.problem.value(x, 'x_d', sid, t)
        return min(xc, xd) <= self.config.integrality_tolerance
    
    def _select(self, x, fractional: List[int]) -> int:
        # z columns decide whole constraint groups.
        z_cols = [c for c in fractional if self._is_z[c]]
        candidates = z_cols or fractional
        if self.config.branching_rule == 'pseudo-cost':
            return max(candidates, key=lambda c: (self._score(c, x[c]), -c))
        return min(candidates, key=lambda c: (abs(x[c] - 0.5), c))
    
    def _score(self, col: int, value: float) -> float:
        known = list(self._pseudo.values())
        
        def average(i):
            vals = [p[i] / p[i + 1] for p in known if p[i + 1]]
            return float(np.mean(vals)) if vals else 1.0
        p = self._pseudo.get(col)
        down = p[0] / p[1] if p and p[1] else average(0)
        up = p[2] / p[3] if p and p[3] else average(2)
        f = value - np.floor(value)
        return max(down * f, 1e-6) * max(up * (1 - f), 1e-6)
    
    def _learn(self, node: _Node, objective: float):
        if node.branch is None or not np.isfinite(node.parent_objective):
            return
        col, value, moved = node.branch
        if moved <= 0:
            return
        gain = max(objective - node.parent_objective, 0.0) / moved
        p = self._pseudo.setdefault(col, [0.0, 0, 0.0, 0])
        i = 0 if value == 0 else 2
        p[i] += gain
        p[i + 1] += 1
    
    def _try_incumbent(self, x: np.ndarray, node: _Node):
        """ snap the binaries and confirm the point with them fixed. """
        lb, ub = self._bounds(node)
        lb, ub = round_binaries(self.problem, x, lb, ub)
        try:
            confirmed = solve_qp(self.problem, self.config, x, lb, ub)
        except SolverError as e:
            logw(f'node {node.id}: could not confirm integral point ({e})')
            return
        if confirmed.ok:
            self._update(confirmed.x, confirmed.objective)
    
    def _update(self, x: np.ndarray, objective: float) -> bool:
        if objective < self._incumbent_obj:
            self._incumbent, self._incumbent_obj = x, objective
            logd(f'incumbent {objective:.6f}')
            self.incumbent_updated.emit(objective)
            return True
        return False
    
    def _global_bound(self) -> float:
        bounds = [self._incumbent_obj, *self._lost_bounds]
        if self._open:
            bounds.append(self._open[0][0])
        return min(bounds)
    
    def _gap(self, bound: float) -> float:
        inc = self._incumbent_obj
        if not np.isfinite(inc):
            return np.inf
        if not np.isfinite(bound):
            return np.inf
        return max(inc - bound, 0.0) / max(abs(inc), 1.0)
    
    def _trace(self, node: _Node, action: str):
        self.node_processed.emit(
            NodeTrace(node.id, node.depth, float(node.bound), action)
        )
    
    def _finish(self, status: SolveStatus, start: float) -> Solution:
        bound = self._global_bound()
        if status is SolveStatus.INFEASIBLE:
            bound = np.inf
        stats = SolveStats(seconds=monotonic() - start, **self._stats)
        logd(f'branch and bound: {status.value}, {stats.nodes} nodes, '
             f'objective {self._incumbent_obj}')
        return Solution(
            status=status,
            x=self._incumbent,
            objective=self._incumbent_obj,
            bound=bound,
            gap=self._gap(bound) if self._incumbent is not None else np.inf,
            nodes=stats.nodes,
            stats=stats,
        )
    
    def _empty_solution(self, start: float) -> Solution:
        x = np.zeros(0)
        problem = self.problem
        if problem.max_violation(x) > \
                self.config.absolute_feasibility_tolerance:
            self._incumbent_obj = np.inf
            return self._finish(SolveStatus.INFEASIBLE, start)
        self._incumbent, self._incumbent_obj = x, problem.constant
        return self._finish(SolveStatus.OPTIMAL, start)


def solve(problem: MiqpProblem,
          config: SolverConfig = SolverConfig()) -> Solution:
    return BranchAndBound(problem, config).solve()
