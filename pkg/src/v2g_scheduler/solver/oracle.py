"""
exhaustive reference for small problems: solve the QP of every binary
assignment and keep the best.
"""
from dataclasses import replace
from itertools import product
from typing import Optional
from typing import Tuple

import numpy as np

from .config import SolverConfig
from .qp import solve_qp
from ..model import MiqpProblem

__all__ = ['enumerate_binaries']


def enumerate_binaries(
        problem: MiqpProblem,
        config: SolverConfig = SolverConfig(),
        max_binaries: int = 12,
) -> Optional[Tuple[np.ndarray, float]]:
    """
    returns:
        (point, objective) of the best assignment (the first one in
        lexicographic order on ties), None if every assignment is
        infeasible.
    
    raises:
        ValueError: more than `max_binaries` binaries.
    """
    k = len(problem.binaries)
    if k > max_binaries:
        raise ValueError(f'{k} binaries, enumeration is capped at '
                         f'{max_binaries}')
    config = replace(config, absolute_feasibility_tolerance=1e-9,
                     qp_max_iterations=max(config.qp_max_iterations, 200))
    best = None
    for values in product((0.0, 1.0), repeat=k):
        lb, ub = problem.lb.copy(), problem.ub.copy()
        lb[problem.binaries] = values
        ub[problem.binaries] = values
        if np.any(lb > problem.ub) or np.any(ub < problem.lb):
            continue
        result = solve_qp(problem, config, lb=lb, ub=ub)
        if result.ok and (best is None or result.objective < best[1]):
            best = (result.x, result.objective)
    return best
