from typing import Optional
from typing import Tuple

import numpy as np

from .config import SolverConfig
from .qp import solve_qp
from ..core import SolverError
from ..core import logd
from ..model import MiqpProblem

__all__ = ['complementarity_heuristic', 'round_binaries']


def round_binaries(problem: MiqpProblem, x: np.ndarray,
                   lb: np.ndarray = None,
                   ub: np.ndarray = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    node bounds with every binary fixed: each (y_c, y_d) pair blocks the
    weaker of charge and discharge, other binaries go to the nearest value.
    binaries already fixed by the node keep their value.
    
    returns:
        (lb, ub) copies.
    """
    lb = (problem.lb if lb is None else lb).copy()
    ub = (problem.ub if ub is None else ub).copy()
    d = problem.directory
    decided = {}
    for col in problem.binaries:
        key = d[col]
        if key.role != 'y_c':
            continue
        yd = d.col('y_d', key.session_id, key.period)
        xc = problem.value(x, 'x_c', key.session_id, key.period)
        xd = problem.value(x, 'x_d', key.session_id, key.period)
        # y_c = 1 blocks charging, y_d = 1 blocks discharging.
        if ub[col] - lb[col] <= 0:
            decided[col] = lb[col]
        elif yd is not None and ub[yd] - lb[yd] <= 0:
            decided[col] = 1.0 - lb[yd]
        else:
            decided[col] = 0.0 if xc >= xd else 1.0
        if yd is not None:
            decided[yd] = 1.0 - decided[col]
    for col in problem.binaries:
        if ub[col] - lb[col] <= 0:
            continue
        value = decided.get(col, float(np.round(x[col])))
        value = min(max(value, lb[col]), ub[col])
        lb[col] = ub[col] = value
    return lb, ub


def complementarity_heuristic(
        problem: MiqpProblem,
        x: np.ndarray,
        config: SolverConfig = SolverConfig(),
        lb: np.ndarray = None,
        ub: np.ndarray = None,
) -> Optional[Tuple[np.ndarray, float]]:
    """
    turn a relaxation point into an incumbent: where a vehicle both charges
    and discharges, keep the larger rate and block the other, then repair
    SOC feasibility by re-solving with all binaries fixed.
    
    returns:
        (point, objective), or None when the repaired problem is
        infeasible or the re-solve fails.
    """
    node_lb, node_ub = round_binaries(problem, x, lb, ub)
    try:
        result = solve_qp(problem, config, warm_start=x, lb=node_lb,
                          ub=node_ub)
    except SolverError as e:
        logd(f'heuristic: re-solve failed ({e})')
        return None
    if not result.ok:
        return None
    return result.x, result.objective
