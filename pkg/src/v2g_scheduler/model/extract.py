from typing import Dict
from typing import Tuple

import numpy as np

from .problem import MiqpProblem
from ..domain import Scenario
from ..domain import Schedule

__all__ = ['extract_schedule', 'extract_window_rates']


def extract_window_rates(
        problem: MiqpProblem, x: np.ndarray
) -> Dict[str, Tuple[np.ndarray, np.ndarray]]:
    """
    returns:
        {session_id: (x_c, x_d)}, each array covering the window periods
        (zero outside the session's plug period).
    """
    lay = problem.layout
    out = {}
    for s in lay.sessions:
        xc, xd = np.zeros(len(lay.periods)), np.zeros(len(lay.periods))
        for k, t in enumerate(lay.periods):
            if s.plugged_at(t):
                xc[k] = problem.value(x, 'x_c', s.id, t)
                if s.is_v2g:
                    xd[k] = problem.value(x, 'x_d', s.id, t)
        out[s.id] = (np.clip(xc, 0, 1), np.clip(xd, 0, 1))
    return out


def extract_schedule(problem: MiqpProblem, x: np.ndarray,
                     scenario: Scenario) -> Schedule:
    """ a whole-horizon schedule from a point of a static problem. """
    lay = problem.layout
    index = scenario.session_index
    xc = np.zeros((len(scenario.sessions), scenario.horizon))
    xd = np.zeros_like(xc)
    for sid, (rc, rd) in extract_window_rates(problem, x).items():
        xc[index[sid], lay.start:lay.end] = rc
        xd[index[sid], lay.start:lay.end] = rd
    return Schedule.from_rates(scenario, xc, xd)
