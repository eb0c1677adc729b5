from dataclasses import dataclass
from dataclasses import field
from typing import Dict
from typing import FrozenSet
from typing import Tuple

import numpy as np

from ..domain import EvSession

__all__ = ['PlannerState']


@dataclass(frozen=True, eq=False)
class PlannerState:
    """
    j: the planning index the state belongs to, `phi` its period.
    sessions: E^j, as originally announced (id -> session).
    soc: level of every session in E^j at `phi`.
    last_rates: (LC, LD) of every session in E^j, the rates of period
        phi - 1.
    committed_x_c, committed_x_d: [session x period] over the scenario,
        filled up to `committed_until` (exclusive) and never rewritten.
    release: first controlled period of every session seen so far.
    below_minimum: the set B of E^j.
    """
    j: int
    phi: int
    sessions: Dict[str, EvSession]
    soc: Dict[str, float]
    last_rates: Dict[str, Tuple[float, float]]
    committed_x_c: np.ndarray
    committed_x_d: np.ndarray
    committed_until: int = 0
    release: Dict[str, int] = field(default_factory=dict)
    below_minimum: FrozenSet[str] = frozenset()
    
    @classmethod
    def initial(cls, n_sessions: int, horizon: int) -> 'PlannerState':
        return cls(
            j=0, phi=0, sessions={}, soc={}, last_rates={},
            committed_x_c=np.zeros((n_sessions, horizon)),
            committed_x_d=np.zeros((n_sessions, horizon)),
        )
    
    @property
    def active_sessions(self) -> Dict[str, EvSession]:
        """ E^j seen from `phi`: each session starts there at its current SOC. """
        return {sid: s.snapshot(self.phi, self.soc[sid])
                for sid, s in sorted(self.sessions.items())}
