from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace
from typing import Dict
from typing import FrozenSet
from typing import Iterator
from typing import List
from typing import NamedTuple
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np
from scipy import sparse

from ..domain import EvSession
from ..domain import TimeGrid

__all__ = ['Key', 'MiqpProblem', 'ModelLayout', 'ModelStats',
           'VariableDirectory']

ROLES = ('x_c', 'x_d', 'soc', 'z', 'y_c', 'y_d', 'g', 'omega',
         'x_c_prev', 'x_d_prev')


class Key(NamedTuple):
    role: str
    session_id: Optional[str] = None
    period: Optional[int] = None
    
    def __str__(self):
        args = ','.join(str(x) for x in (self.session_id, self.period)
                        if x is not None)
        return f'{self.role}[{args}]'


class VariableDirectory:
    """ column index <-> (role, session, period). """
    
    def __init__(self, keys: Sequence[Key] = ()):
        self._keys = []  # type: List[Key]
        self._index = {}  # type: Dict[Key, int]
        for k in keys:
            self.add(*k)
    
    def __len__(self):
        return len(self._keys)
    
    def __iter__(self) -> Iterator[Key]:
        return iter(self._keys)
    
    def __getitem__(self, col: int) -> Key:
        return self._keys[col]
    
    def add(self, role: str, session_id: str = None, period: int = None) -> int:
        assert role in ROLES, role
        key = Key(role, session_id, period)
        assert key not in self._index, key
        self._index[key] = len(self._keys)
        self._keys.append(key)
        return self._index[key]
    
    def col(self, role: str, session_id: str = None,
            period: int = None) -> Optional[int]:
        return self._index.get(Key(role, session_id, period))
    
    def columns(self, role: str) -> List[int]:
        return [i for i, k in enumerate(self._keys) if k.role == role]
    
    def subset(self, cols: Sequence[int]) -> 'VariableDirectory':
        return VariableDirectory([self._keys[i] for i in cols])


@dataclass(frozen=True)
class ModelStats:
    variables: int
    binaries: int
    constraints: int
    nonzeros: int


@dataclass(frozen=True, eq=False)
class ModelLayout:
    """ the data a problem was built from, kept for presolve and extraction. """
    grid: TimeGrid
    sessions: Tuple[EvSession, ...]
    start: int
    end: int
    wind_kwh: np.ndarray
    price_cents_per_kwh: np.ndarray
    d_f_kwh: np.ndarray
    previous_rates: Dict[str, Tuple[float, float]]
    waived: FrozenSet[str] = frozenset()
    
    @property
    def periods(self) -> range:
        return range(self.start, self.end)


@dataclass(frozen=True, eq=False)
class MiqpProblem:
    """
    minimize    0.5 x'Qx + c'x + constant
    subject to  A_ub x <= b_ub
                A_eq x == b_eq
                lb <= x <= ub
                x[j] in {0, 1} for j in `binaries`
    
    `fixed` holds the values of columns removed by presolve, keyed like the
    directory, so that a reduced problem can still answer for them.
    """
    q: sparse.csc_matrix
    c: np.ndarray
    constant: float
    a_ub: sparse.csr_matrix
    b_ub: np.ndarray
    a_eq: sparse.csr_matrix
    b_eq: np.ndarray
    lb: np.ndarray
    ub: np.ndarray
    binaries: np.ndarray
    directory: VariableDirectory
    layout: ModelLayout
    ub_labels: Tuple[str, ...] = ()
    eq_labels: Tuple[str, ...] = ()
    fixed: Dict[Key, float] = field(default_factory=dict)
    
    @property
    def n(self) -> int:
        return len(self.c)
    
    @property
    def is_empty(self) -> bool:
        return self.n == 0 and not self.fixed
    
    def stats(self) -> ModelStats:
        return ModelStats(
            variables=self.n,
            binaries=len(self.binaries),
            constraints=self.a_ub.shape[0] + self.a_eq.shape[0],
            nonzeros=self.a_ub.nnz + self.a_eq.nnz + self.q.nnz,
        )
    
    def objective(self, x: np.ndarray) -> float:
        return float(0.5 * x @ (self.q @ x) + self.c @ x + self.constant)
    
    def value(self, x: np.ndarray, role: str, session_id: str = None,
              period: int = None, default: float = 0.0) -> float:
        """ read a column from a point, falling back to presolve fixings. """
        col = self.directory.col(role, session_id, period)
        if col is not None:
            return float(x[col])
        return self.fixed.get(Key(role, session_id, period), default)
    
    def max_violation(self, x: np.ndarray) -> float:
        parts = [0.0]
        if self.a_ub.shape[0]:
            parts.append(float(np.max(self.a_ub @ x - self.b_ub)))
        if self.a_eq.shape[0]:
            parts.append(float(np.max(np.abs(self.a_eq @ x - self.b_eq))))
        if self.n:
            parts.append(float(np.max(self.lb - x)))
            parts.append(float(np.max(x - self.ub)))
        return max(parts)
    
    def with_bounds(self, lb: np.ndarray, ub: np.ndarray) -> 'MiqpProblem':
        return replace(self, lb=lb, ub=ub)
