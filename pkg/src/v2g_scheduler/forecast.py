"""
wind (or price) forecasts for planning windows.

the Markov chain steps once per planning interval (one hour by default) over
hourly means of the trace. inside a window the first hour is known exactly;
hour k ahead gets the k-step expected value, held over the hour's periods.
"""
from typing import List
from typing import Optional
from typing import Tuple

import numpy as np

from .core import ForecastError
from .core import logw

__all__ = [
    'Forecaster',
    'MarkovForecaster',
    'PerfectForecaster',
    'evaluate_forecaster',
    'hourly_means',
    'split_trace',
]


class Forecaster:
    """ interface: values for periods [start, end) given the realized trace. """
    
    def window(self, realized: np.ndarray, start: int, end: int) -> np.ndarray:
        raise NotImplementedError


class PerfectForecaster(Forecaster):
    
    def window(self, realized, start, end):
        return np.asarray(realized[start:end], dtype=float).copy()


class MarkovForecaster(Forecaster):
    """
    args:
        states: strictly increasing representatives (one per state).
        matrix: row-stochastic one-step transition matrix.
        step_periods: periods per chain step.
    """
    
    def __init__(self, states, matrix, step_periods: int = 4):
        self.states = np.asarray(states, dtype=float)
        self.matrix = np.asarray(matrix, dtype=float)
        self.step_periods = int(step_periods)
        n = len(self.states)
        if n == 0 or self.matrix.shape != (n, n):
            raise ForecastError(f'transition matrix must be {n}x{n}, '
                                f'got {self.matrix.shape}')
        if np.any(np.diff(self.states) <= 0):
            raise ForecastError('state representatives must be strictly '
                                'increasing')
        if np.any(self.matrix < 0) or \
                np.any(np.abs(self.matrix.sum(axis=1) - 1) > 1e-9):
            raise ForecastError('transition matrix is not row-stochastic')
        if self.step_periods < 1:
            raise ForecastError('step_periods must be positive')
        self._powers = [np.eye(n), self.matrix]  # type: List[np.ndarray]
    
    @classmethod
    def fit(cls, trace, n_states: int = 20,
            step_periods: int = 4) -> 'MarkovForecaster':
        """
        args:
            trace: per-period values; averaged to one value per step.
        
        raises:
            ForecastError: fewer than two steps of data.
        """
        steps = hourly_means(trace, step_periods)
        if len(steps) < 2:
            raise ForecastError(
                f'training trace holds {len(steps)} step(s), need at least 2'
            )
        top = float(steps.max())
        width = top / n_states if top > 0 else 1.0
        states = (np.arange(n_states) + 0.5) * width
        index = np.minimum((steps / width).astype(int), n_states - 1)
        counts = np.zeros((n_states, n_states))
        np.add.at(counts, (index[:-1], index[1:]), 1.0)
        totals = counts.sum(axis=1)
        matrix = np.eye(n_states)
        seen = totals > 0
        matrix[seen] = counts[seen] / totals[seen, None]
        return cls(states, matrix, step_periods)
    
    @property
    def n_states(self) -> int:
        return len(self.states)
    
    def state_of(self, value: float) -> int:
        if value > self.states[-1] + (self.states[-1] - self.states[0]):
            logw(f'forecast: {value:.3f} far above the trained range, '
                 f'clamped to the top state')
        # nearest representative, ties upwards.
        edges = (self.states[:-1] + self.states[1:]) / 2
        return int(np.searchsorted(edges, value, side='right'))
    
    def power(self, k: int) -> np.ndarray:
        while len(self._powers) <= k:
            self._powers.append(self._powers[-1] @ self.matrix)
        return self._powers[k]
    
    def distribution(self, current: float, k: int) -> np.ndarray:
        if k < 0:
            raise ForecastError(f'negative forecast horizon: {k}')
        return self.power(k)[self.state_of(current)]
    
    def forecast(self, current: float, k: int) -> float:
        """ expected value k steps ahead; k = 0 returns `current` as is. """
        if k < 0:
            raise ForecastError(f'negative forecast horizon: {k}')
        if k == 0:
            return float(current)
        return float(self.distribution(current, k) @ self.states)
    
    def window(self, realized, start, end):
        realized = np.asarray(realized, dtype=float)
        step = self.step_periods
        current = float(np.mean(realized[start:min(start + step, end)]))
        out = np.empty(end - start)
        for i, t in enumerate(range(start, end)):
            k = i // step
            out[i] = realized[t] if k == 0 else self.forecast(current, k)
        return out
    
    def to_dict(self) -> dict:
        return {
            'states': self.states.tolist(),
            'matrix': self.matrix.tolist(),
            'step_periods': self.step_periods,
        }
    
    @classmethod
    def from_dict(cls, data: dict) -> 'MarkovForecaster':
        try:
            return cls(data['states'], data['matrix'],
                       data.get('step_periods', 4))
        except KeyError as e:
            raise ForecastError(f'forecaster file misses {e}')


# -----------------------------------------------------------------------------

def hourly_means(trace, step_periods: int = 4) -> np.ndarray:
    """ mean per chain step; a trailing partial step is dropped. """
    trace = np.asarray(trace, dtype=float)
    n = len(trace) // step_periods * step_periods
    return trace[:n].reshape(-1, step_periods).mean(axis=1)


def split_trace(trace, train_days: int,
                periods_per_day: int = 96) -> Tuple[np.ndarray, np.ndarray]:
    trace = np.asarray(trace, dtype=float)
    cut = train_days * periods_per_day
    if train_days <= 0 or cut >= len(trace):
        raise ForecastError(
            f'cannot split {len(trace)} periods after {train_days} day(s)'
        )
    return trace[:cut], trace[cut:]


def evaluate_forecaster(
        forecaster: MarkovForecaster,
        trace,
        max_steps: Optional[int] = None,
) -> np.ndarray:
    """
    mean absolute error of the k-step forecast over a test trace, for
    k = 1 .. max_steps (defaults to one day of steps).
    """
    steps = hourly_means(trace, forecaster.step_periods)
    if max_steps is None:
        max_steps = 96 // forecaster.step_periods
    errors = np.zeros(max_steps)
    for k in range(1, max_steps + 1):
        if len(steps) <= k:
            errors[k - 1] = np.nan
            continue
        predicted = [forecaster.forecast(v, k) for v in steps[:-k]]
        errors[k - 1] = float(np.mean(np.abs(np.array(predicted) - steps[k:])))
    return errors
