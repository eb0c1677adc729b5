__all__ = [
    'ConfigError',
    'DemandModelError',
    'ForecastError',
    'PlannerStepError',
    'QpIterationLimit',
    'QpNumericalError',
    'ScenarioMismatchError',
    'ShapeError',
    'SolverError',
    'UnreachableMinimumError',
    'V2GError',
]


class V2GError(Exception):
    pass


class ConfigError(V2GError):
    """ invalid scenario, session or config values. """


class ShapeError(V2GError):
    pass


class UnreachableMinimumError(V2GError):
    
    def __init__(self, session_id, t_arr, t_min, t_dep):
        super().__init__(
            f'session {session_id}: minimum level needs {t_min} periods '
            f'from t={t_arr} but it departs at t={t_dep}'
        )
        self.session_id = session_id
        self.t_min = t_min


class ForecastError(V2GError):
    pass


class DemandModelError(V2GError):
    pass


class ScenarioMismatchError(V2GError):
    pass


class SolverError(V2GError):
    pass


class QpNumericalError(SolverError):
    pass


class QpIterationLimit(SolverError):
    pass


class PlannerStepError(SolverError):
    
    def __init__(self, j: int, reason: str):
        super().__init__(f'planning step j={j} failed: {reason}')
        self.j = j
