"""
hand-built fleets and problems shared by the test modules.

the reference vehicle takes 1.65 kWh per 15-minute period (6.6 kW), which
lifts the battery by 1.485 kWh when charging and drains 1.8333 kWh when
discharging.
"""
import numpy as np
import pytest
from scipy import sparse

from v2g_scheduler.domain import EvSession
from v2g_scheduler.domain import EvSpec
from v2g_scheduler.domain import Mode
from v2g_scheduler.domain import Scenario
from v2g_scheduler.domain import TimeGrid
from v2g_scheduler.model import MiqpProblem
from v2g_scheduler.model import ModelLayout
from v2g_scheduler.model import VariableDirectory


@pytest.fixture
def spec() -> EvSpec:
    return EvSpec('Ford Focus EV', 6.6, 23.0, 7.7, 3500.0)


@pytest.fixture
def make_session(spec):
    def make(sid='a', t_arr=0, t_dep=4, soc_init=10.0, soc_desired=12.0,
             soc_min=0.0, v2g=False, ev=None) -> EvSession:
        return EvSession(
            id=sid, spec=ev or spec, t_arr=t_arr, t_dep=t_dep,
            soc_init_kwh=soc_init, soc_desired_kwh=soc_desired,
            soc_min_kwh=soc_min, mode=Mode.V2G if v2g else Mode.G2V,
        )
    return make


@pytest.fixture
def make_scenario():
    def make(sessions=(), horizon=8, wind=0.0, price=10.0,
             **weights) -> Scenario:
        wind = np.broadcast_to(np.asarray(wind, dtype=float), (horizon,))
        price = np.broadcast_to(np.asarray(price, dtype=float), (horizon,))
        return Scenario(
            grid=TimeGrid(horizon_periods=horizon),
            wind_kwh=wind,
            price_cents_per_kwh=price,
            sessions=tuple(sessions),
            **weights,
        )
    return make


@pytest.fixture
def random_scenario(spec):
    """
    small randomized fleets: `n_ev` vehicles of at most 3 plug periods over
    `periods` periods, every one V2G unless `v2g=False`.
    """
    def make(seed: int, n_ev: int = 2, periods: int = 6,
             v2g: bool = True) -> Scenario:
        rng = np.random.default_rng(seed)
        sessions = []
        for k in range(n_ev):
            t_arr = int(rng.integers(0, periods - 1))
            t_dep = min(t_arr + int(rng.integers(2, 4)), periods)
            soc_init = float(rng.uniform(3, 15))
            sessions.append(EvSession(
                id=f'ev{k}', spec=spec, t_arr=t_arr, t_dep=t_dep,
                soc_init_kwh=soc_init,
                soc_desired_kwh=float(soc_init + rng.uniform(0, 3)),
                soc_min_kwh=2.0,
                mode=Mode.V2G if v2g else Mode.G2V,
            ))
        return Scenario(
            grid=TimeGrid(horizon_periods=periods),
            wind_kwh=rng.uniform(0, 4, periods),
            price_cents_per_kwh=rng.uniform(5, 30, periods),
            sessions=tuple(sessions),
            seed=seed,
        )
    return make


def standard_problem(q, c, a_ub=None, b_ub=(), a_eq=None, b_eq=(),
                     lb=None, ub=None, binaries=(), constant=0.0
                     ) -> MiqpProblem:
    """ a bare standard-form problem whose columns are named g[0], g[1]... """
    n = len(c)
    empty = sparse.csr_matrix((0, n))
    return MiqpProblem(
        q=sparse.csc_matrix(np.asarray(q, dtype=float).reshape(n, n)),
        c=np.asarray(c, dtype=float),
        constant=constant,
        a_ub=empty if a_ub is None else sparse.csr_matrix(
            np.asarray(a_ub, dtype=float)),
        b_ub=np.asarray(b_ub, dtype=float),
        a_eq=empty if a_eq is None else sparse.csr_matrix(
            np.asarray(a_eq, dtype=float)),
        b_eq=np.asarray(b_eq, dtype=float),
        lb=np.zeros(n) if lb is None else np.asarray(lb, dtype=float),
        ub=np.full(n, np.inf) if ub is None else np.asarray(ub, dtype=float),
        binaries=np.asarray(binaries, dtype=int),
        directory=VariableDirectory([('g', None, i) for i in range(n)]),
        layout=ModelLayout(
            grid=TimeGrid(), sessions=(), start=0, end=0,
            wind_kwh=np.zeros(0), price_cents_per_kwh=np.zeros(0),
            d_f_kwh=np.zeros(0), previous_rates={},
        ),
    )


@pytest.fixture
def toy_problem():
    return standard_problem
