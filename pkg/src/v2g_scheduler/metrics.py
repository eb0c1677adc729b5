"""
schedule evaluation: grid supply, wind utilization, curtailment and the
owners' cost breakdown.

discharged energy is bought by the charging vehicles at the discharge price
(a share of the real-time price), so fleet-wide the payments for it equal
the revenue of the discharging vehicles. only the part the fleet draws in
the same period is settled: min(discharge, charge) per period. charging
costs are allocated pro rata to the energy each vehicle draws in a period,
revenue pro rata to the energy each vehicle discharges.
"""
from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import field
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence

import numpy as np
import pandas as pd

from .core import ScenarioMismatchError
from .degradation import DegradationModel
from .degradation import DegradationParams
from .degradation import schedule_degradation
from .domain import Scenario
from .domain import Schedule
from .domain import max_energy_per_period

__all__ = ['Report', 'SessionCost', 'compare', 'objective_value', 'report',
           'sweep_table']

METRICS = (
    'total_grid_supply_kwh',
    'wind_utilization_pct',
    'total_curtailment_kwh',
    'charge_cost_cents',
    'degradation_cost_cents',
    'discharge_revenue_cents',
    'total_cost_cents',
)


@dataclass(frozen=True)
class SessionCost:
    session_id: str
    charged_kwh: float
    discharged_kwh: float
    charge_cost_cents: float
    degradation_cost_cents: float
    discharge_revenue_cents: float
    final_soc_kwh: float


@dataclass(frozen=True)
class Report:
    """
    wind_utilization_pct: 100 * (sum W - sum Omega) / sum W, None without
        wind.
    total_cost_cents: charge_cost + degradation_cost - discharge_revenue.
    discharge_payments_cents: what charging vehicles pay for discharged
        energy (part of charge_cost).
    """
    label: str
    scenario_fingerprint: str
    seed: Optional[int]
    degradation_model: str
    total_wind_kwh: float
    total_grid_supply_kwh: float
    wind_utilization_pct: Optional[float]
    total_curtailment_kwh: float
    discharged_kwh: float
    charge_cost_cents: float
    degradation_cost_cents: float
    discharge_revenue_cents: float
    discharge_payments_cents: float
    total_cost_cents: float
    sessions: List[SessionCost] = field(default_factory=list)
    
    def to_dict(self) -> dict:
        return asdict(self)
    
    @classmethod
    def from_dict(cls, data: dict) -> 'Report':
        data = dict(data)
        data['sessions'] = [SessionCost(**s) for s in data.get('sessions', ())]
        return cls(**data)
    
    def metrics(self) -> Dict[str, Optional[float]]:
        return {k: getattr(self, k) for k in METRICS}


def report(
        scenario: Scenario,
        schedule: Schedule,
        degradation: DegradationModel = 'quadratic',
        params: DegradationParams = DegradationParams(),
        label: str = '',
) -> Report:
    price = np.asarray(scenario.price_cents_per_kwh)
    factor = scenario.discharge_price_factor
    grid = scenario.grid
    p = np.array([max_energy_per_period(s.spec, grid)
                  for s in scenario.sessions]).reshape(-1, 1)
    charged = p * schedule.x_c  # [session x period] kWh
    discharged = p * schedule.x_d
    fleet_charge = charged.sum(axis=0)
    fleet_discharge = discharged.sum(axis=0)
    
    grid_cost = price * schedule.g_kwh
    consumed = np.minimum(fleet_discharge, fleet_charge)
    discharge_cost = factor * price * consumed
    degradation_cost = schedule_degradation(scenario, schedule, degradation,
                                            params)
    
    share = np.divide(charged, fleet_charge, out=np.zeros_like(charged),
                      where=fleet_charge > 0)
    sold = np.divide(discharged, fleet_discharge,
                     out=np.zeros_like(discharged), where=fleet_discharge > 0)
    sessions = []
    for k, s in enumerate(scenario.sessions):
        final = schedule.soc[k, s.t_dep]
        sessions.append(SessionCost(
            session_id=s.id,
            charged_kwh=float(charged[k].sum()),
            discharged_kwh=float(discharged[k].sum()),
            charge_cost_cents=float(share[k] @ (grid_cost + discharge_cost)),
            degradation_cost_cents=float(degradation_cost[k]),
            discharge_revenue_cents=float(sold[k] @ discharge_cost),
            final_soc_kwh=float(final),
        ))
    
    wind = float(np.sum(scenario.wind_kwh))
    curtailed = float(np.sum(schedule.omega_kwh))
    charge_cost = float(grid_cost.sum() + discharge_cost.sum())
    revenue = float(discharge_cost.sum())
    degradation_total = float(degradation_cost.sum())
    return Report(
        label=label,
        scenario_fingerprint=scenario.fingerprint(),
        seed=scenario.seed,
        degradation_model=degradation,
        total_wind_kwh=wind,
        total_grid_supply_kwh=float(np.sum(schedule.g_kwh)),
        wind_utilization_pct=100 * (wind - curtailed) / wind if wind > 0
        else None,
        total_curtailment_kwh=curtailed,
        discharged_kwh=float(fleet_discharge.sum()),
        charge_cost_cents=charge_cost,
        degradation_cost_cents=degradation_total,
        discharge_revenue_cents=revenue,
        discharge_payments_cents=revenue,
        total_cost_cents=charge_cost + degradation_total - revenue,
        sessions=sessions,
    )


def objective_value(
        scenario: Scenario,
        schedule: Schedule,
        degradation: DegradationModel = 'quadratic',
        params: DegradationParams = DegradationParams(),
) -> float:
    """
    the scheduling objective re-evaluated on a whole-horizon schedule:
    sum pr G + lambda * degradation + delta * sum pr Omega, with G / Omega
    taken from the balance identity.
    """
    schedule = schedule.tightened(scenario)
    price = np.asarray(scenario.price_cents_per_kwh)
    deg = schedule_degradation(scenario, schedule, degradation, params)
    return float(price @ schedule.g_kwh + scenario.lambda_ * deg.sum() +
                 scenario.delta * price @ schedule.omega_kwh)


def compare(reports: Sequence[Report],
            labels: Sequence[str] = None) -> pd.DataFrame:
    """
    one row per metric, one column per report, plus `delta:<label>` columns
    against the first report.
    
    raises:
        ValueError: fewer than two reports.
        ScenarioMismatchError: the reports come from different scenarios.
    """
    if len(reports) < 2:
        raise ValueError('compare needs at least two reports')
    prints = {r.scenario_fingerprint for r in reports}
    if len(prints) > 1:
        raise ScenarioMismatchError(
            f'reports belong to different scenarios: {sorted(prints)}'
        )
    labels = list(labels or [r.label or f'report{i}'
                             for i, r in enumerate(reports)])
    df = pd.DataFrame(
        {label: pd.Series(r.metrics(), dtype=float)
         for label, r in zip(labels, reports)}
    )
    base = df[labels[0]]
    for label in labels[1:]:
        df[f'delta:{label}'] = df[label] - base
    df.index.name = 'metric'
    return df


def sweep_table(rows: Sequence[dict], parameter: str) -> pd.DataFrame:
    """
    seed-average sweep results.
    
    args:
        rows: one dict per run with keys `parameter`, 'seed' and the report
            metrics.
    
    returns:
        one row per parameter value (sorted), metric means plus a `runs`
        count.
    """
    df = pd.DataFrame(list(rows))
    metrics = [m for m in METRICS if m in df.columns]
    out = df.groupby(parameter)[metrics].mean()
    out['runs'] = df.groupby(parameter).size()
    return out.sort_index()
