from .catalog import ev_catalog
from .generator import Fleet
from .generator import ScenarioConfig
from .generator import default_arrival_pmfs
from .generator import fit_future_demand_model
from .generator import generate
from .generator import history_config
from .generator import make_scenario
from .traces import PRICE_COLUMN
from .traces import WIND_COLUMN
from .traces import expand_hourly
from .traces import hourly_factor
from .traces import read_trace
from .traces import synthetic_price
from .traces import synthetic_wind
from .traces import write_trace
