from typing import List

from ..domain import EvSpec

__all__ = ['ev_catalog']

# name, acceptance rate (kW), battery (kWh), charger (kW), battery cost ($)
_TABLE = (
    ('BMW i3 2017', 7.4, 32, 7.7, 4640),
    ('Ford Focus EV', 6.6, 23, 7.7, 3500),
    ('Ford Focus EV 2017', 6.6, 33.5, 7.7, 4850),
    ('Nissan Leaf S 2016', 6.6, 24, 7.7, 3500),
    ('Nissan Leaf 2017', 6.6, 30, 7.7, 4350),
    ('VW e-Golf 2017', 7.2, 35.8, 7.7, 5200),
    ('Chevy Bolt', 7.2, 60, 7.7, 8700),
    ('Tesla Model S 70 Single', 9.6, 70, 11.5, 10150),
    ('Tesla Model X 75 Dual', 17.2, 75, 15.4, 10900),
    ('Tesla Model S 90 Dual', 19.2, 90, 15.4, 13000),
)


def ev_catalog(eta_c: float = 0.9, eta_d: float = 0.9) -> List[EvSpec]:
    """ the ten 2018-market vehicles the generator draws from. """
    return [EvSpec(name, float(ar), float(cap), float(cp), float(cost),
                   eta_c, eta_d) for name, ar, cap, cp, cost in _TABLE]
