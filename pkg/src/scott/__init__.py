from scott.operators import (
    ClosureTrace, is_scott_closed, is_scott_open, one_step_set, scott_closure, weak_one_step_set,
)
from scott.oracle import enumerate_scott_closed
from scott.rudin import rudin_select
from scott.waybelow import fin_family, way_below, way_below_set, weakly_way_below

__all__ = [
    "ClosureTrace", "is_scott_closed", "is_scott_open", "one_step_set", "scott_closure",
    "weak_one_step_set", "enumerate_scott_closed", "rudin_select", "fin_family",
    "way_below", "way_below_set", "weakly_way_below",
]
