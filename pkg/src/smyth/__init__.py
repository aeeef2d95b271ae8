from smyth.qspace import (
    QSpace,
    build_qspace,
    claim1_check,
    claim3_check,
    q_one_step,
    smyth_sweep,
    vietoris_equals_scott,
    well_filtered_check,
)
from smyth.space import FiniteSpace, alexandrov, discrete, enumerate_t0_spaces, saturation

__all__ = [
    "FiniteSpace", "saturation", "alexandrov", "discrete", "enumerate_t0_spaces",
    "QSpace", "build_qspace", "vietoris_equals_scott", "claim1_check", "claim3_check",
    "q_one_step", "well_filtered_check", "smyth_sweep",
]
