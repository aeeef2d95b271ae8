from properties.checkers import (
    CHECKERS,
    CheckOptions,
    PropertyReport,
    check_all,
    check_continuous,
    check_Dprime_lower,
    check_exact,
    check_meet_continuous,
    check_one_step,
    check_quasicontinuous,
    check_weak_one_step,
    run_property,
)
from properties.retraction import ScottMap, identity_map, retract_transfer, verify_retraction
from properties.search import SearchOutcome, search_counterexample
from properties.suite import LIMITATION_NOTICE, SuiteReport, rudin_step_replay, theorem_suite

__all__ = [
    "CHECKERS", "CheckOptions", "PropertyReport", "run_property", "check_all",
    "check_weak_one_step", "check_one_step", "check_meet_continuous", "check_continuous",
    "check_exact", "check_quasicontinuous", "check_Dprime_lower",
    "ScottMap", "identity_map", "verify_retraction", "retract_transfer",
    "SuiteReport", "theorem_suite", "rudin_step_replay", "LIMITATION_NOTICE",
    "SearchOutcome", "search_counterexample",
]
