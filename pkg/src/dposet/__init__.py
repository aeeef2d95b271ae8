from dposet.dposet import DPoset, LimitDecl, directed_sups, validate_dposet
from dposet.family import Band, SchemaSet, TruncationFamily, guard_band, guarded_carrier, trivial_band
from dposet.verdict import Verdict, escalate, stabilize

__all__ = [
    "DPoset", "LimitDecl", "directed_sups", "validate_dposet",
    "Band", "SchemaSet", "TruncationFamily", "guard_band", "guarded_carrier", "trivial_band",
    "Verdict", "escalate", "stabilize",
]
