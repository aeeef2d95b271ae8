from order.mask import SubsetMask
from order.poset import FinPoset, build_poset

__all__ = ["SubsetMask", "FinPoset", "build_poset"]
