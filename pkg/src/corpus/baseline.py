import itertools
import logging
from typing import List

from corpus.entry import PROPERTIES, CorpusEntry, EntryFlags, Golden
from corpus.figures import naturals
from dposet.dposet import DPoset, LimitDecl
from dposet.family import SchemaSet, TruncationFamily
from order.poset import build_poset

logger = logging.getLogger(__name__)


def _all_hold() -> dict:
    return {prop: Golden("Holds") for prop in PROPERTIES}


def omega_chain_level(level: int) -> DPoset:
    nat = naturals(level)
    relations = list(zip(nat, nat[1:])) + [(nat[-1], "w")]
    return DPoset(build_poset(nat + ["w"], relations), [LimitDecl(tuple(nat), "w", "nat")])


def boolean_lattice(bits: int) -> DPoset:
    """2^bits 的子集格，元素名为二进制串"""
    names = ["".join(p) for p in itertools.product("01", repeat=bits)]
    relations = []
    for name in names:
        for i, c in enumerate(name):
            if c == "0":
                relations.append((name, name[:i] + "1" + name[i + 1:]))
    return DPoset(build_poset(names, relations))


def pentagon() -> DPoset:
    """N5：0 < a < b < 1，0 < c < 1"""
    relations = [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")]
    return DPoset(build_poset(["0", "a", "b", "c", "1"], relations))


def flat_naturals_level(level: int) -> DPoset:
    nat = naturals(level)
    return DPoset(build_poset(["bot"] + nat, [("bot", n) for n in nat]))


def constant_family(name: str, d: DPoset) -> TruncationFamily:
    return TruncationFamily(name, lambda level: d)


def baseline_entries() -> List[CorpusEntry]:
    chain = TruncationFamily(
        "omega-chain",
        omega_chain_level,
        schemas=[SchemaSet("nat", naturals, lambda cid: cid == "nat")],
    )
    return [
        CorpusEntry(
            "omega-chain",
            chain,
            EntryFlags(dcpo=True, meet_semilattice=True, sup_semilattice=True),
            _all_hold(),
            provenance="the naturals with a top limit: a continuous dcpo",
            source="chain.poset",
        ),
        CorpusEntry(
            "boolean-cube",
            constant_family("boolean-cube", boolean_lattice(3)),
            EntryFlags(dcpo=True, meet_semilattice=True, sup_semilattice=True),
            _all_hold(),
            provenance="finite Boolean lattice on three atoms",
        ),
        CorpusEntry(
            "pentagon",
            constant_family("pentagon", pentagon()),
            EntryFlags(dcpo=True, meet_semilattice=True, sup_semilattice=True),
            _all_hold(),
            provenance="non-modular five-element lattice",
            source="pentagon.poset",
        ),
        CorpusEntry(
            "flat-naturals",
            TruncationFamily("flat-naturals", flat_naturals_level),
            EntryFlags(dcpo=True, meet_semilattice=True, sup_semilattice=False),
            _all_hold(),
            provenance="flat domain of the naturals, no limits",
        ),
    ]


__all__ = ["baseline_entries", "boolean_lattice", "pentagon", "omega_chain_level", "flat_naturals_level", "constant_family"]
