from functools import lru_cache
from typing import List

from corpus.baseline import baseline_entries
from corpus.entry import PROPERTIES, CorpusEntry, EntryFlags, Golden, export_dsl
from corpus.figures import fig1_family, fig2_family, fig3_family
from corpus.inflate import inflate_random


@lru_cache(maxsize=1)
def _entries() -> tuple:
    return (fig1_family(), fig2_family(), fig3_family(), *baseline_entries())


def all_entries() -> List[CorpusEntry]:
    return list(_entries())


def entry_by_name(name: str) -> CorpusEntry:
    for entry in _entries():
        if entry.name == name:
            return entry
    raise KeyError(f"unknown corpus entry '{name}'")


__all__ = [
    "CorpusEntry", "EntryFlags", "Golden", "PROPERTIES",
    "fig1_family", "fig2_family", "fig3_family", "baseline_entries", "inflate_random",
    "all_entries", "entry_by_name", "export_dsl",
]
