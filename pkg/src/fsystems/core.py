"""Immutable finite F-systems.

An F-system is a digraph over a finite set of *sentences* in which an edge
(x, y) means "x asserts that y is false".  Sentences with no outgoing edge
are *sinks*; they assert nothing and behave like object-language statements
whose truth is settled outside the system.

Every other module in this package works exclusively through this
representation.  Instances are immutable after construction and safe to
share across threads.

All emitted collections are ordered lexicographically on sentence names so
that output is deterministic and diffable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .errors import UnknownSentenceError

_NAME_RE = re.compile(r"[A-Za-z0-9_]+\Z")


@dataclass(frozen=True)
class FSystem:
    """A finite digraph of sentences under the "affirms falsity of" relation.

    ``sentences`` is lexicographically sorted and duplicate-free; ``edges``
    is sorted and duplicate-free with both endpoints declared.  Self-loops
    are permitted (they model self-denial, e.g. the liar sentence).

    Use :func:`build` rather than the raw constructor; it normalises and
    validates its input.
    """

    sentences: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    # -- derived structures (bitmask adjacency; index = position in
    #    `sentences`, so bit order coincides with canonical name order) --

    @cached_property
    def _index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.sentences)}

    @cached_property
    def succ_masks(self) -> tuple[int, ...]:
        masks = [0] * len(self.sentences)
        idx = self._index
        for x, y in self.edges:
            masks[idx[x]] |= 1 << idx[y]
        return tuple(masks)

    @cached_property
    def pred_masks(self) -> tuple[int, ...]:
        masks = [0] * len(self.sentences)
        idx = self._index
        for x, y in self.edges:
            masks[idx[y]] |= 1 << idx[x]
        return tuple(masks)

    @cached_property
    def sink_mask(self) -> int:
        mask = 0
        for i, succ in enumerate(self.succ_masks):
            if not succ:
                mask |= 1 << i
        return mask

    @property
    def full_mask(self) -> int:
        return (1 << len(self.sentences)) - 1

    def __len__(self) -> int:
        return len(self.sentences)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    # -- name/mask conversions --

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownSentenceError(name) from None

    def mask_of(self, names: Iterable[str]) -> int:
        mask = 0
        for name in names:
            mask |= 1 << self.index_of(name)
        return mask

    def names_of(self, mask: int) -> tuple[str, ...]:
        """Sentence names for the set bits of ``mask``, in canonical order."""
        return tuple(self.sentences[i] for i in _bit_indices(mask))

    # -- neighbourhood queries --

    def successors(self, x: str) -> frozenset[str]:
        """The sentences whose falsity ``x`` asserts."""
        return frozenset(self.names_of(self.succ_masks[self.index_of(x)]))

    def predecessors(self, x: str) -> frozenset[str]:
        """The sentences asserting the falsity of ``x``."""
        return frozenset(self.names_of(self.pred_masks[self.index_of(x)]))

    def successors_of_set(self, names: Iterable[str]) -> frozenset[str]:
        mask = 0
        for name in names:
            mask |= self.succ_masks[self.index_of(name)]
        return frozenset(self.names_of(mask))

    def predecessors_of_set(self, names: Iterable[str]) -> frozenset[str]:
        mask = 0
        for name in names:
            mask |= self.pred_masks[self.index_of(name)]
        return frozenset(self.names_of(mask))

    def succ_set_mask(self, mask: int) -> int:
        out = 0
        for i in _bit_indices(mask):
            out |= self.succ_masks[i]
        return out

    def pred_set_mask(self, mask: int) -> int:
        out = 0
        for i in _bit_indices(mask):
            out |= self.pred_masks[i]
        return out

    def is_sink(self, x: str) -> bool:
        return not self.succ_masks[self.index_of(x)]

    def sinks(self) -> frozenset[str]:
        return frozenset(self.names_of(self.sink_mask))

    def sinks_of(self, names: Iterable[str]) -> frozenset[str]:
        """The members of ``names`` that have no outgoing edge."""
        return frozenset(self.names_of(self.mask_of(names) & self.sink_mask))

    # -- whole-system transforms --

    def invert(self) -> "FSystem":
        """The same sentences with every edge reversed.  An involution."""
        return FSystem(self.sentences, tuple(sorted((y, x) for x, y in self.edges)))


def build(
    sentences: Iterable[str] = (),
    edges: Iterable[tuple[str, str]] = (),
    *,
    strict: bool = False,
) -> FSystem:
    """Construct a validated :class:`FSystem`.

    Duplicate sentence declarations and duplicate edges collapse silently.
    By default, edge endpoints that were never declared are auto-declared
    (convenient for terse literals and the text format); with
    ``strict=True`` an undeclared endpoint raises
    :class:`~fsystems.errors.UnknownSentenceError` instead.
    """
    declared = set(sentences)
    edge_set = {(str(x), str(y)) for x, y in edges}
    for x, y in edge_set:
        for end in (x, y):
            if end not in declared:
                if strict:
                    raise UnknownSentenceError(end)
                declared.add(end)
    for name in declared:
        if not _NAME_RE.match(name):
            raise ValueError(
                f"invalid sentence name {name!r}: expected a nonempty token "
                "over [A-Za-z0-9_]"
            )
    return FSystem(tuple(sorted(declared)), tuple(sorted(edge_set)))


def _bit_indices(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low
