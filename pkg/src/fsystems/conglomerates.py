"""Kernels, conglomerates and local conglomerates.

All three are *independent* sets (no edge runs between two members, in
either direction); they differ in how much they must absorb, where a set A
absorbs a sentence y when y points at some member of A:

* a **kernel** absorbs every outside sentence;
* a **conglomerate** absorbs every outside non-sink (the set of sentences
  that can jointly be true, leaving sinks free to be false);
* a **local conglomerate** absorbs only the non-sinks it points at (the
  paradox-tolerant relaxation: it captures what can be true together even
  when the system as a whole has no classical valuation).

Every kernel is a conglomerate and every conglomerate is a local
conglomerate.  A system has a conglomerate exactly when it is not
paradoxical.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

from .core import FSystem
from .errors import CeilingExceededError
from .labelling import Label, Labelling

DEFAULT_ENUMERATION_CEILING = 24
CEILING_ENV_VAR = "FSYS_MAX_SENTENCES"

KIND_KERNEL = "kernel"
KIND_CONGLOMERATE = "conglomerate"
KIND_LOCAL = "local-conglomerate"
KIND_MAXIMAL_LOCAL = "maximal-local-conglomerate"
KINDS = (KIND_KERNEL, KIND_CONGLOMERATE, KIND_LOCAL, KIND_MAXIMAL_LOCAL)


@dataclass(frozen=True)
class SolverResult:
    kind: str
    sets: tuple[tuple[str, ...], ...]
    exhaustive: bool


def effective_ceiling(ceiling: int | None = None) -> int:
    """Resolve the enumeration ceiling: explicit argument, else the
    FSYS_MAX_SENTENCES environment variable, else the default (24)."""
    if ceiling is not None:
        return ceiling
    env = os.environ.get(CEILING_ENV_VAR)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"{CEILING_ENV_VAR} must be an integer, got {env!r}")
    return DEFAULT_ENUMERATION_CEILING


# -- predicates ---------------------------------------------------------------


def is_independent(sys: FSystem, names: Iterable[str]) -> bool:
    """No edge joins two members of the set, in either role."""
    a = sys.mask_of(names)
    return not sys.pred_set_mask(a) & a


def is_conglomerate(sys: FSystem, names: Iterable[str]) -> bool:
    a = sys.mask_of(names)
    pred = sys.pred_set_mask(a)
    if pred & a:
        return False
    outside_nonsinks = sys.full_mask & ~a & ~sys.sink_mask
    return not outside_nonsinks & ~pred


def is_kernel(sys: FSystem, names: Iterable[str]) -> bool:
    a = sys.mask_of(names)
    pred = sys.pred_set_mask(a)
    if pred & a:
        return False
    return not (sys.full_mask & ~a) & ~pred


def is_local_conglomerate(sys: FSystem, names: Iterable[str]) -> bool:
    a = sys.mask_of(names)
    pred = sys.pred_set_mask(a)
    if pred & a:
        return False
    targets = sys.succ_set_mask(a) & ~sys.sink_mask
    return not targets & ~pred


# -- enumeration --------------------------------------------------------------
#
# Backtracking over sentences in canonical order, excluding before
# including.  Including a sentence adjacent to the current set kills the
# branch (independence); for kernels and conglomerates, excluding a
# sentence whose every potential absorber is already excluded kills the
# branch too.  Absorption is verified exactly at the leaves.


def _search_masks(sys: FSystem, kind: str, prefix: tuple[bool, ...] = ()) -> list[int]:
    n = len(sys)
    succ = sys.succ_masks
    pred = sys.pred_masks
    sink = sys.sink_mask
    full = sys.full_mask
    need_absorb_all = kind == KIND_KERNEL
    need_absorb_nonsinks = kind == KIND_CONGLOMERATE
    out: list[int] = []

    def leaf_ok(a: int, pred_a: int, succ_a: int) -> bool:
        if need_absorb_all:
            return not (full & ~a) & ~pred_a
        if need_absorb_nonsinks:
            return not (full & ~a & ~sink) & ~pred_a
        return not (succ_a & ~sink) & ~pred_a

    def step(i: int, a: int, pred_a: int, succ_a: int, include: bool):
        """Apply one decision; returns the new state or None when pruned."""
        bit = 1 << i
        if include:
            if (succ[i] | pred[i]) & (a | bit):
                return None
            return a | bit, pred_a | pred[i], succ_a | succ[i]
        if need_absorb_all or (need_absorb_nonsinks and not sink >> i & 1):
            undecided_after = full & ~((bit << 1) - 1)
            if not succ[i] & (a | undecided_after):
                return None  # i can never shoot into the set
        return a, pred_a, succ_a

    def walk(i: int, a: int, pred_a: int, succ_a: int):
        if i == n:
            if leaf_ok(a, pred_a, succ_a):
                out.append(a)
            return
        for include in (False, True):
            state = step(i, a, pred_a, succ_a, include)
            if state is not None:
                walk(i + 1, *state)

    state = (0, 0, 0)
    for i, include in enumerate(prefix):
        nxt = step(i, *state, include)
        if nxt is None:
            return out
        state = nxt
    walk(len(prefix), *state)
    return out


def _enumerate_masks(sys: FSystem, kind: str, workers: int) -> list[int]:
    n = len(sys)
    if workers <= 1 or n < 2:
        masks = _search_masks(sys, kind)
    else:
        depth = min(n, max(1, (workers - 1).bit_length()))
        prefixes = [
            tuple(bool(p >> (depth - 1 - j) & 1) for j in range(depth))
            for p in range(1 << depth)
        ]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(lambda pre: _search_masks(sys, kind, pre), prefixes))
        masks = [m for chunk in chunks for m in chunk]
    return masks


def _maximal(masks: list[int]) -> list[int]:
    # Every set is contained in some maximal one, and maximal sets are at
    # least as large, so scanning by descending size and comparing against
    # the accepted maxima only is exact.
    keep: list[int] = []
    for m in sorted(set(masks), key=lambda m: (-m.bit_count(), m)):
        if not any(a & m == m for a in keep):
            keep.append(m)
    return keep


def enumerate_sets(
    sys: FSystem,
    kind: str,
    *,
    ceiling: int | None = None,
    workers: int = 1,
) -> SolverResult:
    """Exhaustively enumerate all sets of the given kind, canonically ordered.

    ``kind`` is one of ``kernel``, ``conglomerate``, ``local-conglomerate``
    or ``maximal-local-conglomerate``.  Systems larger than the ceiling
    (default 24 sentences) raise :class:`CeilingExceededError` rather than
    running for hours.  ``workers`` > 1 splits the search over threads;
    results are identical for every worker count.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown enumeration kind: {kind!r}")
    limit = effective_ceiling(ceiling)
    if len(sys) > limit:
        raise CeilingExceededError(f"enumerate {kind}", len(sys), limit)
    base_kind = KIND_LOCAL if kind == KIND_MAXIMAL_LOCAL else kind
    masks = _enumerate_masks(sys, base_kind, workers)
    if kind == KIND_MAXIMAL_LOCAL:
        masks = _maximal(masks)
    sets = sorted(sys.names_of(m) for m in masks)
    return SolverResult(kind, tuple(sets), True)


# -- conglomerate/labelling correspondence ------------------------------------


def labelling_of(sys: FSystem, names: Iterable[str]) -> Labelling:
    """The classical labelling that is T exactly on the given conglomerate
    and F everywhere else."""
    members = frozenset(names)
    if not is_conglomerate(sys, members):
        raise ValueError(f"not a conglomerate: {sorted(members)}")
    labels = tuple(
        Label.TRUE if name in members else Label.FALSE for name in sys.sentences
    )
    return Labelling(sys, labels)


def extend_local_conglomerate(
    sys: FSystem, names: Iterable[str], x: str
) -> tuple[str, ...]:
    """Grow a local conglomerate by one derivably-true sentence.

    ``x`` must lie in the plus component of one truth-derivation step
    applied to (A, targets-and-attackers-of-A); the result A ∪ {x} is then
    itself a local conglomerate, and everything already derivable as true
    stays derivable after the extension.
    """
    from .groundedness import PartialSet, phi

    members = frozenset(names)
    if not is_local_conglomerate(sys, members):
        raise ValueError(f"not a local conglomerate: {sorted(members)}")
    sys.index_of(x)
    neighbours = sys.successors_of_set(members) | sys.predecessors_of_set(members)
    stepped = phi(sys, PartialSet(members, neighbours))
    if x not in stepped.plus:
        raise ValueError(
            f"{x!r} is not derivably true from {sorted(members)}: "
            f"expected one of {sorted(stepped.plus)}"
        )
    return tuple(sorted(members | {x}))
