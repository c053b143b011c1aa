"""Three-valued labellings of F-systems.

A labelling assigns each sentence one of ``T`` (true), ``F`` (false) or
``U`` (undetermined) subject to two biconditionals at every non-sink x:

* x is F  iff  some sentence x points at is T;
* x is T  iff  every sentence x points at is F.

(Consequently x is U iff none of its targets is T and at least one is U.)
Sink values are unrestricted.  Labelling every sentence U is always valid.

A *classical* labelling never uses U; a system with no classical labelling
is *paradoxical*, and a sentence that is U under every labelling is a
paradoxical sentence.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Mapping

from .core import FSystem
from .errors import UnknownSentenceError

DEFAULT_LABELLING_LIMIT = 100_000

# Candidate bitmasks used by the search.  The numeric order T < F < U is
# also the canonical label order, so solution tuples sort correctly as-is.
_T, _F, _U = 1, 2, 4
_ALL = _T | _F | _U
_CLASSICAL = _T | _F


class Label(str, Enum):
    TRUE = "T"
    FALSE = "F"
    UNDETERMINED = "U"


_LABEL_OF_BIT = {_T: Label.TRUE, _F: Label.FALSE, _U: Label.UNDETERMINED}

STATUS_CONTRADICTION = "referential-contradiction"
STATUS_TAUTOLOGY = "referential-tautology"
STATUS_CONTINGENT = "contingent"
STATUS_PARADOXICAL = "paradoxical"
STATUS_UNDEFINED = "undefined"


@dataclass(frozen=True)
class Labelling:
    """A total assignment of labels, aligned with ``system.sentences``.

    Instances produced by this module always satisfy the labelling
    constraints; use :func:`check_labelling` to vet arbitrary mappings.
    """

    system: FSystem
    labels: tuple[Label, ...]

    def __getitem__(self, name: str) -> Label:
        return self.labels[self.system.index_of(name)]

    def as_dict(self) -> dict[str, Label]:
        return dict(zip(self.system.sentences, self.labels))

    def true_names(self) -> tuple[str, ...]:
        return tuple(
            n for n, l in zip(self.system.sentences, self.labels) if l is Label.TRUE
        )

    def count(self, label: Label) -> int:
        return sum(1 for l in self.labels if l is label)

    def is_classical(self) -> bool:
        return Label.UNDETERMINED not in self.labels


@dataclass(frozen=True)
class Violation:
    """One broken labelling rule.  ``clause`` is ``"F"`` when the
    false-biconditional failed at ``sentence`` and ``"T"`` for the
    true-biconditional."""

    sentence: str
    clause: str
    message: str


@dataclass(frozen=True)
class LabellingCheck:
    valid: bool
    violations: tuple[Violation, ...]


@dataclass(frozen=True)
class LabellingEnumeration:
    """Result of :func:`enumerate_labellings`.  ``truncated`` means the
    search stopped at the requested limit and the list is partial."""

    labellings: tuple[Labelling, ...]
    truncated: bool


@dataclass(frozen=True)
class SentenceClassification:
    """Per-sentence statuses plus the system-level paradoxicality flag.

    In a paradoxical system the contradiction/tautology/contingent
    trichotomy is vacuous, so non-paradoxical sentences are reported as
    ``undefined`` and only ``paradoxical_sentences`` carries information.
    """

    paradoxical: bool
    statuses: dict[str, str]
    paradoxical_sentences: tuple[str, ...]


def _coerce(value) -> Label:
    if isinstance(value, Label):
        return value
    try:
        return Label(value)
    except ValueError:
        raise ValueError(f"not a label: {value!r} (expected T, F or U)") from None


def check_labelling(sys: FSystem, candidate: Mapping[str, object]) -> LabellingCheck:
    """Validate an arbitrary total mapping against the labelling rules.

    Raises ``ValueError`` if the mapping is not total over the system's
    sentences and ``UnknownSentenceError`` if it mentions a foreign name.
    """
    for name in candidate:
        if name not in sys:
            raise UnknownSentenceError(str(name))
    missing = [n for n in sys.sentences if n not in candidate]
    if missing:
        raise ValueError(f"candidate labelling is not total: missing {missing}")

    labels = {n: _coerce(candidate[n]) for n in sys.sentences}
    violations: list[Violation] = []
    for x in sys.sentences:
        if sys.is_sink(x):
            continue
        succ = sys.successors(x)
        some_true = any(labels[z] is Label.TRUE for z in succ)
        all_false = all(labels[z] is Label.FALSE for z in succ)
        if (labels[x] is Label.FALSE) != some_true:
            violations.append(
                Violation(
                    x,
                    "F",
                    f"{x} is labelled {labels[x].value} but must be F exactly "
                    "when some of its targets is T",
                )
            )
        if (labels[x] is Label.TRUE) != all_false:
            violations.append(
                Violation(
                    x,
                    "T",
                    f"{x} is labelled {labels[x].value} but must be T exactly "
                    "when all of its targets are F",
                )
            )
    return LabellingCheck(not violations, tuple(violations))


# -- constraint search -------------------------------------------------------
#
# Candidates are per-sentence bitmasks over {T, F, U}.  Branch nodes are
# taken sinks first (the only unconstrained choice points), then the
# remaining sentences in canonical order; after each choice the
# biconditionals are propagated to a fixpoint, which prunes most of the
# 3^n space.  At an all-singleton fixpoint the constraints hold by
# construction, so leaves need no separate validity check.


class _Searcher:
    def __init__(self, sys: FSystem):
        n = len(sys)
        self.n = n
        self.succ = [[i for i in range(n) if m >> i & 1] for m in sys.succ_masks]
        self.pred = [[i for i in range(n) if m >> i & 1] for m in sys.pred_masks]
        sinks = [i for i in range(n) if not self.succ[i]]
        self.order = sinks + [i for i in range(n) if self.succ[i]]

    def propagate(self, cand: list[int], seeds: list[int]) -> bool:
        queue = deque(seeds)
        queued = [False] * self.n
        for s in seeds:
            queued[s] = True

        def shrink(j: int, keep: int) -> bool:
            new = cand[j] & keep
            if new == cand[j]:
                return True
            cand[j] = new
            if not new:
                return False
            for k in self.pred[j]:
                if not queued[k]:
                    queued[k] = True
                    queue.append(k)
            if self.succ[j] and not queued[j]:
                queued[j] = True
                queue.append(j)
            return True

        while queue:
            x = queue.popleft()
            queued[x] = False
            zs = self.succ[x]
            if not zs:
                continue
            may_f = may_u_some = 0
            may_t = may_u_all = True
            for z in zs:
                c = cand[z]
                may_f |= c & _T
                may_u_some |= c & _U
                if not c & _F:
                    may_t = False
                if not c & (_F | _U):
                    may_u_all = False
            allowed = (_T if may_t else 0) | (_F if may_f else 0)
            if may_u_all and may_u_some:
                allowed |= _U
            if not shrink(x, allowed):
                return False
            cx = cand[x]
            if not cx & _F:
                # x cannot be F, so no target may be T (a T target forces F).
                for z in zs:
                    if not shrink(z, _F | _U):
                        return False
            if cx == _T:
                for z in zs:
                    if not shrink(z, _F):
                        return False
            if not cx & _T:
                # x cannot be T, so not every target is F; unit-propagate.
                non_f = [z for z in zs if cand[z] & (_T | _U)]
                if len(non_f) == 1 and not shrink(non_f[0], _T | _U):
                    return False
            if cx == _F:
                ts = [z for z in zs if cand[z] & _T]
                if len(ts) == 1 and not shrink(ts[0], _T):
                    return False
            if cx == _U:
                us = [z for z in zs if cand[z] & _U]
                if len(us) == 1 and not shrink(us[0], _U):
                    return False
        return True

    def solutions(
        self, *, classical: bool, fixed: Mapping[int, int] | None = None
    ) -> Iterator[tuple[int, ...]]:
        base = _CLASSICAL if classical else _ALL
        cand = [base] * self.n
        if fixed:
            for i, bits in fixed.items():
                cand[i] &= bits
                if not cand[i]:
                    return
        yield from self._run(cand, [i for i in range(self.n) if self.succ[i]])

    def _run(self, cand: list[int], seeds: list[int]) -> Iterator[tuple[int, ...]]:
        if not self.propagate(cand, seeds):
            return
        branch = next((i for i in self.order if cand[i] & (cand[i] - 1)), None)
        if branch is None:
            yield tuple(cand)
            return
        reseed = self.pred[branch] + ([branch] if self.succ[branch] else [])
        for bit in (_T, _F, _U):
            if cand[branch] & bit:
                trial = cand.copy()
                trial[branch] = bit
                yield from self._run(trial, reseed)


def _solutions(
    sys: FSystem, *, classical: bool, fixed: Mapping[int, int] | None = None
) -> Iterator[tuple[int, ...]]:
    return _Searcher(sys).solutions(classical=classical, fixed=fixed)


def _satisfiable(sys: FSystem, *, classical: bool, fixed: Mapping[int, int]) -> bool:
    return next(_solutions(sys, classical=classical, fixed=fixed), None) is not None


def enumerate_labellings(
    sys: FSystem,
    *,
    classical_only: bool = False,
    limit: int | None = DEFAULT_LABELLING_LIMIT,
) -> LabellingEnumeration:
    """All valid labellings (optionally classical only) in canonical order.

    The canonical order compares label tuples sentence by sentence with
    T < F < U.  If more than ``limit`` labellings exist, the first
    ``limit`` found are returned (sorted) and the result is flagged
    truncated.
    """
    found: list[tuple[int, ...]] = []
    truncated = False
    for sol in _solutions(sys, classical=classical_only):
        if limit is not None and len(found) >= limit:
            truncated = True
            break
        found.append(sol)
    found.sort()
    labellings = tuple(
        Labelling(sys, tuple(_LABEL_OF_BIT[b] for b in sol)) for sol in found
    )
    return LabellingEnumeration(labellings, truncated)


def is_paradoxical(sys: FSystem) -> bool:
    """True when the system admits no classical labelling."""
    return not _satisfiable(sys, classical=True, fixed={})


def paradoxical_sentences(sys: FSystem) -> tuple[str, ...]:
    """The sentences labelled U by every valid labelling, canonical order."""
    searcher = _Searcher(sys)
    out = []
    for i, name in enumerate(sys.sentences):
        sat = next(searcher.solutions(classical=False, fixed={i: _CLASSICAL}), None)
        if sat is None:
            out.append(name)
    return tuple(out)


def classify_sentences(sys: FSystem) -> SentenceClassification:
    """Classify every sentence by the values classical labellings allow it.

    Non-paradoxical systems: a sentence false under every classical
    labelling is a referential contradiction, true under every one a
    referential tautology, otherwise contingent.  Paradoxical systems have
    no classical labellings, so those statuses are vacuous there: the
    paradoxical sentences are reported as such and the rest as undefined.
    """
    para_sentences = paradoxical_sentences(sys)
    if is_paradoxical(sys):
        para = set(para_sentences)
        statuses = {
            n: STATUS_PARADOXICAL if n in para else STATUS_UNDEFINED
            for n in sys.sentences
        }
        return SentenceClassification(True, statuses, para_sentences)

    searcher = _Searcher(sys)
    statuses = {}
    for i, name in enumerate(sys.sentences):
        can_true = next(searcher.solutions(classical=True, fixed={i: _T}), None)
        can_false = next(searcher.solutions(classical=True, fixed={i: _F}), None)
        if can_true is None:
            statuses[name] = STATUS_CONTRADICTION
        elif can_false is None:
            statuses[name] = STATUS_TAUTOLOGY
        else:
            statuses[name] = STATUS_CONTINGENT
    return SentenceClassification(False, statuses, para_sentences)
