"""Conventional phrase-level metrics: F1@5, F1@M, token-level corpus PRF,
and the present/absent split.

Exact match means equality of stem sequences. Matching is one-to-one and
greedy in prediction order: a target already credited to an earlier
prediction cannot be matched again.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import TYPE_CHECKING, NamedTuple, Optional, Sequence

from .textnorm import Document, Phrase, Token, is_present

if TYPE_CHECKING:
    from .corpus import Instance


class MissingDocument(ValueError):
    """A present/absent split was requested for an instance with no document."""


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, matched: int, n_predicted: int, n_targets: int) -> "PRF":
        precision = matched / n_predicted if n_predicted > 0 else 0.0
        recall = matched / n_targets if n_targets > 0 else 0.0
        if precision + recall == 0:
            return cls(precision, recall, 0.0)
        return cls(precision, recall, 2 * precision * recall / (precision + recall))


@dataclass(frozen=True)
class MatchVector:
    flags: tuple[bool, ...]
    matched_targets: tuple[Optional[int], ...]

    @property
    def num_matches(self) -> int:
        return sum(self.flags)


class SplitInstance(NamedTuple):
    present_targets: tuple[Phrase, ...]
    present_predictions: tuple[Phrase, ...]
    absent_targets: tuple[Phrase, ...]
    absent_predictions: tuple[Phrase, ...]


def match_predictions(P: Sequence[Phrase], Y: Sequence[Phrase]) -> MatchVector:
    """Greedy one-to-one exact matching of predictions against targets."""
    unused = {}
    for j, y in enumerate(Y):
        unused.setdefault(y.stems, []).append(j)
    flags = []
    matched = []
    for p in P:
        slots = unused.get(p.stems)
        if slots:
            flags.append(True)
            matched.append(slots.pop(0))
        else:
            flags.append(False)
            matched.append(None)
    return MatchVector(tuple(flags), tuple(matched))


def dedup(P: Sequence[Phrase]) -> list[Phrase]:
    """Drop phrases whose stem sequence already occurred, keeping order."""
    seen = set()
    out = []
    for p in P:
        if p.stems in seen:
            continue
        seen.add(p.stems)
        out.append(p)
    return out


def _padding_phrase(i: int) -> Phrase:
    # tokenize() strips edge punctuation, so no real phrase can carry
    # angle brackets in its stems; these sentinels can never match.
    text = f"<pad-{i}>"
    return Phrase((Token(text, text),))


def f1_at_k(P: Sequence[Phrase], Y: Sequence[Phrase], k: int) -> PRF:
    """F1 over the first k predictions, padded to k with unmatchable sentinels."""
    if not Y:
        raise ValueError("f1_at_k requires a non-empty target set")
    slate = list(P[:k])
    while len(slate) < k:
        slate.append(_padding_phrase(len(slate)))
    matches = match_predictions(slate, Y)
    return PRF.from_counts(matches.num_matches, k, len(Y))


def f1_at_5(P: Sequence[Phrase], Y: Sequence[Phrase]) -> PRF:
    return f1_at_k(P, Y, 5)


def f1_at_m(P: Sequence[Phrase], Y: Sequence[Phrase]) -> PRF:
    """F1 over all predictions (variable number)."""
    if not Y:
        raise ValueError("f1_at_m requires a non-empty target set")
    if not P:
        return PRF(0.0, 0.0, 0.0)
    matches = match_predictions(P, Y)
    return PRF.from_counts(matches.num_matches, len(P), len(Y))


def split_present_absent(inst: "Instance") -> SplitInstance:
    """Partition targets and predictions by contiguous presence in the document."""
    if inst.document is None:
        raise MissingDocument(f"instance {inst.id!r} has no document text")
    doc: Document = inst.document
    present_y, absent_y, present_p, absent_p = [], [], [], []
    for y in inst.targets:
        (present_y if is_present(y, doc) else absent_y).append(y)
    for p in inst.predictions:
        (present_p if is_present(p, doc) else absent_p).append(p)
    return SplitInstance(
        tuple(present_y), tuple(present_p), tuple(absent_y), tuple(absent_p)
    )


def token_corpus_prf(P: Sequence[Phrase], Y: Sequence[Phrase]) -> PRF:
    """Pooled token-level PRF: all prediction stems vs all target stems."""
    if not Y:
        raise ValueError("token_corpus_prf requires a non-empty target set")
    pred_pool: Counter[str] = Counter()
    for p in P:
        pred_pool.update(p.stems)
    target_pool: Counter[str] = Counter()
    for y in Y:
        target_pool.update(y.stems)
    overlap = sum((pred_pool & target_pool).values())
    return PRF.from_counts(overlap, sum(pred_pool.values()), sum(target_pool.values()))
