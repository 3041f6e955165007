"""Instance-level fine-grained (FG) score.

Takes a per-prediction score list and applies two instance-level
penalties: a repetition penalty that zeroes predictions whose words
overdraw the target word budget, and a quantity coefficient that
discounts predicting too few or too many phrases.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

from .similarity import ScoreList
from .textnorm import Phrase


@dataclass(frozen=True)
class WordBudget:
    """Multiset of stems across all target phrases."""

    counts: Mapping[str, int]

    @classmethod
    def from_targets(cls, Y: Sequence[Phrase]) -> "WordBudget":
        counts = Counter()
        for y in Y:
            counts.update(y.stems)
        return cls(counts)


@dataclass(frozen=True)
class InstanceScore:
    fg: float
    base_mean: float
    corr: float
    adjusted_scores: tuple[float, ...]
    zeroed: frozenset[int]


def repetition_penalty(
    scores: ScoreList, P: Sequence[Phrase], Y: Sequence[Phrase]
) -> tuple[tuple[float, ...], frozenset[int]]:
    """Zero out predictions that overconsume the target word budget.

    Predictions are processed in descending score order (ties keep original
    order). Each stem that exists in the budget consumes one unit; the
    consumption that first exceeds the budget zeroes that prediction, and
    its remaining stems still consume budget. Returns the adjusted scores
    in original prediction order plus the zeroed index set.
    """
    if len(scores) != len(P):
        raise ValueError("score list is not aligned with the predictions")
    budget = WordBudget.from_targets(Y).counts
    consumed: Counter[str] = Counter()
    adjusted = list(scores.scores)
    zeroed = set()
    order = sorted(range(len(P)), key=lambda i: -adjusted[i])
    for i in order:
        for s in P[i].stems:
            if s in budget:
                consumed[s] += 1
                if consumed[s] > budget[s]:
                    adjusted[i] = 0.0
                    zeroed.add(i)
    return tuple(adjusted), frozenset(zeroed)


def quantity_coefficient(n_targets: int, n_predictions: int) -> float:
    """1 - (|Y| - |P|)^2 / max(|Y|, |P|)^2; 1.0 when the counts are equal."""
    if n_targets == n_predictions:
        return 1.0
    larger = max(n_targets, n_predictions)
    return 1.0 - (n_targets - n_predictions) ** 2 / larger**2


def fg_score(P: Sequence[Phrase], Y: Sequence[Phrase], scores: ScoreList) -> InstanceScore:
    """Fine-grained instance score: penalized score-list mean times the
    quantity coefficient.

    Edge cases: no predictions against a non-empty target set scores 0;
    both sides empty scores 1; predictions against an empty target set
    score 0 through the quantity coefficient.
    """
    if not P and not Y:
        return InstanceScore(1.0, 1.0, 1.0, (), frozenset())
    if not P:
        return InstanceScore(0.0, 0.0, 0.0, (), frozenset())
    adjusted, zeroed = repetition_penalty(scores, P, Y)
    base_mean = sum(adjusted) / len(P)
    corr = quantity_coefficient(len(Y), len(P))
    return InstanceScore(base_mean * corr, base_mean, corr, adjusted, zeroed)
