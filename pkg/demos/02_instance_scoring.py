#!/usr/bin/env python3
"""Score one instance end to end and inspect the penalty machinery.

The instance score is the mean of each prediction's best-match pair
score, after two instance-level corrections: a repetition penalty that
zeroes predictions overdrawing the target word budget, and a quantity
coefficient that discounts predicting too few or too many phrases.
"""

from kgeval import (
    WordBudget,
    f1_at_5,
    f1_at_m,
    fg_score,
    normalize_phrase,
    score_list,
)

targets = [normalize_phrase(t) for t in ["natural language processing", "graph theory"]]
predictions = [
    normalize_phrase(p)
    for p in [
        "natural language processing",  # exact
        "natural language",             # partial, but overdraws natural/language
        "graph theory",                 # exact
        "apple tree",                   # unrelated
    ]
]

scores = score_list(predictions, targets)
print("best-match score per prediction:")
for entry in scores:
    p = predictions[entry.prediction]
    y = targets[entry.target]
    print(f"  {p.text:30s} -> {y.text:28s} {entry.score:.3f}")

budget = WordBudget.from_targets(targets)
print(f"\ntarget word budget: {dict(budget.counts)}")

inst = fg_score(predictions, targets, scores)
print(f"adjusted scores after repetition penalty: {[round(s, 3) for s in inst.adjusted_scores]}")
print(f"zeroed prediction indices: {sorted(inst.zeroed)}")
print(f"base mean {inst.base_mean:.4f} x quantity coefficient {inst.corr:.4f} "
      f"= instance score {inst.fg:.4f}")

print("\nfor comparison, the exact-match metrics on the same instance:")
print(f"  F1@M = {f1_at_m(predictions, targets).f1:.4f}")
print(f"  F1@5 = {f1_at_5(predictions, targets).f1:.4f}")
print("\nthe partial prediction 'natural language' contributes nothing to either")
print("exact-match metric, while the fine-grained score credits it (until the")
print("repetition penalty zeroes it for re-using budget words).")
