#!/usr/bin/env python3
"""Walk through the pairwise similarity components.

A prediction/target pair is compared on stems with two signals: a
normalized token-level edit distance (word order matters) and a token
multiset F1 (content matters). The combined score is their mean.
"""

from kgeval import normalize_phrase, pair_score

PAIRS = [
    ("natural language generation", "natural language processing"),
    ("natural language processing", "natural language processing"),
    ("apple tree", "natural language processing"),
    ("language natural processing", "natural language processing"),
    ("processing", "natural language processing"),
    ("natural natural natural", "natural language processing"),
]

print(f"{'prediction':32s} {'target':32s} {'ed':>6s} {'tokF1':>6s} {'comb':>6s}")
for p_text, y_text in PAIRS:
    p = normalize_phrase(p_text)
    y = normalize_phrase(y_text)
    ps = pair_score(p, y)
    print(f"{p_text:32s} {y_text:32s} {ps.ed:6.3f} {ps.token_f1:6.3f} {ps.combined:6.3f}")

print()
print("Notes:")
print(" - word order is what separates the swapped phrase from a perfect score;")
print(" - repeating one correct word scores poorly because tokens match as a")
print("   multiset: a repeated 'natural' cannot be credited three times;")
print(" - comparisons run on Porter stems, so inflection does not matter:")
p = normalize_phrase("processed systems")
y = normalize_phrase("processing system")
print(f"   {'processed systems'!r} vs {'processing system'!r} -> "
      f"combined {pair_score(p, y).combined:.3f}")
