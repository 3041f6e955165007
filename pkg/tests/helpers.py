"""Shared test oracles and fuzz generators.

Everything here is independent of the library's computation paths: the
edit-distance oracle is a plain recursion on the textbook definition, and
the matching oracle is an exhaustive augmenting-path search.
"""

from __future__ import annotations

import random
from functools import lru_cache

from kgeval import Instance, normalize_document, normalize_phrase


def lev_oracle(a, b) -> int:
    """Reference Levenshtein distance: memoized plain recursion."""

    @lru_cache(maxsize=None)
    def rec(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        cost = 0 if a[i - 1] == b[j - 1] else 1
        return min(rec(i - 1, j - 1) + cost, rec(i, j - 1) + 1, rec(i - 1, j) + 1)

    return rec(len(a), len(b))


def max_bipartite_matching(left_keys, right_keys) -> int:
    """Maximum one-to-one matching size where key equality is the edge relation."""
    match_of_right = [None] * len(right_keys)

    def try_assign(i, visited):
        for j, rk in enumerate(right_keys):
            if left_keys[i] == rk and j not in visited:
                visited.add(j)
                if match_of_right[j] is None or try_assign(match_of_right[j], visited):
                    match_of_right[j] = i
                    return True
        return False

    size = 0
    for i in range(len(left_keys)):
        if try_assign(i, set()):
            size += 1
    return size


def iter_rgs(length: int, max_labels: int = 4):
    """Restricted growth strings: canonical label sequences under renaming."""
    seq = [0] * length

    def rec(pos: int, used: int):
        if pos == length:
            yield tuple(seq)
            return
        for label in range(min(used + 1, max_labels)):
            seq[pos] = label
            yield from rec(pos + 1, used + 1 if label == used else used)

    yield from rec(0, 0)


def orbit_size(pattern, alphabet_size: int = 4) -> int:
    """Number of concrete sequences a canonical pattern stands for."""
    k = len(set(pattern))
    size = 1
    for i in range(k):
        size *= alphabet_size - i
    return size


def check_edit_distance_shard(task) -> tuple[int, int, int]:
    """Compare the production DP against the recursive oracle on one shard
    of the canonical (lp, ly) pattern block.

    Returns (patterns checked, mismatches, covered concrete pairs).
    """
    from kgeval import token_edit_distance

    lp, ly, shard, nshards = task
    checked = mismatches = covered = 0
    for idx, pattern in enumerate(iter_rgs(lp + ly)):
        if idx % nshards != shard:
            continue
        a, b = pattern[:lp], pattern[lp:]
        checked += 1
        covered += orbit_size(pattern)
        if token_edit_distance(a, b) != lev_oracle(a, b):
            mismatches += 1
    return checked, mismatches, covered


# ---------------------------------------------------------------------------
# fuzz vocabulary and instance generators

_ROOTS = (
    "form nation relate gener process predict adjust depend act connect "
    "operate create direct express inform instruct construct present "
    "digit vital final local global rational legal moral equal several "
    "hope care use state grade note size time code base line name rate "
    "learn train test search match parse merge split sort rank score "
    "graph node edge tree leaf root path cycle flow net work word text"
).split()

# derivational suffixes in natural stacking order (innermost first)
_DERIV_CHAINS = (
    (),
    ("al",),
    ("ize",),
    ("ate",),
    ("ment",),
    ("ance",),
    ("ous",),
    ("ive",),
    ("er",),
    ("ion",),
    ("al", "ize"),
    ("al", "ize", "ation"),
    ("ize", "ation"),
    ("ate", "ion"),
    ("ful",),
    ("ness",),
    ("ful", "ness"),
    ("ous", "ness"),
    ("ive", "ness"),
    ("al", "ly"),
    ("ous", "ly"),
)

_INFLECTIONS = ("", "s", "es", "ed", "ing")


def natural_words(n: int, seed: int = 7) -> list[str]:
    """Deterministic fuzz corpus of morphologically plausible words."""
    rng = random.Random(seed)
    words = []
    for _ in range(n):
        w = rng.choice(_ROOTS)
        for suffix in rng.choice(_DERIV_CHAINS):
            if w.endswith("e") and suffix[0] in "aeiou":
                w = w[:-1]
            w += suffix
        inflection = rng.choice(_INFLECTIONS)
        if inflection:
            if w.endswith("e") and inflection[0] in "ei":
                w = w[:-1]
            w += inflection
        words.append(w)
    return words


def random_phrase_text(rng: random.Random, vocab, max_len: int = 4) -> str:
    return " ".join(rng.choice(vocab) for _ in range(rng.randint(1, max_len)))


def random_instance(rng: random.Random, vocab, max_phrases: int = 12) -> Instance:
    """Unconstrained fuzz instance (targets may share words across phrases)."""
    n_y = rng.randint(1, max_phrases)
    n_p = rng.randint(0, max_phrases)
    targets = tuple(normalize_phrase(random_phrase_text(rng, vocab)) for _ in range(n_y))
    predictions = tuple(
        normalize_phrase(random_phrase_text(rng, vocab)) for _ in range(n_p)
    )
    doc_text = " ".join(random_phrase_text(rng, vocab) for _ in range(4))
    return Instance(
        id=f"fuzz-{rng.randrange(10**9)}",
        document=normalize_document(doc_text),
        targets=targets,
        predictions=predictions,
    )


def separated_targets_instance(
    rng: random.Random, *, max_targets: int = 6, max_predictions: int = 8
):
    """Fuzz instance whose targets are pairwise stem-disjoint and repeat-free,
    with at least one prediction sharing a word with some target.

    Within this family the FG alignment laws hold exactly: FG = 1 iff the
    predictions are a permutation of the targets, and appending a duplicate
    prediction strictly lowers a positive FG (the duplicate always overdraws
    the word budget).
    """
    # stems are single letters; each target draws from its own letter pool
    pools = ["abc", "def", "ghi", "jkl", "mno", "pqr"]
    n_y = rng.randint(1, max_targets)
    targets = []
    for pool in pools[:n_y]:
        k = rng.randint(1, 3)
        letters = rng.sample(pool, k)
        targets.append(normalize_phrase(" ".join(letters)))
    n_p = rng.randint(1, max_predictions)
    predictions = []
    for _ in range(n_p):
        if rng.random() < 0.5:
            predictions.append(rng.choice(targets))
        else:
            k = rng.randint(1, 3)
            letters = [rng.choice("abcdefghijklmnopqr" + "uvwxz") for _ in range(k)]
            predictions.append(normalize_phrase(" ".join(letters)))
    # guarantee a positive score list entry
    predictions[0] = rng.choice(targets)
    return tuple(targets), tuple(predictions)
