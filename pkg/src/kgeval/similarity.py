"""Pairwise phrase similarity and per-prediction best-match score lists.

A prediction/target pair is scored by the average of two unit-interval
components: a normalized token-level edit distance and a token-multiset F1.
For a whole instance, each prediction is assigned the maximum combined
score over all targets; the same shape can instead be filled by an
external pair scorer (e.g. a learned similarity model) speaking a
line-delimited JSON protocol over a child process's standard streams.
"""

from __future__ import annotations

import json
import subprocess
import threading
from collections import Counter
from dataclasses import dataclass
from typing import Callable, NamedTuple, Protocol, Sequence

from .textnorm import EmptyPhrase, Phrase, normalize_phrase


class ScorerUnavailable(RuntimeError):
    """External pair scorer failed or returned unusable values."""


@dataclass(frozen=True)
class PairScore:
    """Similarity of one (prediction, target) pair."""

    ed: float
    token_f1: float
    combined: float
    raw_distance: int


class ScoreEntry(NamedTuple):
    prediction: int
    target: int
    score: float


@dataclass(frozen=True)
class ScoreList:
    """Best-match score per prediction, in original prediction order."""

    entries: tuple[ScoreEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def scores(self) -> tuple[float, ...]:
        return tuple(e.score for e in self.entries)


def token_edit_distance(a: Sequence[str], b: Sequence[str]) -> int:
    """Minimum add/delete/change operations turning token list a into b."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i in range(1, len(a) + 1):
        cur = [i] + [0] * len(b)
        ai = a[i - 1]
        for j in range(1, len(b) + 1):
            cost = 0 if ai == b[j - 1] else 1
            cur[j] = min(prev[j - 1] + cost, cur[j - 1] + 1, prev[j] + 1)
        prev = cur
    return prev[-1]


def edit_distance(p: Phrase, y: Phrase) -> int:
    return token_edit_distance(p.stems, y.stems)


def ed_score(p: Phrase, y: Phrase) -> float:
    """1 - edit_distance / longer length; 1.0 for identical stem sequences."""
    return 1.0 - edit_distance(p, y) / max(p.length, y.length)


def token_f1(p: Phrase, y: Phrase) -> float:
    """F1 over the stem multisets of the two phrases."""
    overlap = sum((Counter(p.stems) & Counter(y.stems)).values())
    if overlap == 0:
        return 0.0
    precision = overlap / p.length
    recall = overlap / y.length
    return 2 * precision * recall / (precision + recall)


def pair_score(p: Phrase, y: Phrase) -> PairScore:
    d = edit_distance(p, y)
    ed = 1.0 - d / max(p.length, y.length)
    tf1 = token_f1(p, y)
    return PairScore(ed=ed, token_f1=tf1, combined=(ed + tf1) / 2, raw_distance=d)


def score_list(P: Sequence[Phrase], Y: Sequence[Phrase]) -> ScoreList:
    """Best combined pair score per prediction; ties go to the lowest target index."""
    if not Y:
        raise ValueError("score_list requires a non-empty target set")
    entries = []
    for i, p in enumerate(P):
        best_j, best = 0, -1.0
        for j, y in enumerate(Y):
            s = pair_score(p, y).combined
            if s > best:
                best_j, best = j, s
        entries.append(ScoreEntry(i, best_j, best))
    return ScoreList(tuple(entries))


class PairScorer(Protocol):
    """Batched scorer for (prediction text, target text) pairs."""

    def score_pairs(self, pairs: Sequence[tuple[str, str]]) -> list[float]: ...


def score_list_external(
    P: Sequence[Phrase], Y: Sequence[Phrase], pair_scorer: PairScorer
) -> ScoreList:
    """score_list with pair similarities supplied by an external scorer.

    Pairs are sent in (prediction, target) order as surface text. Raises
    ScorerUnavailable on transport failure, arity mismatch, or scores
    outside [0, 1].
    """
    if not Y:
        raise ValueError("score_list_external requires a non-empty target set")
    if not P:
        return ScoreList(())
    pairs = [(p.text, y.text) for p in P for y in Y]
    try:
        scores = pair_scorer.score_pairs(pairs)
    except ScorerUnavailable:
        raise
    except Exception as exc:
        raise ScorerUnavailable(f"external scorer failed: {exc}") from exc
    if len(scores) != len(pairs):
        raise ScorerUnavailable(
            f"external scorer returned {len(scores)} scores for {len(pairs)} pairs"
        )
    for s in scores:
        if not isinstance(s, (int, float)) or not 0.0 <= s <= 1.0:
            raise ScorerUnavailable(f"external scorer returned out-of-range score: {s!r}")
    entries = []
    n_y = len(Y)
    for i in range(len(P)):
        row = scores[i * n_y : (i + 1) * n_y]
        best_j = max(range(n_y), key=lambda j: (row[j], -j))
        entries.append(ScoreEntry(i, best_j, float(row[best_j])))
    return ScoreList(tuple(entries))


class FunctionScorer:
    """Adapts a plain (p_text, y_text) -> float function to the scorer protocol."""

    def __init__(self, fn: Callable[[str, str], float]):
        self._fn = fn

    def score_pairs(self, pairs: Sequence[tuple[str, str]]) -> list[float]:
        return [float(self._fn(p, y)) for p, y in pairs]


class InternalPairScorer:
    """Scores raw texts with the built-in combined pair score.

    Texts that normalize to nothing score 0.0. Wiring this through the
    external-scorer path reproduces score_list exactly.
    """

    def __init__(self, *, stem: bool = True):
        self._stem = stem

    def score_pairs(self, pairs: Sequence[tuple[str, str]]) -> list[float]:
        out = []
        for p_text, y_text in pairs:
            try:
                p = normalize_phrase(p_text, stem=self._stem)
                y = normalize_phrase(y_text, stem=self._stem)
            except EmptyPhrase:
                out.append(0.0)
                continue
            out.append(pair_score(p, y).combined)
        return out


class SubprocessScorer:
    """Pair scorer backed by a child process.

    Protocol: one JSON request per line on the child's stdin,
    ``{"pairs": [[p, y], ...]}``; one JSON response per line on its
    stdout, ``{"scores": [s, ...]}`` with equal arity and s in [0, 1].
    One batch is in flight at a time per handle.
    """

    def __init__(self, cmd: Sequence[str]):
        self._cmd = list(cmd)
        self._proc: subprocess.Popen | None = None
        self._lock = threading.Lock()

    def _ensure_started(self) -> subprocess.Popen:
        if self._proc is None or self._proc.poll() is not None:
            self._proc = subprocess.Popen(
                self._cmd,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        return self._proc

    def score_pairs(self, pairs: Sequence[tuple[str, str]]) -> list[float]:
        with self._lock:
            try:
                proc = self._ensure_started()
                request = json.dumps({"pairs": [[p, y] for p, y in pairs]})
                proc.stdin.write(request + "\n")
                proc.stdin.flush()
                line = proc.stdout.readline()
            except (OSError, ValueError) as exc:
                raise ScorerUnavailable(f"scorer process I/O failed: {exc}") from exc
            if not line:
                raise ScorerUnavailable("scorer process closed its output stream")
            try:
                payload = json.loads(line)
                scores = payload["scores"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ScorerUnavailable(f"bad scorer response: {line!r}") from exc
            if not isinstance(scores, list):
                raise ScorerUnavailable(f"bad scorer response: {line!r}")
            return scores

    def close(self):
        if self._proc is not None:
            if self._proc.stdin:
                self._proc.stdin.close()
            self._proc.wait(timeout=10)
            self._proc = None

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()
