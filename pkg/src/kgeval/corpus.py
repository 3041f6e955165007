"""Corpus ingestion, per-instance orchestration, macro aggregation,
histogram reports, and scorer-training-corpus export.

Input is line-delimited JSON, one instance per line, with fields ``id``,
``document`` (optional), ``keyphrases`` (targets) and ``predictions``.
A two-file mode joins a references file and a predictions file on ``id``.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Iterator, Optional, Sequence

from . import exact, finegrained, similarity
from .textnorm import Document, EmptyPhrase, Phrase, normalize_document, normalize_phrase

FG_BUCKETS = ("[0.0,0.4)", "[0.4,0.7)", "[0.7,1.0)", "[1.0]")
TOKEN_F1_BUCKETS = ("[<0]", "[0.0,0.4)", "[0.4,0.7)", "[0.7,1.0)", "[1.0]")

KNOWN_METRICS = ("fg", "f1@5", "f1@m", "token")
SPLITS = ("all", "present", "absent")


class ParseError(ValueError):
    def __init__(self, path: str, line_no: int, reason: str):
        super().__init__(f"{path}:{line_no}: {reason}")
        self.path = path
        self.line_no = line_no
        self.reason = reason


class JoinError(ValueError):
    def __init__(self, orphans_refs: Sequence[str], orphans_preds: Sequence[str]):
        parts = []
        if orphans_refs:
            parts.append(f"ids only in references: {sorted(orphans_refs)}")
        if orphans_preds:
            parts.append(f"ids only in predictions: {sorted(orphans_preds)}")
        super().__init__("; ".join(parts))
        self.orphans_refs = tuple(orphans_refs)
        self.orphans_preds = tuple(orphans_preds)


@dataclass(frozen=True)
class Instance:
    """One document's target set Y and prediction set P."""

    id: str
    document: Optional[Document]
    targets: tuple[Phrase, ...]
    predictions: tuple[Phrase, ...]
    dropped_phrases: int = 0


@dataclass(frozen=True)
class ScorerTuple:
    """One (prediction, best target, combined score) training example."""

    prediction: str
    target: str
    score: float


@dataclass(frozen=True)
class EvalConfig:
    metrics: tuple[str, ...] = ("fg", "f1@5", "f1@m")
    splits: tuple[str, ...] = ("all",)
    dedup: bool = True
    histograms: bool = True
    per_instance: bool = False
    jobs: int = 1

    def __post_init__(self):
        if not self.metrics:
            raise ValueError("at least one metric is required")
        for m in self.metrics:
            if m not in KNOWN_METRICS:
                raise ValueError(f"unknown metric {m!r}; known: {KNOWN_METRICS}")
        for s in self.splits:
            if s not in SPLITS:
                raise ValueError(f"unknown split {s!r}; known: {SPLITS}")


@dataclass
class CorpusReport:
    total_instances: int
    primary_split: str
    splits: dict
    skipped_ids: tuple[str, ...]
    phrases_dropped: int
    histograms: Optional[dict]
    per_instance: Optional[list]

    def to_dict(self) -> dict:
        primary = self.splits[self.primary_split]
        out = {
            "summary": {
                "instances": self.total_instances,
                "split": self.primary_split,
                "evaluated": primary["evaluated"],
                "metrics": primary["metrics"],
            },
            "splits": self.splits,
            "histograms": self.histograms,
            "skipped": {
                "instances": len(self.skipped_ids),
                "ids": list(self.skipped_ids),
                "phrases_dropped": self.phrases_dropped,
            },
        }
        if self.per_instance is not None:
            out["per_instance"] = self.per_instance
        return _round_floats(out)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)


def _round_floats(obj):
    if isinstance(obj, float):
        return round(obj, 6)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_round_floats(v) for v in obj]
    return obj


def _normalize_many(raw: Sequence, *, stem: bool) -> tuple[list[Phrase], int]:
    phrases = []
    dropped = 0
    for item in raw:
        try:
            phrases.append(normalize_phrase(str(item), stem=stem))
        except EmptyPhrase:
            dropped += 1
    return phrases, dropped


def _parse_line(path: str, line_no: int, line: str) -> dict:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(path, line_no, f"malformed JSON ({exc.msg})") from exc
    if not isinstance(obj, dict):
        raise ParseError(path, line_no, "expected a JSON object")
    if "id" not in obj:
        raise ParseError(path, line_no, "missing 'id' field")
    return obj


def _iter_jsonl(path: str) -> Iterator[tuple[int, dict]]:
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            yield line_no, _parse_line(path, line_no, line)


def load_corpus(
    path: str, *, predictions_path: Optional[str] = None, stem: bool = True
) -> list[Instance]:
    """Load instances from one JSONL file, or join references with a
    separate predictions file on id.

    Phrases that normalize to nothing are dropped and counted on the
    instance. Duplicate or orphan ids raise.
    """
    predictions_by_id: Optional[dict[str, list]] = None
    if predictions_path is not None:
        predictions_by_id = {}
        for line_no, obj in _iter_jsonl(predictions_path):
            key = str(obj["id"])
            if key in predictions_by_id:
                raise ParseError(predictions_path, line_no, f"duplicate id {key!r}")
            predictions_by_id[key] = obj.get("predictions", [])

    instances = []
    seen = set()
    for line_no, obj in _iter_jsonl(path):
        key = str(obj["id"])
        if key in seen:
            raise ParseError(path, line_no, f"duplicate id {key!r}")
        seen.add(key)
        keyphrases = obj.get("keyphrases", [])
        if not isinstance(keyphrases, list):
            raise ParseError(path, line_no, "'keyphrases' must be a list")
        if predictions_by_id is None:
            raw_predictions = obj.get("predictions", [])
        else:
            raw_predictions = predictions_by_id.get(key)
            if raw_predictions is None:
                raise JoinError([key], [])
        if not isinstance(raw_predictions, list):
            raise ParseError(path, line_no, "'predictions' must be a list")
        targets, dropped_y = _normalize_many(keyphrases, stem=stem)
        predictions, dropped_p = _normalize_many(raw_predictions, stem=stem)
        document = None
        if obj.get("document") is not None:
            document = normalize_document(str(obj["document"]), stem=stem)
        instances.append(
            Instance(
                id=key,
                document=document,
                targets=tuple(targets),
                predictions=tuple(predictions),
                dropped_phrases=dropped_y + dropped_p,
            )
        )
    if predictions_by_id is not None:
        orphans = [k for k in predictions_by_id if k not in seen]
        if orphans:
            raise JoinError([], orphans)
    return instances


def _split_views(inst: Instance, splits: Sequence[str]):
    views = {}
    for s in splits:
        if s == "all":
            views[s] = (inst.targets, inst.predictions)
        else:
            parts = exact.split_present_absent(inst)
            if s == "present":
                views[s] = (parts.present_targets, parts.present_predictions)
            else:
                views[s] = (parts.absent_targets, parts.absent_predictions)
    return views


def _score_details(P: Sequence[Phrase], Y: Sequence[Phrase]):
    """Score list plus each prediction's best token-F1 over the targets."""
    entries = []
    tf1_best = []
    for i, p in enumerate(P):
        best_j, best, best_tf1 = 0, -1.0, 0.0
        for j, y in enumerate(Y):
            ps = similarity.pair_score(p, y)
            if ps.combined > best:
                best_j, best = j, ps.combined
            if ps.token_f1 > best_tf1:
                best_tf1 = ps.token_f1
        entries.append(similarity.ScoreEntry(i, best_j, best))
        tf1_best.append(best_tf1)
    return similarity.ScoreList(tuple(entries)), tf1_best


def _fg_bucket(value: float) -> str:
    if value == 1.0:
        return FG_BUCKETS[3]
    if value >= 0.7:
        return FG_BUCKETS[2]
    if value >= 0.4:
        return FG_BUCKETS[1]
    return FG_BUCKETS[0]


def _token_f1_bucket(value: float) -> str:
    if value == 1.0:
        return TOKEN_F1_BUCKETS[4]
    if value >= 0.7:
        return TOKEN_F1_BUCKETS[3]
    if value >= 0.4:
        return TOKEN_F1_BUCKETS[2]
    return TOKEN_F1_BUCKETS[1]


def _evaluate_instance(inst: Instance, config: EvalConfig) -> dict:
    """Per-instance metric values and histogram contributions, per split."""
    row = {"id": inst.id, "splits": {}}
    for split_name, (Y, P) in _split_views(inst, config.splits).items():
        if not Y:
            row["splits"][split_name] = None
            continue
        metrics = {}
        hist = None
        if "fg" in config.metrics:
            scores, tf1_best = _score_details(P, Y)
            inst_score = finegrained.fg_score(P, Y, scores)
            metrics["fg"] = inst_score.fg
            if config.histograms and split_name == config.splits[0]:
                pads = max(0, 5 - len(P))
                hist = {
                    "fg": _fg_bucket(inst_score.fg),
                    "token_f1": [_token_f1_bucket(v) for v in tf1_best]
                    + [TOKEN_F1_BUCKETS[0]] * pads,
                }
        if "f1@5" in config.metrics or "f1@m" in config.metrics or "token" in config.metrics:
            slate = exact.dedup(P) if config.dedup else list(P)
            if "f1@5" in config.metrics:
                metrics["f1@5"] = exact.f1_at_5(slate, Y).f1
            if "f1@m" in config.metrics:
                metrics["f1@m"] = exact.f1_at_m(slate, Y).f1
            if "token" in config.metrics:
                prf = exact.token_corpus_prf(slate, Y)
                metrics["token_p"] = prf.precision
                metrics["token_r"] = prf.recall
                metrics["token_f"] = prf.f1
        row["splits"][split_name] = {"metrics": metrics, "hist": hist}
    return row


def evaluate_corpus(instances: Sequence[Instance], config: EvalConfig) -> CorpusReport:
    """Score every instance and macro-average each requested metric.

    Instances whose targets all normalized away are skipped and reported,
    not scored as zero. With ``jobs > 1`` instances are scored in a
    process pool; the reduction runs in instance order either way, so
    reports are identical for any worker count.
    """
    skipped = [inst.id for inst in instances if not inst.targets]
    valid = [inst for inst in instances if inst.targets]
    if not valid:
        raise ValueError("no instance has a non-empty target set")
    phrases_dropped = sum(inst.dropped_phrases for inst in instances)

    worker = partial(_evaluate_instance, config=config)
    if config.jobs > 1 and len(valid) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            chunk = max(1, len(valid) // (config.jobs * 4))
            rows = list(pool.map(worker, valid, chunksize=chunk))
    else:
        rows = [worker(inst) for inst in valid]

    splits_out = {}
    for split_name in config.splits:
        sums = {}
        evaluated = 0
        split_skipped = 0
        for r in rows:
            cell = r["splits"][split_name]
            if cell is None:
                split_skipped += 1
                continue
            evaluated += 1
            for k, v in cell["metrics"].items():
                sums[k] = sums.get(k, 0.0) + v
        metrics = {k: (v / evaluated if evaluated else 0.0) for k, v in sums.items()}
        splits_out[split_name] = {
            "evaluated": evaluated,
            "skipped_empty_targets": split_skipped,
            "metrics": metrics,
        }

    histograms = None
    if config.histograms and "fg" in config.metrics:
        fg_counts = {b: 0 for b in FG_BUCKETS}
        tf1_counts = {b: 0 for b in TOKEN_F1_BUCKETS}
        for r in rows:
            cell = r["splits"][config.splits[0]]
            if cell is None or cell["hist"] is None:
                continue
            fg_counts[cell["hist"]["fg"]] += 1
            for b in cell["hist"]["token_f1"]:
                tf1_counts[b] += 1
        histograms = {"split": config.splits[0], "fg": fg_counts, "token_f1": tf1_counts}

    per_instance = None
    if config.per_instance:
        per_instance = [
            {
                "id": r["id"],
                "splits": {
                    name: (cell["metrics"] if cell is not None else None)
                    for name, cell in r["splits"].items()
                },
            }
            for r in rows
        ]

    return CorpusReport(
        total_instances=len(instances),
        primary_split=config.splits[0],
        splits=splits_out,
        skipped_ids=tuple(skipped),
        phrases_dropped=phrases_dropped,
        histograms=histograms,
        per_instance=per_instance,
    )


def export_scorer_corpus(
    instances: Sequence[Instance], low: float = 0.0, high: float = 1.0
) -> Iterator[ScorerTuple]:
    """Emit (prediction, argmax target, combined score) tuples for scorer training.

    Tuples with score < low or > high are screened out; the defaults keep
    everything. Texts are surface forms (pre-stemming). Order is instance
    order, then prediction order.
    """
    if not 0.0 <= low < high <= 1.0:
        raise ValueError(f"thresholds must satisfy 0 <= low < high <= 1, got {low}, {high}")
    for inst in instances:
        if not inst.targets:
            continue
        scores = similarity.score_list(inst.predictions, inst.targets)
        for entry in scores:
            if entry.score < low or entry.score > high:
                continue
            yield ScorerTuple(
                prediction=inst.predictions[entry.prediction].text,
                target=inst.targets[entry.target].text,
                score=entry.score,
            )
