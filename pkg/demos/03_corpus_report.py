#!/usr/bin/env python3
"""Evaluate a small corpus file and read the report.

Writes a three-instance JSONL corpus to a temp directory, evaluates it
with the library (the `kgeval evaluate` subcommand produces the same
JSON), and prints the macro metrics, histograms, and the scorer-training
tuples that the same corpus exports.
"""

import json
import tempfile
from pathlib import Path

from kgeval import EvalConfig, evaluate_corpus, export_scorer_corpus, load_corpus

ROWS = [
    {
        "id": "doc-1",
        "document": "we study natural language processing tasks and graph theory",
        "keyphrases": ["natural language processing", "graph theory"],
        "predictions": ["natural language processing", "graph theory"],
    },
    {
        "id": "doc-2",
        "document": "a survey of keyphrase generation with neural models",
        "keyphrases": ["keyphrase generation", "neural models"],
        "predictions": ["keyphrase extraction", "neural models", "neural models"],
    },
    {
        "id": "doc-3",
        "document": "reward shaping for sequence models",
        "keyphrases": ["reward shaping"],
        "predictions": ["apple tree"],
    },
]

with tempfile.TemporaryDirectory() as tmp:
    corpus_path = Path(tmp) / "corpus.jsonl"
    corpus_path.write_text("\n".join(json.dumps(r) for r in ROWS) + "\n", encoding="utf-8")

    instances = load_corpus(str(corpus_path))
    config = EvalConfig(metrics=("fg", "f1@5", "f1@m", "token"), per_instance=True)
    report = evaluate_corpus(instances, config)

    payload = report.to_dict()
    print("macro metrics over", payload["summary"]["evaluated"], "instances:")
    for name, value in payload["summary"]["metrics"].items():
        print(f"  {name:10s} {value:.4f}")

    print("\ninstance-score histogram:", payload["histograms"]["fg"])
    print("per-instance rows:")
    for row in payload["per_instance"]:
        print(f"  {row['id']}: {row['splits']['all']}")

    print("\nscorer-training tuples (screened to 0.05..0.95):")
    for t in export_scorer_corpus(instances, low=0.05, high=0.95):
        print(f"  ({t.prediction!r}, {t.target!r}, {t.score:.4f})")
    print("\nexact matches and total mismatches fall outside the band, so only")
    print("informative partial matches are exported.")
