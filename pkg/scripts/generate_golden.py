#!/usr/bin/env python3
"""Regenerate tests/data/golden_instances.json.

Fifty deterministic reward requests spanning the fg / f1m / f15 kinds,
with expected rewards computed by the library. The file anchors the
wire-protocol contract tests here and in the TypeScript client package;
the Python acceptance suite additionally recomputes every expectation
from the library at test time, so this file can always be rebuilt.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from kgeval import RewardRequest, compute_reward

VOCAB = (
    "natural language processing generation model graph neural network "
    "keyphrase extraction evaluation metric reward learning deep transfer "
    "attention transformer decoding search beam policy gradient training"
).split()

KINDS = ("fg", "f1m", "f15")


def random_phrase(rng: random.Random) -> str:
    return " ".join(rng.choice(VOCAB) for _ in range(rng.randint(1, 4)))


def main() -> None:
    rng = random.Random(20240901)
    items = []
    for i in range(50):
        kind = KINDS[i % len(KINDS)]
        n_targets = rng.randint(1, 6)
        targets = [random_phrase(rng) for _ in range(n_targets)]
        n_predictions = rng.randint(0, 7)
        predictions = []
        for _ in range(n_predictions):
            if rng.random() < 0.4:
                predictions.append(rng.choice(targets))
            else:
                predictions.append(random_phrase(rng))
        request = RewardRequest(
            id=f"golden-{i}",
            targets=tuple(targets),
            predictions=tuple(predictions),
            reward_kind=kind,
        )
        response = compute_reward(request)
        assert response.error is None, response.error
        items.append(
            {
                "id": request.id,
                "targets": targets,
                "predictions": predictions,
                "reward_kind": kind,
                "expected_reward": response.reward,
            }
        )
    out = Path(__file__).resolve().parent.parent / "tests" / "data" / "golden_instances.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps({"instances": items}, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {len(items)} instances to {out}")


if __name__ == "__main__":
    main()
