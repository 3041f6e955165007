"""Reference external pair scorer speaking the child-process protocol.

Reads ``{"pairs": [[p, y], ...]}`` lines on stdin and answers
``{"scores": [...]}`` lines on stdout, scoring each pair with the
built-in combined similarity. Useful as a drop-in scorer plug for
testing the externally-scored reward path: plugged into the service,
"fb" rewards reproduce "fg" rewards exactly.

Run with: python -m kgeval.pair_scorer_stub [--no-stem]
"""

from __future__ import annotations

import json
import sys

from .similarity import InternalPairScorer


def main(argv=None) -> int:
    args = sys.argv[1:] if argv is None else argv
    scorer = InternalPairScorer(stem="--no-stem" not in args)
    for line in sys.stdin:
        if not line.strip():
            continue
        try:
            payload = json.loads(line)
            pairs = [(str(p), str(y)) for p, y in payload["pairs"]]
            scores = scorer.score_pairs(pairs)
            out = {"scores": scores}
        except Exception as exc:  # protocol requires one response per line
            out = {"error": str(exc)}
        sys.stdout.write(json.dumps(out) + "\n")
        sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
