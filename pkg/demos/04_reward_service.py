#!/usr/bin/env python3
"""Drive the streaming reward service the way an RL trainer would.

Spawns `kgeval reward-serve` as a child process with an external pair
scorer plugged in, then streams newline-delimited JSON requests and reads
one response per line. The "fb" kind routes pair similarities through the
plugged scorer; with the built-in stub as the plug it reproduces "fg".
"""

import json
import subprocess
import sys

SCORER_CMD = f"{sys.executable} -m kgeval.pair_scorer_stub"

REQUESTS = [
    {
        "id": "step-1",
        "targets": ["natural language processing"],
        "predictions": ["natural language generation"],
        "reward_kind": "fg",
    },
    {
        "id": "step-1-continuous",
        "targets": ["natural language processing"],
        "predictions": ["natural language generation"],
        "reward_kind": "fb",
    },
    {
        "id": "step-2",
        "targets": ["natural language processing"],
        "predictions": ["natural language generation"],
        "reward_kind": "f1m",
    },
    {
        "id": "bad-request",
        "targets": [],
        "predictions": ["x"],
        "reward_kind": "fg",
    },
]

service = subprocess.Popen(
    [sys.executable, "-m", "kgeval.cli", "reward-serve", "--scorer-cmd", SCORER_CMD],
    stdin=subprocess.PIPE,
    stdout=subprocess.PIPE,
    text=True,
    bufsize=1,
)

try:
    for request in REQUESTS:
        service.stdin.write(json.dumps(request) + "\n")
        service.stdin.flush()
        response = json.loads(service.stdout.readline())
        if "error" in response:
            print(f"{request['id']:20s} -> error: {response['error']}")
        else:
            print(f"{request['id']:20s} -> reward {response['reward']:.6f} "
                  f"({request['reward_kind']})")
finally:
    service.stdin.close()
    service.wait(timeout=10)

print("\nthe fine-grained reward pays the partial match 2/3 while the exact-match")
print("reward pays zero; a malformed or invalid request yields an error response")
print("and the stream keeps serving.")
