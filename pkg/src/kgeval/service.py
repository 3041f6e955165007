"""Streaming reward service for reinforcement-learning trainers.

Speaks line-delimited JSON over stdio (default) or TCP: one request
object per line in, one response object per line out, in request order.
A bad request produces an error response, never a dead stream.

Request:  {"id": str, "targets": [str], "predictions": [str],
           "reward_kind": "fg" | "fb" | "f1m" | "f15"}
Response: {"id": str, "reward": float, "per_phrase": [[p, y, score], ...]}
          or {"id": str, "error": str}
"""

from __future__ import annotations

import json
import shlex
import socketserver
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import exact, finegrained, similarity
from .similarity import PairScorer, ScorerUnavailable, SubprocessScorer
from .textnorm import EmptyPhrase, normalize_phrase

REWARD_KINDS = ("fg", "fb", "f1m", "f15")


@dataclass(frozen=True)
class RewardRequest:
    id: Optional[str]
    targets: tuple[str, ...]
    predictions: tuple[str, ...]
    reward_kind: str


@dataclass(frozen=True)
class RewardResponse:
    id: Optional[str]
    reward: Optional[float] = None
    per_phrase: Optional[tuple] = None
    error: Optional[str] = None

    def to_dict(self) -> dict:
        if self.error is not None:
            return {"id": self.id, "error": self.error}
        return {
            "id": self.id,
            "reward": self.reward,
            "per_phrase": [list(row) for row in (self.per_phrase or ())],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)


def parse_request(obj) -> RewardRequest:
    if not isinstance(obj, dict):
        raise ValueError("request must be a JSON object")
    kind = obj.get("reward_kind")
    if kind not in REWARD_KINDS:
        raise ValueError(f"unknown reward_kind {kind!r}; expected one of {list(REWARD_KINDS)}")
    targets = obj.get("targets")
    predictions = obj.get("predictions", [])
    if not isinstance(targets, list) or not targets:
        raise ValueError("empty targets")
    if not isinstance(predictions, list):
        raise ValueError("'predictions' must be a list")
    req_id = obj.get("id")
    return RewardRequest(
        id=None if req_id is None else str(req_id),
        targets=tuple(str(t) for t in targets),
        predictions=tuple(str(p) for p in predictions),
        reward_kind=kind,
    )


def _normalize(texts: Sequence[str], *, stem: bool):
    phrases = []
    for t in texts:
        try:
            phrases.append(normalize_phrase(t, stem=stem))
        except EmptyPhrase:
            continue
    return phrases


def compute_reward(
    req: RewardRequest, *, stem: bool = True, scorer: Optional[PairScorer] = None
) -> RewardResponse:
    """Compute one reward; validation and scorer problems become error responses."""
    try:
        Y = _normalize(req.targets, stem=stem)
        if not Y:
            return RewardResponse(id=req.id, error="empty targets")
        P = _normalize(req.predictions, stem=stem)
        if req.reward_kind in ("fg", "fb"):
            if req.reward_kind == "fg":
                scores = similarity.score_list(P, Y)
            else:
                if scorer is None:
                    return RewardResponse(id=req.id, error="no external scorer configured")
                scores = similarity.score_list_external(P, Y, scorer)
            inst = finegrained.fg_score(P, Y, scores)
            per_phrase = tuple(
                (P[e.prediction].text, Y[e.target].text, e.score) for e in scores
            )
            return RewardResponse(id=req.id, reward=inst.fg, per_phrase=per_phrase)
        slate = exact.dedup(P)
        if req.reward_kind == "f15":
            prf = exact.f1_at_5(slate, Y)
            visible = slate[:5]
        else:
            prf = exact.f1_at_m(slate, Y)
            visible = slate
        matches = exact.match_predictions(visible, Y)
        per_phrase = tuple(
            (p.text, None if j is None else Y[j].text, 1.0 if flag else 0.0)
            for p, flag, j in zip(visible, matches.flags, matches.matched_targets)
        )
        return RewardResponse(id=req.id, reward=prf.f1, per_phrase=per_phrase)
    except ScorerUnavailable as exc:
        return RewardResponse(id=req.id, error=f"scorer failure: {exc}")


def batch_reward(
    requests: Sequence[RewardRequest],
    *,
    stem: bool = True,
    scorer: Optional[PairScorer] = None,
) -> list[RewardResponse]:
    """Positionally aligned responses; item failures never fail the batch."""
    return [compute_reward(r, stem=stem, scorer=scorer) for r in requests]


def handle_line(line: str, *, stem: bool = True, scorer: Optional[PairScorer] = None) -> str:
    """One request line in, one response line out (without the newline)."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        return RewardResponse(id=None, error=f"malformed JSON: {exc.msg}").to_json()
    try:
        req = parse_request(obj)
    except ValueError as exc:
        req_id = obj.get("id") if isinstance(obj, dict) else None
        return RewardResponse(
            id=None if req_id is None else str(req_id), error=str(exc)
        ).to_json()
    return compute_reward(req, stem=stem, scorer=scorer).to_json()


class _RewardHandler(socketserver.StreamRequestHandler):
    def handle(self):
        for raw in self.rfile:
            line = raw.decode("utf-8", errors="replace")
            if not line.strip():
                continue
            response = handle_line(line, stem=self.server.stem, scorer=self.server.scorer)
            try:
                self.wfile.write(response.encode("utf-8") + b"\n")
                self.wfile.flush()
            except (BrokenPipeError, ConnectionResetError):
                return


class RewardTCPServer(socketserver.ThreadingTCPServer):
    """Serves concurrent connections; requests within one connection run in order."""

    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address, *, stem: bool = True, scorer: Optional[PairScorer] = None):
        super().__init__(address, _RewardHandler)
        self.stem = stem
        self.scorer = scorer


def serve_stdio(*, stem: bool = True, scorer: Optional[PairScorer] = None,
                in_stream=None, out_stream=None) -> None:
    """Serve until end-of-input on the given streams (default stdio)."""
    fin = in_stream if in_stream is not None else sys.stdin
    fout = out_stream if out_stream is not None else sys.stdout
    for line in fin:
        if not line.strip():
            continue
        fout.write(handle_line(line, stem=stem, scorer=scorer) + "\n")
        fout.flush()


def serve(
    transport: str = "stdio",
    listen: str = "127.0.0.1:7469",
    scorer_cmd: Optional[str] = None,
    *,
    stem: bool = True,
) -> None:
    """Run the reward service until end-of-input (stdio) or interrupt (TCP).

    With ``scorer_cmd`` set, "fb" requests are scored by that child process
    via the external pair-scorer protocol; the child is shared and batches
    are serialized.
    """
    scorer = SubprocessScorer(shlex.split(scorer_cmd)) if scorer_cmd else None
    try:
        if transport == "stdio":
            serve_stdio(stem=stem, scorer=scorer)
        elif transport == "tcp":
            host, _, port = listen.rpartition(":")
            if not host:
                raise ValueError(f"--listen must look like host:port, got {listen!r}")
            server = RewardTCPServer((host, int(port)), stem=stem, scorer=scorer)
            with server:
                bound = server.server_address
                print(f"listening on {bound[0]}:{bound[1]}", file=sys.stderr, flush=True)
                server.serve_forever()
        else:
            raise ValueError(f"unknown transport {transport!r}")
    finally:
        if scorer is not None:
            scorer.close()
