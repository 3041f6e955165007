"""Text normalization shared by every metric.

All matching in the toolkit (exact match, token F1, edit distance, word
budgets, presence tests) runs over one canonical form: lowercased,
edge-punctuation-stripped tokens reduced to their Porter stems. Pass
``stem=False`` to the normalizers to compare on surfaces instead.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from functools import cached_property

from . import porter

_EDGE_PUNCT = string.punctuation


class EmptyPhrase(ValueError):
    """Raised when a phrase normalizes to zero tokens."""


@dataclass(frozen=True)
class Token:
    surface: str
    stem: str


@dataclass(frozen=True)
class Phrase:
    """A normalized keyphrase: an ordered, non-empty token sequence."""

    tokens: tuple[Token, ...]

    def __post_init__(self):
        if not self.tokens:
            raise EmptyPhrase("phrase has no tokens")

    @property
    def length(self) -> int:
        return len(self.tokens)

    @cached_property
    def stems(self) -> tuple[str, ...]:
        return tuple(t.stem for t in self.tokens)

    @cached_property
    def surfaces(self) -> tuple[str, ...]:
        return tuple(t.surface for t in self.tokens)

    @property
    def text(self) -> str:
        """Surface form of the phrase (pre-stemming), space-joined."""
        return " ".join(self.surfaces)


@dataclass(frozen=True)
class Document:
    """A normalized source document, token order preserved."""

    tokens: tuple[Token, ...]

    @cached_property
    def stems(self) -> tuple[str, ...]:
        return tuple(t.stem for t in self.tokens)


def stem(token: str) -> str:
    """Porter-stem a lowercase word. Idempotent."""
    return porter.stem(token)


def tokenize(raw: str, *, stem: bool = True) -> list[Token]:
    """Lowercase, split on whitespace, strip edge punctuation.

    Tokens that are pure punctuation are dropped. Digits and interior
    hyphens are kept. With ``stem=False`` the stem field mirrors the
    surface form.
    """
    tokens = []
    for piece in raw.lower().split():
        surface = piece.strip(_EDGE_PUNCT)
        if not surface:
            continue
        tokens.append(Token(surface, porter.stem(surface) if stem else surface))
    return tokens


def normalize_phrase(raw: str, *, stem: bool = True) -> Phrase:
    """Tokenize and stem one keyphrase.

    Raises EmptyPhrase if nothing survives tokenization.
    """
    tokens = tokenize(raw, stem=stem)
    if not tokens:
        raise EmptyPhrase(f"phrase normalizes to nothing: {raw!r}")
    return Phrase(tuple(tokens))


def normalize_document(raw: str, *, stem: bool = True) -> Document:
    return Document(tuple(tokenize(raw, stem=stem)))


def is_present(phrase: Phrase, doc: Document) -> bool:
    """True iff the phrase's stems occur contiguously in the document."""
    needle = phrase.stems
    haystack = doc.stems
    n = len(needle)
    if n == 0 or n > len(haystack):
        return False
    first = needle[0]
    for start in range(len(haystack) - n + 1):
        if haystack[start] == first and haystack[start : start + n] == needle:
            return True
    return False
