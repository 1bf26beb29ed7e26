"""Keyword labeling of cleaned comments."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Collection, Iterable

if TYPE_CHECKING:
    from .preprocess import CleanComment

DEFAULT_KEYWORDS = ("todo", "fixme", "hack", "xxx")


@dataclass(frozen=True)
class LabeledComment:
    clean: CleanComment
    is_kl_satd: bool
    features_tokens: tuple[str, ...]

    @property
    def doc_id(self) -> tuple[str, str, int]:
        return self.clean.doc_id

    @property
    def repo_id(self) -> str:
        return self.clean.repo_id


def parse_keywords(text: str) -> tuple[str, ...]:
    """Parse a comma separated keyword list such as ``"TODO,FIXME"``."""
    words = tuple(dict.fromkeys(w.strip().lower() for w in text.split(",") if w.strip()))
    if not words:
        raise ValueError("keyword list is empty")
    return words


def label(clean: CleanComment, keywords: Collection[str] = DEFAULT_KEYWORDS) -> LabeledComment:
    # whole-token matching: "todos" or "hackathon" are ordinary words
    kw = frozenset(keywords)
    features = tuple(t for t in clean.tokens if t not in kw)
    return LabeledComment(clean, len(features) != len(clean.tokens), features)


def label_all(corpus: Iterable[CleanComment], keywords: Collection[str] = DEFAULT_KEYWORDS) -> list[LabeledComment]:
    kw = frozenset(keywords)
    return [label(c, kw) for c in corpus]
