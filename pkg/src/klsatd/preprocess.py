"""Noise reduction for extracted comments and vocabulary construction."""

from __future__ import annotations

import csv
import hashlib
import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Collection, Iterable, Sequence

from .extractor import CommentKind, RawComment
from .labeler import DEFAULT_KEYWORDS


@dataclass(frozen=True)
class CleanComment:
    repo_id: str
    path: str
    line_start: int
    tokens: tuple[str, ...]
    raw_text: str

    @property
    def doc_id(self) -> tuple[str, str, int]:
        return (self.repo_id, self.path, self.line_start)


@dataclass
class Vocabulary:
    terms: dict[str, int]
    doc_freq: dict[str, int]
    repo_freq: dict[str, int]
    n_docs: int
    min_repos: int = 1
    _fingerprint: str | None = field(default=None, repr=False, compare=False)

    def __len__(self):
        return len(self.terms)

    def term_list(self) -> list[str]:
        out = [""] * len(self.terms)
        for term, idx in self.terms.items():
            out[idx] = term
        return out

    @property
    def fingerprint(self) -> str:
        # Covers everything tf-idf weighting depends on.
        if self._fingerprint is None:
            payload = json.dumps(
                {"n_docs": self.n_docs,
                 "terms": [[t, self.doc_freq[t]] for t in self.term_list()]},
                separators=(",", ":"),
            )
            self._fingerprint = hashlib.sha256(payload.encode()).hexdigest()[:16]
        return self._fingerprint


# -- step 1: commented-out code ---------------------------------------------

CODE_MARKERS = (";", "{", "}", "==", "!=", "->", "return ", "if (", "for (", "while (", "= new ")


def code_score(text: str) -> int:
    return sum(text.count(marker) for marker in CODE_MARKERS)


def is_code_like(text: str) -> bool:
    """Heuristic stand-in for a natural-language-vs-code classifier."""
    trimmed = text.strip()
    return code_score(text) >= 2 or trimmed.endswith((";", "{"))


# -- step 2: license headers and tagged javadoc -----------------------------

LICENSE_MARKERS = (
    "license",
    "licence",
    "copyright",
    "all rights reserved",
    "apache software foundation",
    "gnu general public",
    "mit license",
    "distributed under",
)

_JAVADOC_TAG = re.compile(r"^\s*@[A-Za-z]", re.MULTILINE)


def is_license(text: str) -> bool:
    lowered = text.lower()
    return any(marker in lowered for marker in LICENSE_MARKERS)


def is_javadoc_with_tags(comment: RawComment) -> bool:
    return (
        comment.kind is CommentKind.BLOCK
        and comment.javadoc
        and _JAVADOC_TAG.search(comment.text) is not None
    )


# -- steps 4-5: tokenization ------------------------------------------------

_URL = re.compile(r"(?:https?://|www\.)\S*", re.IGNORECASE)
_WORD_RUN = re.compile(r"\S+")
_NON_ALNUM = re.compile(r"[^A-Za-z0-9]+")


def _drop_email(m: re.Match) -> str:
    run = m.group(0)
    at = run.find("@")
    if at >= 0 and "." in run[at + 1:]:
        return ""
    return run


@lru_cache(maxsize=None)
def _default_stopwords() -> frozenset[str]:
    text = resources.files("klsatd.data").joinpath("stopwords_en.txt").read_text("utf-8")
    return _parse_stopwords(text.splitlines())


def _parse_stopwords(lines: Iterable[str]) -> frozenset[str]:
    words = set()
    for line in lines:
        line = line.split("#", 1)[0].strip().lower()
        if line:
            words.add(line)
    return frozenset(words)


def load_stopwords(path=None) -> frozenset[str]:
    """Read a stopword file (one token per line, ``#`` comments); the bundled list if `path` is None."""
    if path is None:
        return _default_stopwords()
    with open(path, encoding="utf-8") as fh:
        return _parse_stopwords(fh)


def tokenize(text: str, stopwords: Collection[str] | None = None) -> list[str]:
    if stopwords is None:
        stopwords = _default_stopwords()
    text = _URL.sub(" ", text)
    text = _WORD_RUN.sub(_drop_email, text)
    tokens = []
    for piece in _NON_ALNUM.split(text):
        piece = piece.lower()
        if len(piece) >= 3 and piece not in stopwords:
            tokens.append(piece)
    return tokens


# -- corpus level -----------------------------------------------------------

def load_exclusions(path) -> set[tuple[str, str]]:
    """Read a ``repo_id,path`` CSV of files to exclude (e.g. renamed files)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = {"repo_id", "path"} - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"exclusion manifest {path} lacks columns: {sorted(missing)}")
        return {(row["repo_id"], row["path"]) for row in reader}


def drop_reason(comment: RawComment, exclusions: Collection[tuple[str, str]] = ()) -> str | None:
    if (comment.repo_id, comment.path) in exclusions:
        return "excluded"
    if is_code_like(comment.text):
        return "code"
    if is_license(comment.text):
        return "license"
    if is_javadoc_with_tags(comment):
        return "javadoc"
    return None


def clean_corpus(
    comments: Iterable[RawComment],
    exclusion_manifest: Collection[tuple[str, str]] | None = None,
    stopwords: Collection[str] | None = None,
) -> list[CleanComment]:
    exclusions = exclusion_manifest or frozenset()
    out = []
    for c in comments:
        if drop_reason(c, exclusions) is not None:
            continue
        tokens = tokenize(c.text, stopwords)
        if not tokens:
            continue
        out.append(CleanComment(c.repo_id, c.path, c.line_start, tuple(tokens), c.text))
    return out


def build_vocabulary(
    corpus: Sequence[CleanComment],
    min_repos: int,
    keywords: Collection[str] = DEFAULT_KEYWORDS,
) -> Vocabulary:
    """Count document/repository presence of keyword-stripped tokens and keep
    terms seen in at least `min_repos` repositories."""
    if min_repos < 1:
        raise ValueError("min_repos must be >= 1")
    if not corpus:
        raise ValueError("no trainable data: the cleaned corpus is empty")
    keywords = frozenset(keywords)
    doc_freq: dict[str, int] = {}
    repos: dict[str, set[str]] = {}
    for doc in corpus:
        for term in set(doc.tokens) - keywords:
            doc_freq[term] = doc_freq.get(term, 0) + 1
            repos.setdefault(term, set()).add(doc.repo_id)
    kept = sorted(t for t, r in repos.items() if len(r) >= min_repos)
    return Vocabulary(
        terms={t: i for i, t in enumerate(kept)},
        doc_freq={t: doc_freq[t] for t in kept},
        repo_freq={t: len(repos[t]) for t in kept},
        n_docs=len(corpus),
        min_repos=min_repos,
    )
