"""Detector for comments that probably omitted a SATD keyword."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .features import tfidf_row
from .labeler import LabeledComment
from .model import LassoModel, predict_proba
from .preprocess import Vocabulary

DEFAULT_CUTOFF = 0.70


@dataclass(frozen=True)
class Flagged:
    doc_id: tuple[str, str, int]
    probability: float
    raw_text: str


def score_comments(model: LassoModel, corpus: Iterable[LabeledComment],
                   vocab: Vocabulary) -> list[tuple[LabeledComment, float]]:
    """Probabilities for every non-KL-SATD comment that has feature tokens."""
    out = []
    for doc in corpus:
        if doc.is_kl_satd or not doc.features_tokens:
            continue
        row = tfidf_row(doc.features_tokens, vocab)
        out.append((doc, predict_proba(model, row, vocab.fingerprint)))
    return out


def flag_omitted(model: LassoModel, corpus: Sequence[LabeledComment], vocab: Vocabulary,
                 cutoff: float = DEFAULT_CUTOFF) -> list[Flagged]:
    """Comments scored above `cutoff`, unique by trimmed text, most probable first."""
    if not 0.0 < cutoff < 1.0:
        raise ValueError("cutoff must lie strictly between 0 and 1")
    if model.vocab_fingerprint != vocab.fingerprint:
        # checked up front so an empty corpus still reports drift
        predict_proba(model, tfidf_row((), vocab), vocab.fingerprint)
    hits = [Flagged(doc.doc_id, p, doc.clean.raw_text)
            for doc, p in score_comments(model, corpus, vocab) if p > cutoff]
    hits.sort(key=lambda f: (-f.probability, f.doc_id))
    seen = set()
    unique = []
    for f in hits:
        key = f.raw_text.strip()
        if key in seen:
            continue
        seen.add(key)
        unique.append(f)
    return unique


FLAGGED_FIELDS = ("repo_id", "path", "line_start", "probability", "text")


def flagged_jsonl(flagged: Iterable[Flagged]) -> str:
    lines = []
    for f in flagged:
        repo_id, path, line = f.doc_id
        # probability is spliced in so it always carries six decimals
        lines.append(
            "{" + f'"repo_id": {json.dumps(repo_id)}, "path": {json.dumps(path)}, '
            f'"line_start": {line}, "probability": {f.probability:.6f}, '
            f'"text": {json.dumps(f.raw_text)}' + "}")
    return "".join(line + "\n" for line in lines)


def flagged_csv(flagged: Iterable[Flagged]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FLAGGED_FIELDS)
    for f in flagged:
        repo_id, path, line = f.doc_id
        w.writerow([repo_id, path, line, f"{f.probability:.6f}", f.raw_text])
    return buf.getvalue()
