"""Sparse tf-idf document-term matrices with class weights."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .labeler import LabeledComment
from .preprocess import Vocabulary


class Weighting(str, Enum):
    BALANCED = "balanced"
    UNIFORM = "uniform"


class UntrainableError(ValueError):
    """The corpus cannot support a two-class fit."""


@dataclass(frozen=True)
class SparseRow:
    indices: tuple[int, ...] = ()
    weights: tuple[float, ...] = ()

    def __len__(self):
        return len(self.indices)

    def entries(self) -> list[tuple[int, float]]:
        return list(zip(self.indices, self.weights))


def idf(vocab: Vocabulary, term: str) -> float:
    return math.log(vocab.n_docs / vocab.doc_freq[term]) + 1.0


def tfidf_row(tokens: Iterable[str], vocab: Vocabulary) -> SparseRow:
    """Raw count times ``ln(n/df) + 1``, then L2-normalized. Unknown terms are ignored."""
    counts = Counter(t for t in tokens if t in vocab.terms)
    if not counts:
        return SparseRow()
    pairs = sorted((vocab.terms[t], c * idf(vocab, t)) for t, c in counts.items())
    norm = math.sqrt(sum(w * w for _, w in pairs))
    return SparseRow(tuple(i for i, _ in pairs), tuple(w / norm for _, w in pairs))


def class_weights(labels: np.ndarray, weighting: Weighting) -> np.ndarray:
    labels = np.asarray(labels)
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UntrainableError(
            f"need both classes to train, got {n_pos} positive and {n_neg} negative rows")
    w = np.ones(labels.size)
    if Weighting(weighting) is Weighting.BALANCED:
        w[labels == 1] = n_neg / n_pos
    return w


@dataclass
class DocTermMatrix:
    X: sp.csr_matrix
    labels: np.ndarray
    instance_weights: np.ndarray
    doc_ids: list[tuple[str, str, int]]
    vocab_fingerprint: str
    weighting: Weighting = Weighting.BALANCED

    def __len__(self):
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    @property
    def rows(self) -> list[SparseRow]:
        return [self.row(i) for i in range(len(self))]

    def row(self, i: int) -> SparseRow:
        lo, hi = self.X.indptr[i], self.X.indptr[i + 1]
        return SparseRow(tuple(int(j) for j in self.X.indices[lo:hi]),
                         tuple(float(v) for v in self.X.data[lo:hi]))

    def subset(self, idx: Sequence[int] | np.ndarray) -> DocTermMatrix:
        """Rows `idx` with class weights recomputed for the subset."""
        idx = np.asarray(idx)
        labels = self.labels[idx]
        return DocTermMatrix(
            X=self.X[idx],
            labels=labels,
            instance_weights=class_weights(labels, self.weighting),
            doc_ids=[self.doc_ids[i] for i in idx],
            vocab_fingerprint=self.vocab_fingerprint,
            weighting=self.weighting,
        )


def rows_to_csr(rows: Sequence[SparseRow], n_features: int) -> sp.csr_matrix:
    indptr = np.zeros(len(rows) + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([len(r) for r in rows])
    indices = np.fromiter((j for r in rows for j in r.indices), dtype=np.int32, count=indptr[-1])
    data = np.fromiter((v for r in rows for v in r.weights), dtype=np.float64, count=indptr[-1])
    return sp.csr_matrix((data, indices, indptr), shape=(len(rows), n_features))


def build_matrix(
    corpus: Sequence[LabeledComment],
    vocab: Vocabulary,
    weighting: Weighting = Weighting.BALANCED,
) -> DocTermMatrix:
    """Build the training matrix; comments without any in-vocabulary feature are left out."""
    rows, labels, doc_ids = [], [], []
    for doc in corpus:
        row = tfidf_row(doc.features_tokens, vocab)
        if not len(row):
            continue
        rows.append(row)
        labels.append(1 if doc.is_kl_satd else 0)
        doc_ids.append(doc.doc_id)
    labels = np.asarray(labels, dtype=np.int8)
    weights = class_weights(labels, weighting)
    return DocTermMatrix(rows_to_csr(rows, len(vocab)), labels, weights, doc_ids,
                         vocab.fingerprint, Weighting(weighting))


def refit_idf(vocab: Vocabulary, corpus: Sequence[LabeledComment]) -> Vocabulary:
    """Same terms and indices, document frequencies recounted on `corpus`.

    Terms absent from `corpus` get a document frequency of 1 so that their
    idf stays finite.
    """
    df = dict.fromkeys(vocab.terms, 0)
    for doc in corpus:
        for t in set(doc.features_tokens):
            if t in df:
                df[t] += 1
    return Vocabulary(
        terms=dict(vocab.terms),
        doc_freq={t: max(c, 1) for t, c in df.items()},
        repo_freq=dict(vocab.repo_freq),
        n_docs=max(len(corpus), 1),
        min_repos=vocab.min_repos,
    )


def format_doc_id(doc_id: tuple[str, str, int]) -> str:
    repo_id, path, line = doc_id
    return f"{repo_id}:{path}:{line}"


def export_lines(matrix: DocTermMatrix, vocab: Vocabulary) -> Iterable[str]:
    """Debug dump, one ``doc_id,label,weight,term:weight ...`` line per row."""
    terms = vocab.term_list()
    for i in range(len(matrix)):
        row = matrix.row(i)
        cells = " ".join(f"{terms[j]}:{w:.12g}" for j, w in row.entries())
        yield (f"{format_doc_id(matrix.doc_ids[i])},{int(matrix.labels[i])},"
               f"{matrix.instance_weights[i]:.12g},{cells}")
