"""Metrics and corpus-level analyses."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import rankdata


def auc_roc(scores, labels) -> float:
    """Area under the ROC curve via the Mann-Whitney rank sum; tied pairs count one half."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    if scores.shape != labels.shape:
        raise ValueError("scores and labels differ in length")
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs both classes present")
    ranks = rankdata(scores, method="average")
    # average ranks are multiples of 1/2, so these sums are exact
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def spearman(x, y) -> float:
    """Spearman rank correlation (Pearson correlation of tie-averaged ranks)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("spearman needs two equal-length vectors")
    if x.size < 3:
        raise ValueError("spearman needs at least 3 observations")
    rx = rankdata(x) - (x.size + 1) / 2.0
    ry = rankdata(y) - (y.size + 1) / 2.0
    sx = np.sqrt(np.dot(rx, rx))
    sy = np.sqrt(np.dot(ry, ry))
    if sx == 0 or sy == 0:
        raise ValueError("spearman is undefined for a constant vector")
    return float(np.clip(np.dot(rx, ry) / (sx * sy), -1.0, 1.0))


@dataclass(frozen=True)
class RepoStats:
    repo_id: str
    n_comments: int
    n_kl_satd: int

    @property
    def kl_percentage(self) -> float:
        return 100.0 * self.n_kl_satd / self.n_comments


SUMMARY_ROWS = ("min", "q1", "median", "mean", "q3", "max")


@dataclass
class PrevalenceSummary:
    repos: list[RepoStats]
    # statistic name -> (n_comments, n_kl_satd, kl_percentage)
    summary: dict[str, tuple[float, float, float]]
    total_comments: int
    total_kl_satd: int


def describe(values) -> dict[str, float]:
    """Min, quartiles (linear interpolation), mean and max."""
    v = np.asarray(values, dtype=float)
    q = np.percentile(v, [0, 25, 50, 75, 100], method="linear")
    return {"min": float(q[0]), "q1": float(q[1]), "median": float(q[2]),
            "mean": float(v.mean()), "q3": float(q[3]), "max": float(q[4])}


def prevalence(corpus) -> PrevalenceSummary:
    """Per-repository KL-SATD counts with a summary across repositories."""
    if not corpus:
        raise ValueError("prevalence needs a non-empty corpus")
    counts: dict[str, list[int]] = {}
    for doc in corpus:
        c = counts.setdefault(doc.repo_id, [0, 0])
        c[0] += 1
        c[1] += bool(doc.is_kl_satd)
    repos = [RepoStats(r, n, k) for r, (n, k) in sorted(counts.items())]
    cols = [describe([r.n_comments for r in repos]),
            describe([r.n_kl_satd for r in repos]),
            describe([r.kl_percentage for r in repos])]
    summary = {name: tuple(c[name] for c in cols) for name in SUMMARY_ROWS}
    return PrevalenceSummary(repos, summary,
                             sum(r.n_comments for r in repos),
                             sum(r.n_kl_satd for r in repos))


@dataclass(frozen=True)
class WordRow:
    term: str
    freq_in_satd: int
    freq_in_other: int
    rate_diff: float


def word_comparison(corpus) -> list[WordRow]:
    """Occurrence counts of feature tokens per class, sorted by descending rate difference."""
    satd: Counter[str] = Counter()
    other: Counter[str] = Counter()
    n_satd_docs = n_other_docs = 0
    for doc in corpus:
        if doc.is_kl_satd:
            satd.update(doc.features_tokens)
            n_satd_docs += 1
        else:
            other.update(doc.features_tokens)
            n_other_docs += 1
    if not n_satd_docs or not n_other_docs:
        raise ValueError("word comparison needs both KL-SATD and other comments")
    n_satd = sum(satd.values())
    n_other = sum(other.values())
    rows = []
    for term in satd.keys() | other.keys():
        fs, fo = satd[term], other[term]
        diff = (fs / n_satd if n_satd else 0.0) - (fo / n_other if n_other else 0.0)
        rows.append(WordRow(term, fs, fo, diff))
    rows.sort(key=lambda r: (-r.rate_diff, r.term))
    return rows


@dataclass(frozen=True)
class CorrelationRow:
    variable: str
    rho: float
    n_repos: int


def repo_correlations(stats: Sequence[RepoStats], covariates: dict[str, dict[str, float]]) -> list[CorrelationRow]:
    """Spearman correlation between KL-SATD percentage and each per-repo covariate.

    `covariates` maps variable name -> {repo_id: value}; repos lacking a value
    are skipped for that variable, and variables with fewer than three repos
    or constant values are omitted.
    """
    pct = {s.repo_id: s.kl_percentage for s in stats}
    out = []
    for name, values in covariates.items():
        shared = sorted(r for r in values if r in pct)
        if len(shared) < 3:
            continue
        try:
            rho = spearman([values[r] for r in shared], [pct[r] for r in shared])
        except ValueError:
            continue
        out.append(CorrelationRow(name, rho, len(shared)))
    return out
