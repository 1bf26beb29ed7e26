"""Delimited output formats and atomic file writes."""

from __future__ import annotations

import csv
import io
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence


def atomic_write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return path


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def fmt(x: float, digits: int = 6) -> str:
    return f"{x:.{digits}f}"


def comments_csv(comments) -> str:
    return to_csv(
        ("repo_id", "path", "line_start", "line_end", "kind", "text"),
        ((c.repo_id, c.path, c.line_start, c.line_end, c.kind.value, c.text) for c in comments),
    )


def clean_corpus_csv(labeled) -> str:
    return to_csv(
        ("repo_id", "path", "line_start", "is_kl_satd", "tokens"),
        ((d.clean.repo_id, d.clean.path, d.clean.line_start, int(d.is_kl_satd),
          " ".join(d.clean.tokens)) for d in labeled),
    )


def repo_stats_csv(prev) -> str:
    return to_csv(
        ("repo_id", "n_comments", "n_kl_satd", "kl_percentage"),
        ((r.repo_id, r.n_comments, r.n_kl_satd, fmt(r.kl_percentage, 2)) for r in prev.repos),
    )


def summary_csv(prev) -> str:
    rows = []
    for name, (n, k, pct) in prev.summary.items():
        rows.append((name, fmt(n, 2), fmt(k, 2), f"{fmt(pct, 2)}%"))
    rows.append(("total", prev.total_comments, prev.total_kl_satd, ""))
    return to_csv(("statistic", "n_comments", "n_kl_satd", "kl_percentage"), rows)


def spearman_csv(rows) -> str:
    return to_csv(("variable", "rho", "n_repos"), ((r.variable, fmt(r.rho), r.n_repos) for r in rows))


def word_comparison_csv(rows) -> str:
    return to_csv(
        ("term", "freq_in_satd", "freq_in_other", "rate_diff"),
        ((r.term, r.freq_in_satd, r.freq_in_other, f"{r.rate_diff:.8f}") for r in rows),
    )


def cv_curve_csv(cv) -> str:
    k = cv.fold_auc.shape[0]
    header = ["lambda", "mean_auc"] + [f"fold_{f}" for f in range(k)]
    rows = []
    for li, lam in enumerate(cv.lambdas):
        rows.append([f"{lam:.10g}", f"{cv.mean_auc[li]:.10f}"]
                    + [f"{cv.fold_auc[f, li]:.10f}" for f in range(k)])
    return to_csv(header, rows)


def coefficients_csv(positive, negative) -> str:
    rows = [("positive", rank, t, f"{c:.8f}") for rank, (t, c) in enumerate(positive, 1)]
    rows += [("negative", rank, t, f"{c:.8f}") for rank, (t, c) in enumerate(negative, 1)]
    return to_csv(("direction", "rank", "term", "coefficient"), rows)


def vocabulary_csv(vocab) -> str:
    return to_csv(
        ("index", "term", "doc_freq", "repo_freq"),
        ((i, t, vocab.doc_freq[t], vocab.repo_freq[t]) for i, t in enumerate(vocab.term_list())),
    )
