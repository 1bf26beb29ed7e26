"""Figures written next to the delimited reports."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

WIDTH = 6.0

STYLE = {
    "figure.dpi": 100,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
}

POS_COLOR = "#b2182b"
NEG_COLOR = "#2166ac"


def save_fig(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # no timestamp/software metadata, so reruns produce identical files
    fig.savefig(path, bbox_inches="tight", metadata={"Software": None})
    plt.close(fig)
    return path


def plot_cv_curve(cv, path) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(WIDTH, WIDTH * 0.6))
        lam = np.asarray(cv.lambdas)
        lo = cv.fold_auc.min(axis=0)
        hi = cv.fold_auc.max(axis=0)
        ax.fill_between(lam, lo, hi, color="0.85", label="fold range")
        ax.plot(lam, cv.mean_auc, color="k", lw=1.2, label="mean AUC")
        ax.axvline(cv.best_lambda, color=POS_COLOR, ls="--", lw=1,
                   label=f"best $\\lambda$ = {cv.best_lambda:.3g} (AUC {cv.best_auc:.3f})")
        ax.set_xscale("log")
        ax.invert_xaxis()
        ax.set_xlabel("penalty $\\lambda$")
        ax.set_ylabel("held-out AUC-ROC")
        ax.legend(loc="lower right", frameon=False)
    return save_fig(fig, path)


def plot_prevalence(prev, path) -> Path:
    repos = sorted(prev.repos, key=lambda r: r.kl_percentage)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(WIDTH, max(2.0, 0.22 * len(repos) + 1)))
        y = np.arange(len(repos))
        ax.barh(y, [r.kl_percentage for r in repos], color="0.4")
        ax.set_yticks(y, [r.repo_id for r in repos])
        med = prev.summary["median"][2]
        ax.axvline(med, color=POS_COLOR, ls="--", lw=1, label=f"median {med:.2f}%")
        ax.set_xlabel("KL-SATD comments (%)")
        ax.legend(loc="lower right", frameon=False)
    return save_fig(fig, path)


def _diverging_bars(ax, labels, values):
    y = np.arange(len(labels))
    ax.barh(y, values, color=[POS_COLOR if v > 0 else NEG_COLOR for v in values])
    ax.set_yticks(y, labels)
    ax.invert_yaxis()
    ax.axvline(0, color="k", lw=0.6)


def plot_coefficients(positive, negative, path) -> Path:
    items = list(positive) + list(reversed(negative))
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(WIDTH, max(2.0, 0.22 * len(items) + 1)))
        if items:
            _diverging_bars(ax, [t for t, _ in items], [c for _, c in items])
        ax.set_xlabel("coefficient")
    return save_fig(fig, path)


def plot_word_comparison(rows, path, n: int = 15) -> Path:
    items = list(rows[:n]) + [r for r in rows[-n:] if r not in rows[:n]]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(WIDTH, max(2.0, 0.2 * len(items) + 1)))
        if items:
            _diverging_bars(ax, [r.term for r in items], [r.rate_diff for r in items])
        ax.set_xlabel("rate in KL-SATD comments minus rate in other comments")
    return save_fig(fig, path)


def plot_flag_scores(probabilities, cutoff: float, path) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(WIDTH, WIDTH * 0.5))
        ax.hist(probabilities, bins=np.linspace(0, 1, 41), color="0.4")
        ax.axvline(cutoff, color=POS_COLOR, ls="--", lw=1, label=f"cutoff {cutoff:.2f}")
        ax.set_xlabel("predicted probability of KL-SATD")
        ax.set_ylabel("non-KL-SATD comments")
        ax.set_yscale("symlog")
        ax.legend(frameon=False)
    return save_fig(fig, path)
