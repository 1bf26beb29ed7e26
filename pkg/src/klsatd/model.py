"""L1-penalized logistic regression fitted by coordinate descent.

The objective is

    (1/sum(w)) * sum_i w_i * logloss(y_i, sigmoid(b0 + x_i . beta)) + lam * ||beta||_1

with an unpenalized intercept. Each outer iteration builds the weighted
quadratic (IRLS) approximation at the current iterate and solves it with
cyclic coordinate descent and soft-thresholding. A backtracking step on the
segment between the old iterate and the subproblem solution keeps the
penalized objective from increasing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numba
import numpy as np
from scipy.special import expit

from .evaluation import auc_roc
from .features import DocTermMatrix, SparseRow, UntrainableError

FORMAT_VERSION = 1

PROB_CLAMP = 1e-12
IRLS_WEIGHT_FLOOR = 1e-5


class VocabularyDriftError(ValueError):
    """A model is applied to features built from a different vocabulary."""


@dataclass
class LassoModel:
    intercept: float
    coefficients: dict[int, float]
    lam: float
    vocab_fingerprint: str
    training_meta: dict = field(default_factory=dict)
    converged: bool = True
    n_iter: int = 0

    def coef_array(self, n_features: int) -> np.ndarray:
        beta = np.zeros(n_features)
        for j, v in self.coefficients.items():
            beta[j] = v
        return beta

    @property
    def n_nonzero(self) -> int:
        return len(self.coefficients)

    def to_json(self, terms: Sequence[str]) -> str:
        doc = {
            "format_version": FORMAT_VERSION,
            "lambda": self.lam,
            "intercept": self.intercept,
            "coefficients": {terms[j]: v for j, v in sorted(
                self.coefficients.items(), key=lambda kv: terms[kv[0]])},
            "vocab_fingerprint": self.vocab_fingerprint,
            "training_meta": self.training_meta,
            "converged": self.converged,
        }
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"

    @classmethod
    def from_json(cls, text: str, vocab) -> LassoModel:
        doc = json.loads(text)
        if doc.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"unsupported model format_version {doc.get('format_version')!r}")
        if doc["vocab_fingerprint"] != vocab.fingerprint:
            raise VocabularyDriftError(
                f"model vocabulary {doc['vocab_fingerprint']} does not match corpus vocabulary "
                f"{vocab.fingerprint}; rebuild features with the training corpus and flags "
                f"(training_meta: {doc.get('training_meta')})")
        coefs = {}
        for term, v in doc["coefficients"].items():
            if term not in vocab.terms:
                raise VocabularyDriftError(f"model term {term!r} missing from vocabulary")
            coefs[vocab.terms[term]] = float(v)
        return cls(float(doc["intercept"]), coefs, float(doc["lambda"]), doc["vocab_fingerprint"],
                   doc.get("training_meta", {}), bool(doc.get("converged", True)))


# -- objective pieces -------------------------------------------------------

def weighted_logloss(eta: np.ndarray, y: np.ndarray, w: np.ndarray) -> float:
    p = np.clip(expit(eta), PROB_CLAMP, 1 - PROB_CLAMP)
    ll = -(y * np.log(p) + (1 - y) * np.log1p(-p))
    return float(np.dot(w, ll) / w.sum())


def logloss_gradient(X, y, w, intercept: float, beta: np.ndarray) -> tuple[float, np.ndarray]:
    """Gradient of the unpenalized weighted log-loss w.r.t. (intercept, beta)."""
    eta = X @ beta + intercept
    r = w * (expit(eta) - y) / w.sum()
    return float(r.sum()), np.asarray(X.T @ r).ravel()


def objective(X, y, w, intercept: float, beta: np.ndarray, lam: float) -> float:
    eta = X @ beta + intercept
    return weighted_logloss(eta, y, w) + lam * float(np.abs(beta).sum())


def soft_threshold(z: float, gamma: float) -> float:
    if z > gamma:
        return z - gamma
    if z < -gamma:
        return z + gamma
    return 0.0


@numba.njit(cache=True)
def _soft(z, gamma):
    if z > gamma:
        return z - gamma
    if z < -gamma:
        return z + gamma
    return 0.0


@numba.njit(cache=True)
def _coord_pass(indptr, indices, data, v, s, off, b0, beta, xbar, xv2c, vsum, lam, cols):
    # residual is s + off; each beta_j step moves the intercept along with it
    # so the intercept stays optimal (CD on implicitly centered columns)
    dmax = 0.0
    for j in cols:
        if xv2c[j] <= 0.0:
            continue
        lo = indptr[j]
        hi = indptr[j + 1]
        old = beta[j]
        g = off * vsum * xbar[j]
        for k in range(lo, hi):
            g += v[indices[k]] * data[k] * s[indices[k]]
        new = _soft(g + xv2c[j] * old, lam) / xv2c[j]
        if new != old:
            d = new - old
            for k in range(lo, hi):
                s[indices[k]] -= d * data[k]
            off += d * xbar[j]
            b0 -= d * xbar[j]
            beta[j] = new
            if abs(d) > dmax:
                dmax = abs(d)
    return dmax, off, b0


@numba.njit(cache=True)
def _weighted_cd(indptr, indices, data, v, z, b0, beta, lam, tol, max_sweeps):
    """Solve min 0.5*sum v_i (z_i - b0 - x_i.beta)^2 + lam*|beta|_1 in place.

    Active-set cycling: full sweeps discover the active set, inner sweeps
    run on it until stable. Returns (b0, sweeps).
    """
    p = beta.shape[0]
    n = z.shape[0]
    vsum = 0.0
    for i in range(n):
        vsum += v[i]
    xbar = np.zeros(p)
    xv2c = np.zeros(p)
    for j in range(p):
        s1 = 0.0
        s2 = 0.0
        for k in range(indptr[j], indptr[j + 1]):
            vx = v[indices[k]] * data[k]
            s1 += vx
            s2 += vx * data[k]
        xbar[j] = s1 / vsum
        c = s2 - vsum * xbar[j] * xbar[j]
        # columns (numerically) collinear with the intercept are frozen
        xv2c[j] = c if c > 1e-12 * s2 else 0.0
    s = z - b0
    for j in range(p):
        if beta[j] != 0.0:
            for k in range(indptr[j], indptr[j + 1]):
                s[indices[k]] -= beta[j] * data[k]
    all_cols = np.arange(p)
    sweeps = 0
    off = 0.0
    while sweeps < max_sweeps:
        # re-center exactly; removes drift in sum(v * residual)
        d0 = 0.0
        for i in range(n):
            s[i] += off
            d0 += v[i] * s[i]
        d0 /= vsum
        b0 += d0
        off = -d0
        dmax, off, b0 = _coord_pass(indptr, indices, data, v, s, off, b0, beta, xbar, xv2c,
                                    vsum, lam, all_cols)
        dmax = max(dmax, abs(d0))
        sweeps += 1
        if dmax < tol:
            break
        active = np.nonzero(beta)[0]
        while sweeps < max_sweeps:
            da, off, b0 = _coord_pass(indptr, indices, data, v, s, off, b0, beta, xbar, xv2c,
                                      vsum, lam, active)
            sweeps += 1
            if da < tol:
                break
    return b0, sweeps


class _Problem:
    """Column-major view of a weighted design shared by fits along a path."""

    def __init__(self, X: DocTermMatrix):
        self.X = X.X.tocsr()
        csc = X.X.tocsc()
        csc.sort_indices()
        self.indptr = csc.indptr.astype(np.int64)
        self.indices = csc.indices.astype(np.int64)
        self.data = csc.data.astype(np.float64)
        self.y = X.labels.astype(np.float64)
        self.w = X.instance_weights.astype(np.float64)
        self.wsum = float(self.w.sum())
        self.fingerprint = X.vocab_fingerprint
        self.meta = {
            "n_docs": int(len(self.y)),
            "n_pos": int(self.y.sum()),
            "weighting": X.weighting.value,
        }
        self.n_features = self.X.shape[1]
        self.base_rate = float(np.dot(self.w, self.y) / self.wsum)
        if not 0.0 < self.base_rate < 1.0:
            raise UntrainableError("weighted base rate must lie strictly between 0 and 1")
        self.null_intercept = math.log(self.base_rate / (1.0 - self.base_rate))
        g0 = np.asarray(self.X.T @ (self.w * (self.y - self.base_rate))).ravel() / self.wsum
        self.lambda_max = float(np.abs(g0).max()) if g0.size else 0.0

    def objective(self, b0, beta, lam):
        return objective(self.X, self.y, self.w, b0, beta, lam)

    def null_model(self, lam) -> LassoModel:
        return LassoModel(self.null_intercept, {}, float(lam), self.fingerprint, dict(self.meta))


def lambda_max(X: DocTermMatrix) -> float:
    """Smallest penalty at which the fitted model is intercept-only."""
    return _Problem(X).lambda_max


def lambda_path(X: DocTermMatrix, n_lambdas: int = 100, ratio: float = 1e-4) -> list[float]:
    if n_lambdas < 1:
        raise ValueError("n_lambdas must be >= 1")
    if not 0 < ratio < 1:
        raise ValueError("ratio must lie in (0, 1)")
    lmax = lambda_max(X)
    if lmax <= 0.0:
        raise UntrainableError("all feature columns are zero; nothing to fit")
    if n_lambdas == 1:
        return [lmax]
    path = np.geomspace(lmax, lmax * ratio, n_lambdas)
    path[0] = lmax
    path[-1] = lmax * ratio
    return [float(x) for x in path]


def _fit_problem(prob: _Problem, lam: float, warm: LassoModel | None, tol: float,
                 max_iter: int, trace: list | None) -> LassoModel:
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if lam >= prob.lambda_max:
        # the null model satisfies the optimality conditions exactly
        if trace is not None:
            trace.append(prob.objective(prob.null_intercept, np.zeros(prob.n_features), lam))
        return prob.null_model(lam)

    if warm is not None:
        b0 = warm.intercept
        beta = warm.coef_array(prob.n_features)
    else:
        b0 = prob.null_intercept
        beta = np.zeros(prob.n_features)
    obj = prob.objective(b0, beta, lam)
    if trace is not None:
        trace.append(obj)

    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        eta = prob.X @ beta + b0
        p = expit(eta)
        q = np.maximum(p * (1 - p), IRLS_WEIGHT_FLOOR)
        v = prob.w * q / prob.wsum
        z = eta + (prob.y - p) / q
        new_beta = beta.copy()
        new_b0, _ = _weighted_cd(prob.indptr, prob.indices, prob.data, v, z, b0, new_beta,
                                 lam, tol * 1e-1, 100_000)
        # backtrack along the segment if the quadratic model overshot
        step = 1.0
        while True:
            cand_b0 = b0 + step * (new_b0 - b0)
            cand_beta = beta + step * (new_beta - beta)
            cand_obj = prob.objective(cand_b0, cand_beta, lam)
            if cand_obj <= obj + 1e-13 * max(1.0, abs(obj)):
                break
            step *= 0.5
            if step < 1e-10:
                cand_b0, cand_beta, cand_obj = b0, beta, obj
                break
        delta = max(abs(cand_b0 - b0), float(np.abs(cand_beta - beta).max(initial=0.0)))
        b0, beta, obj = cand_b0, cand_beta, min(cand_obj, obj)
        if trace is not None:
            trace.append(obj)
        if delta < tol:
            converged = True
            break

    nz = np.flatnonzero(beta)
    return LassoModel(
        intercept=float(b0),
        coefficients={int(j): float(beta[j]) for j in nz},
        lam=float(lam),
        vocab_fingerprint=prob.fingerprint,
        training_meta=dict(prob.meta),
        converged=converged,
        n_iter=it,
    )


def fit(X: DocTermMatrix, lam: float, warm: LassoModel | None = None, *,
        tol: float = 1e-7, max_iter: int = 1000, trace: list | None = None) -> LassoModel:
    """Fit at a single penalty. A non-converged fit is returned with ``converged=False``.

    If `trace` is a list, the penalized objective after each outer iteration is appended.
    """
    return _fit_problem(_Problem(X), lam, warm, tol, max_iter, trace)


def fit_path(X: DocTermMatrix, lambdas: Sequence[float], *, tol: float = 1e-7,
             max_iter: int = 1000) -> list[LassoModel]:
    prob = _Problem(X)
    models = []
    warm = None
    for lam in lambdas:
        warm = _fit_problem(prob, lam, warm, tol, max_iter, None)
        models.append(warm)
    return models


def kkt_violation(model: LassoModel, X: DocTermMatrix) -> float:
    """Largest violation of the lasso optimality conditions at `model`."""
    beta = model.coef_array(X.n_features)
    g0, g = logloss_gradient(X.X, X.labels.astype(float), X.instance_weights, model.intercept, beta)
    lam = model.lam
    viol = abs(g0)
    zero = beta == 0
    if zero.any():
        viol = max(viol, float(np.max(np.abs(g[zero]) - lam, initial=0.0)))
    if (~zero).any():
        viol = max(viol, float(np.max(np.abs(g[~zero] + lam * np.sign(beta[~zero])))))
    return viol


# -- cross-validation -------------------------------------------------------

@dataclass
class FoldAssignment:
    fold_of: np.ndarray
    seed: int

    @property
    def k(self) -> int:
        return int(self.fold_of.max()) + 1

    def split(self, fold: int) -> tuple[np.ndarray, np.ndarray]:
        test = np.flatnonzero(self.fold_of == fold)
        train = np.flatnonzero(self.fold_of != fold)
        return train, test


def stratified_kfold(labels, k: int = 10, seed: int = 42) -> FoldAssignment:
    """Shuffle each class with a seeded generator and deal it round-robin into `k` folds."""
    labels = np.asarray(labels)
    if k < 2:
        raise ValueError("k must be >= 2")
    rng = np.random.default_rng(seed)
    fold_of = np.empty(labels.size, dtype=np.int64)
    offset = 0
    for cls in (1, 0):
        members = np.flatnonzero(labels == cls)
        if members.size < k:
            raise ValueError(f"class {cls} has {members.size} rows, fewer than k={k} folds")
        members = rng.permutation(members)
        fold_of[members] = (offset + np.arange(members.size)) % k
        offset = (offset + members.size) % k
    return FoldAssignment(fold_of, seed)


@dataclass
class CvResult:
    lambdas: list[float]
    mean_auc: np.ndarray
    fold_auc: np.ndarray
    best_index: int
    best_model: LassoModel
    folds: FoldAssignment

    @property
    def best_lambda(self) -> float:
        return self.lambdas[self.best_index]

    @property
    def best_auc(self) -> float:
        return float(self.mean_auc[self.best_index])


FoldBuilder = Callable[[np.ndarray, np.ndarray], tuple[DocTermMatrix, DocTermMatrix]]


def cross_validate(X: DocTermMatrix, k: int = 10, seed: int = 42, *,
                   lambdas: Sequence[float] | None = None, n_lambdas: int = 100,
                   ratio: float = 1e-4, fold_builder: FoldBuilder | None = None,
                   tol: float = 1e-7) -> CvResult:
    """Pick the penalty with the highest mean held-out AUC over stratified folds.

    Ties go to the larger penalty. `fold_builder(train_idx, test_idx)` may
    supply per-fold matrices (e.g. fold-local idf); by default rows are
    subset from `X` with class weights recomputed on the training part.
    """
    if lambdas is None:
        lambdas = lambda_path(X, n_lambdas, ratio)
    lambdas = [float(l) for l in lambdas]
    folds = stratified_kfold(X.labels, k, seed)
    fold_auc = np.empty((k, len(lambdas)))
    for f in range(k):
        train, test = folds.split(f)
        if fold_builder is None:
            Xtr, Xte = X.subset(train), X.subset(test)
        else:
            Xtr, Xte = fold_builder(train, test)
        path = fit_path(Xtr, lambdas, tol=tol)
        for li, m in enumerate(path):
            fold_auc[f, li] = auc_roc(linear_predictor(m, Xte), Xte.labels)
    mean_auc = fold_auc.mean(axis=0)
    best = int(np.argmax(mean_auc))
    best_model = fit_path(X, lambdas[:best + 1], tol=tol)[-1]
    best_model.training_meta["cv"] = {"k": k, "seed": seed, "mean_auc": float(mean_auc[best])}
    return CvResult(lambdas, mean_auc, fold_auc, best, best_model, folds)


# -- prediction -------------------------------------------------------------

def _check_fingerprint(model: LassoModel, fingerprint: str | None):
    if fingerprint is not None and fingerprint != model.vocab_fingerprint:
        raise VocabularyDriftError(
            f"features built with vocabulary {fingerprint}, model expects {model.vocab_fingerprint}")


def linear_predictor(model: LassoModel, X: DocTermMatrix) -> np.ndarray:
    _check_fingerprint(model, X.vocab_fingerprint)
    return X.X @ model.coef_array(X.n_features) + model.intercept


def predict_proba(model: LassoModel, row: SparseRow, fingerprint: str | None = None) -> float:
    """Probability of the positive class for one row; `fingerprint` is the row's vocabulary."""
    _check_fingerprint(model, fingerprint)
    coefs = model.coefficients
    eta = math.fsum([model.intercept] + [coefs[j] * w for j, w in zip(row.indices, row.weights)
                                          if j in coefs])
    return float(expit(eta))


def top_coefficients(model: LassoModel, terms: Sequence[str], n: int = 10):
    """The `n` most positive and `n` most negative nonzero coefficients as (term, coef) lists."""
    named = [(terms[j], c) for j, c in model.coefficients.items()]
    pos = sorted(((t, c) for t, c in named if c > 0), key=lambda tc: (-tc[1], tc[0]))
    neg = sorted(((t, c) for t, c in named if c < 0), key=lambda tc: (tc[1], tc[0]))
    return pos[:n], neg[:n]
