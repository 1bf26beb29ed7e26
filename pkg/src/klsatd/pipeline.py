"""Manifest-driven composition of the extraction, labeling and training stages."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Collection, Sequence

import numpy as np

from .extractor import RawComment, SkipRecord, extract_comments, scan_tree
from .features import DocTermMatrix, Weighting, build_matrix, class_weights, refit_idf, rows_to_csr, tfidf_row
from .labeler import DEFAULT_KEYWORDS, LabeledComment, label_all
from .model import CvResult, cross_validate
from .preprocess import Vocabulary, build_vocabulary, clean_corpus

log = logging.getLogger(__name__)

MANIFEST_COLUMNS = ("repo_id", "root_path", "n_commits", "n_developers", "loc", "duration_months")
COVARIATES = MANIFEST_COLUMNS[2:]


@dataclass
class RepoEntry:
    repo_id: str
    root_path: Path
    covariates: dict[str, float] = field(default_factory=dict)


@dataclass
class RepoManifest:
    repos: list[RepoEntry]
    exclusions_path: Path | None = None

    def covariate_table(self) -> dict[str, dict[str, float]]:
        table: dict[str, dict[str, float]] = {}
        for name in COVARIATES:
            values = {r.repo_id: r.covariates[name] for r in self.repos if name in r.covariates}
            if values:
                table[name] = values
        return table


def load_manifest(path, check_paths: bool = True) -> RepoManifest:
    """Read a repository manifest CSV; relative root paths resolve against its directory."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        if "repo_id" not in header or "root_path" not in header:
            raise ValueError(f"manifest {path} needs at least columns repo_id,root_path")
        repos = []
        seen = set()
        for lineno, row in enumerate(reader, start=2):
            repo_id = (row.get("repo_id") or "").strip()
            if not repo_id:
                raise ValueError(f"{path}:{lineno}: empty repo_id")
            if repo_id in seen:
                raise ValueError(f"{path}:{lineno}: duplicate repo_id {repo_id!r}")
            seen.add(repo_id)
            root = Path(row["root_path"].strip())
            if not root.is_absolute():
                root = path.parent / root
            if check_paths and not root.is_dir():
                raise FileNotFoundError(f"{path}:{lineno}: root_path does not exist: {root}")
            cov = {}
            for name in COVARIATES:
                raw = (row.get(name) or "").strip()
                if raw:
                    try:
                        cov[name] = float(raw)
                    except ValueError:
                        raise ValueError(f"{path}:{lineno}: {name} is not numeric: {raw!r}") from None
            repos.append(RepoEntry(repo_id, root, cov))
    return RepoManifest(repos)


def extract_manifest(manifest: RepoManifest, skipped: list[SkipRecord] | None = None) -> list[RawComment]:
    comments = []
    for repo in manifest.repos:
        files = scan_tree(repo.root_path, repo.repo_id, skipped)
        log.info("%s: %d java files", repo.repo_id, len(files))
        for f in files:
            comments.extend(extract_comments(f))
    return comments


@dataclass
class Corpus:
    raw: list[RawComment]
    labeled: list[LabeledComment]
    skipped: list[SkipRecord]


def load_corpus(manifest: RepoManifest, *, keywords: Collection[str] = DEFAULT_KEYWORDS,
                stopwords: Collection[str] | None = None,
                exclusions: Collection[tuple[str, str]] | None = None) -> Corpus:
    skipped: list[SkipRecord] = []
    raw = extract_manifest(manifest, skipped)
    clean = clean_corpus(raw, exclusions, stopwords)
    return Corpus(raw, label_all(clean, keywords), skipped)


@dataclass
class TrainResult:
    vocab: Vocabulary
    matrix: DocTermMatrix
    cv: CvResult


def fold_idf_builder(docs: Sequence[LabeledComment], vocab: Vocabulary, weighting: Weighting):
    """Fold builder recomputing idf on each training split (see ``cross_validate``)."""
    labels = np.array([1 if d.is_kl_satd else 0 for d in docs], dtype=np.int8)

    def build(idx, fold_vocab):
        rows = [tfidf_row(docs[i].features_tokens, fold_vocab) for i in idx]
        lab = labels[idx]
        return DocTermMatrix(rows_to_csr(rows, len(fold_vocab)), lab, class_weights(lab, weighting),
                             [docs[i].doc_id for i in idx], fold_vocab.fingerprint, weighting)

    def builder(train, test):
        fold_vocab = refit_idf(vocab, [docs[i] for i in train])
        return build(train, fold_vocab), build(test, fold_vocab)

    return builder


def train(labeled: Sequence[LabeledComment], *, min_repos: int = 5,
          weighting: Weighting = Weighting.BALANCED, k: int = 10, seed: int = 42,
          n_lambdas: int = 100, ratio: float = 1e-4, idf_scope: str = "global",
          keywords: Collection[str] = DEFAULT_KEYWORDS) -> TrainResult:
    weighting = Weighting(weighting)
    vocab = build_vocabulary([d.clean for d in labeled], min_repos, keywords)
    if not len(vocab):
        raise ValueError(f"no term appears in at least {min_repos} repositories; lower --min-repos")
    matrix = build_matrix(labeled, vocab, weighting)
    builder = None
    if idf_scope == "fold":
        # same rows build_matrix kept: at least one in-vocabulary feature
        docs = [d for d in labeled if any(t in vocab.terms for t in d.features_tokens)]
        builder = fold_idf_builder(docs, vocab, weighting)
    elif idf_scope != "global":
        raise ValueError(f"unknown idf scope {idf_scope!r}")
    cv = cross_validate(matrix, k, seed, n_lambdas=n_lambdas, ratio=ratio, fold_builder=builder)
    cv.best_model.training_meta.update({
        "min_repos": min_repos,
        "keywords": list(keywords),
        "n_lambdas": n_lambdas,
        "ratio": ratio,
        "idf_scope": idf_scope,
    })
    return TrainResult(vocab, matrix, cv)
