"""Keyword-labeled self-admitted technical debt: comment mining and lasso detection."""

from .extractor import CommentKind, RawComment, SourceFile, extract_comments, scan_tree
from .features import DocTermMatrix, SparseRow, Weighting, build_matrix, tfidf_row
from .labeler import DEFAULT_KEYWORDS, LabeledComment, label
from .model import (
    LassoModel,
    cross_validate,
    fit,
    fit_path,
    lambda_path,
    predict_proba,
    stratified_kfold,
    top_coefficients,
)
from .pipeline import Corpus, RepoManifest, TrainResult, load_corpus, load_manifest, train
from .preprocess import CleanComment, Vocabulary, build_vocabulary, clean_corpus, tokenize
from .report import Flagged, flag_omitted

__version__ = "0.1.0"
