"""Command line interface: ``klsatd {extract,stats,train,flag,words,run}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import outputs
from .features import UntrainableError, Weighting
from .labeler import DEFAULT_KEYWORDS, parse_keywords
from .model import LassoModel, VocabularyDriftError, top_coefficients
from .pipeline import load_corpus, load_manifest, train
from .preprocess import build_vocabulary, load_exclusions, load_stopwords
from .report import DEFAULT_CUTOFF, flag_omitted, flagged_csv, flagged_jsonl, score_comments
from .evaluation import prevalence, repo_correlations, word_comparison

log = logging.getLogger("klsatd")

DEFAULTS = {
    "k": 10,
    "seed": 42,
    "min_repos": 5,
    "cutoff": DEFAULT_CUTOFF,
    "n_lambdas": 100,
    "ratio": 1e-4,
    "top": 10,
}


def _unit_interval(text):
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"{text} is not strictly between 0 and 1")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text} is not a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--manifest", required=True, type=Path,
                        help="CSV with header repo_id,root_path,n_commits,n_developers,loc,duration_months")
    common.add_argument("--out-dir", type=Path, default=Path("out"),
                        help="directory for output files (default: %(default)s)")
    common.add_argument("--keywords", type=parse_keywords, default=DEFAULT_KEYWORDS,
                        help="comma separated SATD keywords (default: %s)" % ",".join(DEFAULT_KEYWORDS))
    common.add_argument("--stopwords", type=Path, default=None,
                        help="stopword file, one word per line (default: bundled 174-word English list)")
    common.add_argument("--exclusions", type=Path, default=None,
                        help="CSV of repo_id,path files to drop, e.g. renamed files (default: none)")
    common.add_argument("--no-figures", action="store_true", help="skip rendering PNG figures")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    vocab = argparse.ArgumentParser(add_help=False)
    vocab.add_argument("--min-repos", type=_positive_int, default=DEFAULTS["min_repos"],
                       help="keep terms seen in at least this many repositories (default: %(default)s)")

    training = argparse.ArgumentParser(add_help=False)
    training.add_argument("--k", type=_positive_int, default=DEFAULTS["k"],
                          help="cross-validation folds (default: %(default)s)")
    training.add_argument("--seed", type=int, default=DEFAULTS["seed"],
                          help="seed for fold assignment (default: %(default)s)")
    training.add_argument("--weighting", choices=[w.value for w in Weighting], default="balanced",
                          help="instance weighting (default: %(default)s)")
    training.add_argument("--n-lambdas", type=_positive_int, default=DEFAULTS["n_lambdas"],
                          help="length of the penalty path (default: %(default)s)")
    training.add_argument("--ratio", type=_unit_interval, default=DEFAULTS["ratio"],
                          help="smallest/largest penalty on the path (default: %(default)s)")
    training.add_argument("--idf-scope", choices=["global", "fold"], default="global",
                          help="compute idf once or per training fold (default: %(default)s)")
    training.add_argument("--top", type=_positive_int, default=DEFAULTS["top"],
                          help="coefficients listed per direction (default: %(default)s)")

    flagging = argparse.ArgumentParser(add_help=False)
    flagging.add_argument("--model", type=Path, default=None,
                          help="model JSON (default: <out-dir>/model.json)")
    flagging.add_argument("--cutoff", type=_unit_interval, default=DEFAULTS["cutoff"],
                          help="flag comments with probability above this (default: %(default)s)")

    parser = argparse.ArgumentParser(
        prog="klsatd",
        description="Mine Java comments for keyword-labeled self-admitted technical debt "
                    "and flag comments that omitted the keyword.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("extract", parents=[common], help="dump raw and cleaned comments as CSV")
    sub.add_parser("stats", parents=[common], help="per-repository KL-SATD prevalence")
    sub.add_parser("words", parents=[common], help="word frequency comparison by class")
    sub.add_parser("train", parents=[common, vocab, training],
                   help="cross-validate the lasso path and save the best model")
    sub.add_parser("flag", parents=[common, vocab, flagging],
                   help="list non-keyword comments the model scores as SATD")
    sub.add_parser("run", parents=[common, vocab, training, flagging],
                   help="extract, stats, words, train and flag in one go")
    return parser


def _load(args):
    manifest = load_manifest(args.manifest)
    stopwords = load_stopwords(args.stopwords)
    exclusions = load_exclusions(args.exclusions) if args.exclusions else None
    return manifest, load_corpus(manifest, keywords=args.keywords, stopwords=stopwords,
                                 exclusions=exclusions)


def _write(args, name, text):
    path = outputs.atomic_write_text(args.out_dir / name, text)
    log.info("wrote %s", path)
    return path


def _figure(args, fn, *fargs):
    if args.no_figures:
        return
    from . import plotting

    getattr(plotting, fn)(*fargs)


def cmd_extract(args, manifest, corpus):
    _write(args, "comments.csv", outputs.comments_csv(corpus.raw))
    _write(args, "clean_corpus.csv", outputs.clean_corpus_csv(corpus.labeled))
    if corpus.skipped:
        _write(args, "skipped.csv",
               outputs.to_csv(("path", "reason"), ((s.path, s.reason) for s in corpus.skipped)))
    print(f"{len(corpus.raw)} comments extracted, {len(corpus.labeled)} kept after cleaning")


def cmd_stats(args, manifest, corpus):
    prev = prevalence(corpus.labeled)
    _write(args, "repo_stats.csv", outputs.repo_stats_csv(prev))
    _write(args, "summary.csv", outputs.summary_csv(prev))
    corr = repo_correlations(prev.repos, manifest.covariate_table())
    if corr:
        _write(args, "spearman.csv", outputs.spearman_csv(corr))
    _figure(args, "plot_prevalence", prev, args.out_dir / "prevalence.png")
    n, k, pct = prev.summary["median"]
    print(f"{prev.total_comments} comments, {prev.total_kl_satd} KL-SATD; "
          f"median {pct:.2f}%, mean {prev.summary['mean'][2]:.2f}%")
    for row in corr:
        print(f"spearman({row.variable}, kl_percentage) = {row.rho:.2f} over {row.n_repos} repos")


def cmd_words(args, manifest, corpus):
    rows = word_comparison(corpus.labeled)
    _write(args, "word_comparison.csv", outputs.word_comparison_csv(rows))
    _figure(args, "plot_word_comparison", rows, args.out_dir / "word_comparison.png")
    print("most KL-SATD-leaning words: " + ", ".join(r.term for r in rows[:10]))


def cmd_train(args, manifest, corpus):
    result = train(corpus.labeled, min_repos=args.min_repos, weighting=Weighting(args.weighting),
                   k=args.k, seed=args.seed, n_lambdas=args.n_lambdas, ratio=args.ratio,
                   idf_scope=args.idf_scope, keywords=args.keywords)
    terms = result.vocab.term_list()
    model = result.cv.best_model
    pos, neg = top_coefficients(model, terms, args.top)
    _write(args, "model.json", model.to_json(terms))
    _write(args, "vocabulary.csv", outputs.vocabulary_csv(result.vocab))
    _write(args, "cv_curve.csv", outputs.cv_curve_csv(result.cv))
    _write(args, "top_coefficients.csv", outputs.coefficients_csv(pos, neg))
    _figure(args, "plot_cv_curve", result.cv, args.out_dir / "cv_curve.png")
    _figure(args, "plot_coefficients", pos, neg, args.out_dir / "coefficients.png")
    print(f"best lambda {result.cv.best_lambda:.6g}: mean AUC {result.cv.best_auc:.4f} "
          f"({model.n_nonzero} nonzero coefficients, {len(result.matrix)} training rows)")
    print(f"{'rank':>4}  {'positive':<20}{'negative':<20}")
    for i in range(max(len(pos), len(neg))):
        p = pos[i][0] if i < len(pos) else ""
        n = neg[i][0] if i < len(neg) else ""
        print(f"{i + 1:>4}  {p:<20}{n:<20}")


def cmd_flag(args, manifest, corpus):
    model_path = args.model or args.out_dir / "model.json"
    vocab = build_vocabulary([d.clean for d in corpus.labeled], args.min_repos, args.keywords)
    model = LassoModel.from_json(Path(model_path).read_text(encoding="utf-8"), vocab)
    flagged = flag_omitted(model, corpus.labeled, vocab, args.cutoff)
    _write(args, "flagged.jsonl", flagged_jsonl(flagged))
    _write(args, "flagged.csv", flagged_csv(flagged))
    if not args.no_figures:
        probs = [p for _, p in score_comments(model, corpus.labeled, vocab)]
        _figure(args, "plot_flag_scores", probs, args.cutoff, args.out_dir / "flag_scores.png")
    print(f"{len(flagged)} unique comments above cutoff {args.cutoff:.2f}")


def cmd_run(args, manifest, corpus):
    for step in (cmd_extract, cmd_stats, cmd_words, cmd_train, cmd_flag):
        step(args, manifest, corpus)


COMMANDS = {
    "extract": cmd_extract,
    "stats": cmd_stats,
    "words": cmd_words,
    "train": cmd_train,
    "flag": cmd_flag,
    "run": cmd_run,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        manifest, corpus = _load(args)
        COMMANDS[args.command](args, manifest, corpus)
    except (UntrainableError, VocabularyDriftError, ValueError, OSError) as exc:
        print(f"klsatd {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
