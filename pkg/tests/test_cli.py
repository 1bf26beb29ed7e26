import csv
import filecmp
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from conftest import FIXTURES, HERE
from oracles import dense_tfidf
from reference_lexer import reference_comments
from klsatd.cli import build_parser, main

E2E = FIXTURES / "e2e"
GOLDEN = HERE / "golden"
GOLDEN_ARGS = ["--manifest", str(E2E / "manifest.csv"), "--min-repos", "2",
               "--exclusions", str(E2E / "exclusions.csv"), "--no-figures"]


@pytest.fixture(scope="module")
def golden_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    assert main(["run", *GOLDEN_ARGS, "--out-dir", str(out)]) == 0
    return out


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def test_golden_files_identical(golden_run):
    names = sorted(p.name for p in GOLDEN.iterdir())
    assert names
    match, mismatch, errors = filecmp.cmpfiles(GOLDEN, golden_run, names, shallow=False)
    assert mismatch == [] and errors == []


def test_train_twice_identical_model(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["train", *GOLDEN_ARGS, "--out-dir", str(out)]) == 0
    assert (a / "model.json").read_bytes() == (b / "model.json").read_bytes()


def test_comments_match_reference_lexer(golden_run):
    rows = read_csv(golden_run / "comments.csv")
    expected = []
    for repo in ("alpha", "beta", "gamma"):
        for f in sorted((E2E / repo).rglob("*.java"), key=lambda p: p.relative_to(E2E / repo).as_posix()):
            rel = f.relative_to(E2E / repo).as_posix()
            for ls, le, kind, _, _, text in reference_comments(f.read_text()):
                expected.append([repo, rel, str(ls), str(le), kind, text])
    assert [list(r.values()) for r in rows] == expected


def test_flagged_rederived_independently(golden_run):
    """Recompute the flagged list from golden model + cleaned corpus with the dense oracle."""
    model = json.loads((golden_run / "model.json").read_text())
    vocab_rows = read_csv(golden_run / "vocabulary.csv")
    terms = [r["term"] for r in vocab_rows]
    corpus = read_csv(golden_run / "clean_corpus.csv")
    keywords = set(model["training_meta"]["keywords"])
    docs = [[t for t in r["tokens"].split() if t not in keywords] for r in corpus]
    weights, df = dense_tfidf(docs, terms)
    assert [int(r["doc_freq"]) for r in vocab_rows] == list(df.astype(int))
    beta = np.array([model["coefficients"].get(t, 0.0) for t in terms])
    eta = weights @ beta + model["intercept"]
    probs = 1 / (1 + np.exp(-eta))

    raw_by_id = {}
    for r in read_csv(golden_run / "comments.csv"):
        raw_by_id.setdefault((r["repo_id"], r["path"], r["line_start"]), r["text"])
    cand = [(p, (r["repo_id"], r["path"], int(r["line_start"])), raw_by_id[(r["repo_id"], r["path"], r["line_start"])])
            for p, r, d in zip(probs, corpus, docs)
            if r["is_kl_satd"] == "0" and d and p > 0.70]
    cand.sort(key=lambda c: (-c[0], c[1]))
    seen, expected = set(), []
    for p, doc_id, text in cand:
        if text.strip() not in seen:
            seen.add(text.strip())
            expected.append((doc_id, round(p, 6)))
    got = [((r["repo_id"], r["path"], int(r["line_start"])), float(r["probability"]))
           for r in read_csv(golden_run / "flagged.csv")]
    assert [g[0] for g in got] == [e[0] for e in expected]
    for (_, gp), (_, ep) in zip(got, expected):
        assert math.isclose(gp, ep, abs_tol=1.5e-6)


def test_stats_single_repo(tmp_path):
    repo = tmp_path / "one"
    repo.mkdir()
    lines = [f"    // TODO tidy module number{i}" for i in range(2)]
    lines += [f"    // describes element number{i}" for i in range(98)]
    (repo / "A.java").write_text("class A {\n" + "\n".join(lines) + "\n}\n")
    (tmp_path / "m.csv").write_text("repo_id,root_path\none,one\n")
    out = tmp_path / "out"
    assert main(["stats", "--manifest", str(tmp_path / "m.csv"), "--out-dir", str(out), "--no-figures"]) == 0
    summary = {r["statistic"]: r for r in read_csv(out / "summary.csv")}
    assert summary["median"]["kl_percentage"] == "2.00%"
    assert read_csv(out / "repo_stats.csv")[0]["kl_percentage"] == "2.00"


def test_figures_rendered(tmp_path):
    out = tmp_path / "figs"
    args = [a for a in GOLDEN_ARGS if a != "--no-figures"]
    assert main(["run", *args, "--out-dir", str(out)]) == 0
    for name in ("prevalence.png", "word_comparison.png", "cv_curve.png", "coefficients.png",
                 "flag_scores.png"):
        assert (out / name).read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_help_documents_defaults():
    text = build_parser()._subparsers._group_actions[0].choices["run"].format_help()
    text = " ".join(text.split())
    for needle in ("folds (default: 10)", "(default: 42)", "repositories (default: 5)",
                   "(default: 0.7)", "path (default: 100)", "(default: 0.0001)",
                   "--weighting {balanced,uniform}", "--stopwords", "--exclusions", "--keywords",
                   "--manifest", "--out-dir", "--cutoff"):
        assert needle in text, needle


def test_module_entry_point_help():
    res = subprocess.run([sys.executable, "-m", "klsatd", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "train" in res.stdout


def test_missing_manifest(tmp_path, capsys):
    assert main(["stats", "--manifest", str(tmp_path / "nope.csv"), "--out-dir", str(tmp_path)]) == 1
    err = capsys.readouterr().err.strip()
    assert err.startswith("klsatd stats: error:") and "\n" not in err


def test_missing_root(tmp_path, capsys):
    (tmp_path / "m.csv").write_text("repo_id,root_path\nx,does/not/exist\n")
    assert main(["extract", "--manifest", str(tmp_path / "m.csv"), "--out-dir", str(tmp_path)]) == 1
    assert "root_path does not exist" in capsys.readouterr().err


def test_untrainable(tmp_path, capsys):
    repo = tmp_path / "r"
    repo.mkdir()
    (repo / "A.java").write_text("// plain words only\n// more plain words\n")
    (tmp_path / "m.csv").write_text("repo_id,root_path\nr,r\n")
    assert main(["train", "--manifest", str(tmp_path / "m.csv"), "--min-repos", "1",
                 "--out-dir", str(tmp_path / "o"), "--no-figures"]) == 1
    assert "both classes" in capsys.readouterr().err


def test_flag_vocabulary_drift(tmp_path, capsys, golden_run):
    out = tmp_path / "o"
    rc = main(["flag", "--manifest", str(E2E / "manifest.csv"), "--min-repos", "3",
               "--model", str(golden_run / "model.json"), "--out-dir", str(out), "--no-figures"])
    assert rc == 1
    assert "does not match" in capsys.readouterr().err


def test_keyword_hygiene_on_outputs(golden_run):
    model = json.loads((golden_run / "model.json").read_text())
    kw = {"todo", "fixme", "hack", "xxx"}
    assert not kw & set(model["coefficients"])
    for r in read_csv(golden_run / "flagged.csv"):
        words = {w.strip(":,.").lower() for w in r["text"].split()}
        assert not kw & words


def test_rerun_overwrites(tmp_path):
    out = tmp_path / "o"
    for _ in range(2):
        assert main(["words", "--manifest", str(E2E / "manifest.csv"), "--no-figures",
                     "--out-dir", str(out)]) == 0
    assert [p.name for p in out.iterdir() if p.name.startswith(".")] == []
