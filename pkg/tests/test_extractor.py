import os
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXTURES
from reference_lexer import reference_comments
from klsatd.extractor import CommentKind, SourceFile, extract_comments, scan_tree

LEXER_FIXTURES = sorted((FIXTURES / "lexer").glob("*.java"))


def _extract(text, path="X.java"):
    return extract_comments(SourceFile("r", path, text))


def _as_tuples(comments):
    return [(c.line_start, c.line_end, c.kind.value, c.span[0], c.span[1], c.text) for c in comments]


def test_scan_tree_filters_and_orders(tmp_path):
    (tmp_path / "b").mkdir()
    (tmp_path / "A.java").write_text("class A {}")
    (tmp_path / "b" / "C.java").write_text("class C {}")
    (tmp_path / "readme.md").write_text("# hi")
    files = scan_tree(tmp_path, "repo")
    assert [f.path for f in files] == ["A.java", "b/C.java"]
    assert all(f.repo_id == "repo" for f in files)


def test_scan_tree_empty_dir(tmp_path):
    assert scan_tree(tmp_path, "r") == []


def test_scan_tree_uppercase_extension(tmp_path):
    (tmp_path / "X.JAVA").write_text("// hi")
    assert [f.path for f in scan_tree(tmp_path, "r")] == ["X.JAVA"]


def test_scan_tree_missing_root(tmp_path):
    with pytest.raises(FileNotFoundError):
        scan_tree(tmp_path / "nope", "r")


@pytest.mark.skipif(os.geteuid() == 0, reason="root can read unreadable files")
def test_scan_tree_skips_unreadable(tmp_path):
    bad = tmp_path / "Bad.java"
    bad.write_text("// x")
    bad.chmod(0)
    (tmp_path / "Good.java").write_text("// y")
    skipped = []
    files = scan_tree(tmp_path, "r", skipped)
    assert [f.path for f in files] == ["Good.java"]
    assert [s.path for s in skipped] == ["Bad.java"]


def test_invalid_utf8_is_replaced(tmp_path):
    (tmp_path / "Bin.java").write_bytes(b"// caf\xe9 TODO\nclass A {}\n")
    (f,) = scan_tree(tmp_path, "r")
    (c,) = extract_comments(f)
    assert c.text == "caf� TODO"


def test_single_line_comment():
    (c,) = _extract("int x; // TODO fix")
    assert (c.kind, c.text, c.line_start, c.line_end) == (CommentKind.LINE, "TODO fix", 1, 1)


def test_string_literal_masks_marker():
    assert _extract('String s = "// not a comment";') == []


def test_block_comment_gutter_and_lines():
    src = "a;\nb;\n/* a\n * b\n */\n"
    (c,) = _extract(src)
    assert (c.kind, c.line_start, c.line_end, c.text) == (CommentKind.BLOCK, 3, 5, "a\nb")


def test_javadoc_flag():
    assert _extract("/** doc */")[0].javadoc
    assert not _extract("/* plain */")[0].javadoc
    assert not _extract("/**/")[0].javadoc


def test_unterminated_block_runs_to_last_line():
    (c,) = _extract("x;\n/* open\nstill\n")
    assert (c.line_start, c.line_end, c.text) == (2, 3, "open\nstill")


@pytest.mark.parametrize("path", LEXER_FIXTURES, ids=lambda p: p.name)
def test_fixture_matches_reference(path):
    content = path.read_bytes().decode("utf-8", errors="replace")
    assert _as_tuples(_extract(content, path.name)) == reference_comments(content)


def test_fixture_suite_is_large_enough():
    assert len(LEXER_FIXTURES) >= 20


@pytest.mark.parametrize("path", LEXER_FIXTURES, ids=lambda p: p.name)
def test_spans_partition_file(path):
    content = path.read_text(encoding="utf-8").replace("\r\n", "\n")
    comments = _extract(content)
    n_lines = content.count("\n") + 1
    prev_end = 0
    for c in comments:
        start, end = c.span
        assert prev_end <= start < end <= len(content)
        assert 1 <= c.line_start <= c.line_end <= n_lines
        if c.kind is CommentKind.LINE:
            assert c.line_start == c.line_end
        prev_end = end
    # stitching the comment and non-comment pieces back gives the original text
    pieces, pos = [], 0
    for c in comments:
        pieces.append(content[pos:c.span[0]])
        pieces.append(content[c.span[0]:c.span[1]])
        pos = c.span[1]
    pieces.append(content[pos:])
    assert "".join(pieces).count("\n") + 1 == n_lines


def test_deterministic():
    content = (FIXTURES / "lexer" / "05_char_literals.java").read_text()
    assert _extract(content) == _extract(content)


TRICKY = st.lists(st.sampled_from(["/", "*", '"', "'", "\\", "\n", "a", " ", '"""', "\r"]),
                  max_size=40).map("".join)


@settings(max_examples=500, deadline=None)
@given(TRICKY)
def test_random_text_matches_reference(text):
    assert _as_tuples(_extract(text)) == reference_comments(text)


@given(st.text(alphabet=st.characters(blacklist_characters="/")))
def test_no_slash_no_comments(text):
    assert _extract(text) == []


def test_real_corpus_matches_reference():
    root = os.environ.get("KLSATD_JAVA_CORPUS")
    if not root:
        pytest.skip("set KLSATD_JAVA_CORPUS to a directory of Java sources")
    files = scan_tree(Path(root), "corpus")
    assert files
    for f in files:
        assert _as_tuples(extract_comments(f)) == reference_comments(f.content), f.path
