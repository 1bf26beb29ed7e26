"""Comment extraction from Java source trees.

The lexer is a small state machine over the raw text. It masks string
literals, char literals and text blocks so that comment markers inside
them are never reported, and it never nests block comments.
"""

from __future__ import annotations

import bisect
import logging
import os
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator

log = logging.getLogger(__name__)


class CommentKind(str, Enum):
    LINE = "Line"
    BLOCK = "Block"


@dataclass(frozen=True)
class SourceFile:
    repo_id: str
    path: str
    content: str


@dataclass(frozen=True)
class RawComment:
    repo_id: str
    path: str
    line_start: int
    line_end: int
    kind: CommentKind
    text: str
    # True when the block opened with ``/**`` (javadoc style)
    javadoc: bool = False
    # character offsets [start, end) into the newline-normalized content
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass
class SkipRecord:
    path: str
    reason: str


def scan_tree(root, repo_id: str, skipped: list[SkipRecord] | None = None) -> list[SourceFile]:
    """Return every ``*.java`` file under `root` (case-insensitive), sorted by relative path.

    Files that cannot be read are logged, appended to `skipped` and left out.
    """
    root = Path(root)
    if not root.is_dir() or not os.access(root, os.R_OK | os.X_OK):
        raise FileNotFoundError(f"source root is not a readable directory: {root}")

    rel_paths = []
    for dirpath, dirnames, filenames in os.walk(root, onerror=_raise):
        dirnames.sort()
        for name in filenames:
            if not name.lower().endswith(".java"):
                continue
            full = Path(dirpath) / name
            if not full.is_file():
                continue
            rel_paths.append(full.relative_to(root).as_posix())
    rel_paths.sort()

    files = []
    for rel in rel_paths:
        try:
            data = (root / rel).read_bytes()
        except OSError as exc:
            log.warning("skipping unreadable file %s/%s: %s", repo_id, rel, exc)
            if skipped is not None:
                skipped.append(SkipRecord(rel, str(exc)))
            continue
        files.append(SourceFile(repo_id, rel, data.decode("utf-8", errors="replace")))
    return files


def _raise(exc):
    raise exc


# Characters that can change lexer state while in code.
_CODE_INTEREST = re.compile(r'["\'/]')
_LINE_END = re.compile(r"\n")


def _normalize_newlines(text: str) -> str:
    return text.replace("\r\n", "\n").replace("\r", "\n")


def lex_comment_spans(text: str) -> list[tuple[int, int, CommentKind]]:
    """Locate comments in newline-normalized `text`.

    Returns ``(start, end, kind)`` triples with `end` exclusive. Line
    comment spans stop before the newline. An unterminated block comment
    runs to the end of the text.
    """
    spans = []
    n = len(text)
    i = 0
    while i < n:
        m = _CODE_INTEREST.search(text, i)
        if m is None:
            break
        i = m.start()
        ch = text[i]
        if ch == "/":
            nxt = text[i + 1] if i + 1 < n else ""
            if nxt == "/":
                end = text.find("\n", i)
                end = n if end < 0 else end
                spans.append((i, end, CommentKind.LINE))
                i = end
            elif nxt == "*":
                close = text.find("*/", i + 2)
                end = n if close < 0 else close + 2
                spans.append((i, end, CommentKind.BLOCK))
                i = end
            else:
                i += 1
        elif ch == '"' and text.startswith('"""', i):
            i = _skip_text_block(text, i + 3)
        else:
            i = _skip_literal(text, i + 1, ch)
    return spans


def _skip_literal(text: str, i: int, quote: str) -> int:
    # Single-line literal; a raw newline ends a malformed literal.
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\\":
            i += 2
        elif ch == quote:
            return i + 1
        elif ch == "\n":
            return i
        else:
            i += 1
    return n


def _skip_text_block(text: str, i: int) -> int:
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\\":
            i += 2
        elif ch == '"' and text.startswith('"""', i):
            return i + 3
        else:
            i += 1
    return n


def _clean_block(body: str) -> str:
    lines = []
    for line in body.split("\n"):
        line = line.strip().lstrip("*").strip()
        lines.append(line)
    while lines and not lines[0]:
        lines.pop(0)
    while lines and not lines[-1]:
        lines.pop()
    return "\n".join(lines)


def extract_comments(file: SourceFile) -> list[RawComment]:
    """Extract every ``//`` and ``/* */`` comment of `file` in source order."""
    text = _normalize_newlines(file.content)
    line_starts = [0] + [m.end() for m in _LINE_END.finditer(text)]

    def line_of(offset: int) -> int:
        return bisect.bisect_right(line_starts, offset)

    out = []
    for start, end, kind in lex_comment_spans(text):
        if kind is CommentKind.LINE:
            body = text[start + 2:end].lstrip("/").strip()
            javadoc = False
            last = start
        else:
            terminated = text.startswith("*/", end - 2) and end - 2 >= start + 2
            raw = text[start + 2:end - 2] if terminated else text[start + 2:end]
            javadoc = raw.startswith("*") and raw != "*"
            body = _clean_block(raw)
            last = max(start, end - 1)
        out.append(RawComment(
            repo_id=file.repo_id,
            path=file.path,
            line_start=line_of(start),
            line_end=line_of(last),
            kind=kind,
            text=body,
            javadoc=javadoc,
            span=(start, end),
        ))
    return out


def extract_all(files: Iterable[SourceFile]) -> Iterator[RawComment]:
    for f in files:
        yield from extract_comments(f)
