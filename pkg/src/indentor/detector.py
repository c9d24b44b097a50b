"""Style detection and CI-style checking.

Every braced block that belongs to a header yields one
:class:`Observation` measured from the original token positions.  A style
scores the fraction of observations its layout rules would have produced.
Columns are measured with tabs expanded to 8-column stops.
"""

from __future__ import annotations

import difflib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, NamedTuple, Optional

from .blocktree import (Block, BlockTree, Comment, Header, HeaderKind, Label, Node, Statement,
                        iter_tokens, parse_blocks)
from .lexer import Token, TokenKind, significant, tokenize
from .render import format_source, spaced
from .styles import (BUILTIN_STYLES, BodyRelativeTo, BracePlacement, CloseBracePlacement,
                     FormatConfig, StyleSpec)

TAB_STOP = 8
AMBIGUOUS = "Ambiguous"
DEFAULT_WIDTH = FormatConfig().max_line_width


class OpenRelation(Enum):
    SAME_LINE = "SameLine"
    NEXT_LINE_AT_HEADER = "NextLineAtHeader"
    NEXT_LINE_INDENTED = "NextLineIndented"
    OTHER = "Other"


class CloseRelation(Enum):
    HEADER_COLUMN = "HeaderColumn"
    BRACE_COLUMN = "BraceColumn"
    BODY_COLUMN = "BodyColumn"
    CUDDLED = "Cuddled"
    OTHER = "Other"


@dataclass(frozen=True)
class Observation:
    construct: HeaderKind
    open_brace_relation: OpenRelation
    close_brace_relation: CloseRelation
    body_indent_delta: int
    line: int
    header_col: int
    brace_col: int
    close_col: int
    body_col: Optional[int] = None
    statement_on_brace_line: bool = False
    first_child_is_code: bool = False
    single_line: bool = False
    # header column + length of the one-line form, for short function bodies
    one_line_length: Optional[int] = None
    # (visual column, raw leading whitespace) of each own-line body/close line
    indents: tuple[tuple[int, str], ...] = ()


class Deviation(NamedTuple):
    line: int
    expected: str
    found: str


@dataclass
class StyleReport:
    scores: dict[str, float]
    best: str
    observations_total: int
    deviations: list[Deviation] = field(default_factory=list)
    file: str = "<stdin>"

    def to_dict(self) -> dict:
        return {
            "file": self.file,
            "scores": dict(self.scores),
            "best": self.best,
            "deviations": [d._asdict() for d in self.deviations],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_text(self) -> str:
        out = [f"{self.file}: best style {self.best} ({self.observations_total} observations)"]
        for name, score in sorted(self.scores.items(), key=lambda kv: (-kv[1], kv[0])):
            out.append(f"  {name:<12} {score:.3f}")
        for d in self.deviations:
            out.append(f"{self.file}:{d.line}: expected {d.expected}, found {d.found}")
        return "\n".join(out) + "\n"


class _Source:
    def __init__(self, source: str):
        self.lines = [ln.rstrip("\r") for ln in source.split("\n")]

    def vcol(self, tok: Token) -> int:
        return len(self.lines[tok.line - 1][:tok.column - 1].expandtabs(TAB_STOP))

    def indent(self, lineno: int) -> tuple[int, str]:
        text = self.lines[lineno - 1]
        raw = text[:len(text) - len(text.lstrip(" \t"))]
        return len(raw.expandtabs(TAB_STOP)), raw

    def starts_line(self, tok: Token) -> bool:
        return not self.lines[tok.line - 1][:tok.column - 1].strip()


def _headers(nodes: list[Node]) -> Iterator[Header]:
    for node in nodes:
        if isinstance(node, Header):
            yield node
            yield from _headers([node.body])
            if node.orelse is not None:
                yield from _headers([node.orelse])
        elif isinstance(node, Block):
            yield from _headers(node.children)


def _observe_one(h: Header, src: _Source) -> Observation:
    block = h.body
    assert isinstance(block, Block)
    first = h.tokens[0]
    header_col = src.vcol(first)
    if h.kind in (HeaderKind.ELSE, HeaderKind.ELSE_IF) and not src.starts_line(first):
        line_text = src.lines[first.line - 1].lstrip(" \t")
        if line_text.startswith("}"):
            header_col = src.indent(first.line)[0]
    header_end = max(t.end_line for t in h.tokens + [c.token for c in h.comments])
    opener, closer = block.open, block.close
    brace_col = src.vcol(opener)
    if opener.line == header_end:
        open_rel = OpenRelation.SAME_LINE
    elif brace_col == header_col:
        open_rel = OpenRelation.NEXT_LINE_AT_HEADER
    elif brace_col > header_col:
        open_rel = OpenRelation.NEXT_LINE_INDENTED
    else:
        open_rel = OpenRelation.OTHER

    children = block.children
    code = [c for c in children if not isinstance(c, Comment)]
    if h.kind is HeaderKind.CLASS_DEF:
        code = [c for c in code if not isinstance(c, Label)]
    body_col = None
    indents = []
    if code:
        body_col = src.vcol(next(iter_tokens(code[0])))
    for child in children:
        tok = next(iter_tokens(child))
        if src.starts_line(tok) and tok.line != opener.line:
            indents.append(src.indent(tok.line))
    stmt_on_brace = bool(children) and not isinstance(children[0], Comment) \
        and next(iter_tokens(children[0])).line == opener.line
    last_line = max(t.end_line for t in iter_tokens(children[-1])) if children else opener.line

    close_col = src.vcol(closer)
    if closer.line == last_line:
        close_rel = CloseRelation.CUDDLED
    else:
        indents.append(src.indent(closer.line))
        if close_col == header_col:
            close_rel = CloseRelation.HEADER_COLUMN
        elif open_rel is not OpenRelation.SAME_LINE and close_col == brace_col:
            close_rel = CloseRelation.BRACE_COLUMN
        elif (body_col is not None and close_col == body_col) or (body_col is None and close_col > header_col):
            close_rel = CloseRelation.BODY_COLUMN
        else:
            close_rel = CloseRelation.OTHER
    return Observation(
        construct=h.kind,
        open_brace_relation=open_rel,
        close_brace_relation=close_rel,
        body_indent_delta=max(0, (body_col if body_col is not None else header_col) - header_col),
        line=first.line,
        header_col=header_col,
        brace_col=brace_col,
        close_col=close_col,
        body_col=body_col,
        statement_on_brace_line=stmt_on_brace,
        first_child_is_code=bool(children) and not isinstance(children[0], (Comment, Label)),
        single_line=opener.line == header_end and closer.line == header_end,
        one_line_length=_one_line_length(h, header_col),
        indents=tuple(indents),
    )


def _one_line_length(h: Header, header_col: int) -> Optional[int]:
    block = h.body
    if h.kind is not HeaderKind.FUNCTION_DEF or len(block.children) > 1 or h.comments:
        return None
    if any(t.is_comment for t in h.tokens):
        return None
    text = spaced(h.tokens) + " { }"
    if block.children:
        stmt = block.children[0]
        if not isinstance(stmt, Statement) or any(t.is_comment or t.kind is TokenKind.PREPROCESSOR
                                                  for t in stmt.tokens):
            return None
        text += " " + spaced(stmt.tokens) + " "
    return header_col + len(text)


def observe(tree: BlockTree, source: str) -> list[Observation]:
    """One observation per braced block owned by a header."""
    src = _Source(source)
    return [_observe_one(h, src) for h in _headers(tree.roots) if isinstance(h.body, Block)]


def _placement(style: StyleSpec, kind: HeaderKind) -> BracePlacement:
    if kind is HeaderKind.FUNCTION_DEF:
        return style.function_brace
    if kind is HeaderKind.CLASS_DEF:
        return style.class_brace
    return style.control_brace


def _expected_ws(style: StyleSpec, col: int) -> str:
    if style.default_use_tabs:
        tab = style.default_tab_width or style.default_indent_width
        return "\t" * (col // tab) + " " * (col % tab)
    return " " * col


def mismatches(obs: Observation, style: StyleSpec) -> list[tuple[str, str]]:
    """``(expected, observed)`` descriptions of every rule *obs* breaks."""
    unit = style.default_indent_width
    out: list[tuple[str, str]] = []
    if obs.construct is HeaderKind.FUNCTION_DEF and style.short_function_one_line:
        if obs.single_line:
            return out
        if obs.one_line_length is not None and obs.one_line_length <= DEFAULT_WIDTH:
            out.append(("short function on one line", "short function spread over several lines"))
            return out
    placement = _placement(style, obs.construct)
    h = obs.header_col
    brace_col = h + style.brace_extra_indent * unit if placement is BracePlacement.NEXT_LINE_INDENTED else h
    own_line = obs.open_brace_relation is not OpenRelation.SAME_LINE

    if placement is BracePlacement.SAME_LINE:
        if own_line:
            out.append(("open brace on the header line", f"open brace on its own line at column {obs.brace_col + 1}"))
    elif not own_line:
        out.append((f"open brace on its own line at column {brace_col + 1}", "open brace on the header line"))
    elif obs.brace_col != brace_col:
        out.append((f"open brace at column {brace_col + 1}", f"open brace at column {obs.brace_col + 1}"))

    if own_line and obs.first_child_is_code and obs.statement_on_brace_line != style.statement_on_open_brace_line:
        if style.statement_on_open_brace_line:
            out.append(("first statement on the open-brace line", "first statement on its own line"))
        else:
            out.append(("open brace alone on its line", "first statement on the open-brace line"))

    if style.body_relative_to is BodyRelativeTo.BRACE:
        body_col = brace_col + style.body_extra_indent * unit
    else:
        body_col = h + unit
    if obs.body_col is not None and not obs.single_line and obs.body_col != body_col:
        out.append((f"body at column {body_col + 1}", f"body at column {obs.body_col + 1}"))

    rule = style.close_brace
    cuddled = obs.close_brace_relation is CloseRelation.CUDDLED
    if rule is CloseBracePlacement.CUDDLE_LAST_STATEMENT:
        if not cuddled:
            out.append(("close brace on the last body line", f"close brace on its own line at column {obs.close_col + 1}"))
    else:
        want = {CloseBracePlacement.HEADER_COLUMN: h,
                CloseBracePlacement.BRACE_COLUMN: brace_col,
                CloseBracePlacement.BODY_COLUMN: h + unit}[rule]
        if cuddled:
            out.append((f"close brace on its own line at column {want + 1}", "close brace on the last body line"))
        elif obs.close_col != want:
            out.append((f"close brace at column {want + 1}", f"close brace at column {obs.close_col + 1}"))

    for col, raw in obs.indents:
        if raw != _expected_ws(style, col):
            kind = "tabs" if style.default_use_tabs else "spaces"
            out.append((f"indentation with {kind}", f"indentation {raw!r}"))
            break
    return out


def _parse(source: str, source_name: str) -> BlockTree:
    return parse_blocks(significant(tokenize(source, source_name)))


def detect_style(source: str, source_name: str = "<stdin>") -> StyleReport:
    """Score every built-in style against *source*."""
    tree = _parse(source, source_name)
    observations = observe(tree, source)
    total = len(observations)
    results = {name: [(o, mismatches(o, style)) for o in observations]
               for name, style in BUILTIN_STYLES.items()}
    scores = {name: (sum(1 for _, m in res if not m) / total if total else 0.0)
              for name, res in results.items()}
    best = AMBIGUOUS
    if total:
        top = max(scores.values())
        leaders = [n for n, s in scores.items() if s == top]
        if len(leaders) == 1:
            best = leaders[0]
    deviations: list[Deviation] = []
    if best != AMBIGUOUS:
        for obs, found in results[best]:
            for expected, observed in found:
                deviations.append(Deviation(obs.line, expected, observed))
    return StyleReport(scores, best, total, deviations, source_name)


def check(source: str, style: StyleSpec, config: Optional[FormatConfig] = None,
          source_name: str = "<stdin>") -> list[Deviation]:
    """Lines where *source* differs from its formatted form.

    Empty exactly when formatting is the identity (line terminators and the
    final newline aside).
    """
    expected = format_source(source, style, config, source_name).splitlines()
    found = source.replace("\r\n", "\n").splitlines()
    out: list[Deviation] = []
    matcher = difflib.SequenceMatcher(None, found, expected, autojunk=False)
    for tag, i1, i2, j1, j2 in matcher.get_opcodes():
        if tag == "equal":
            continue
        for k in range(max(i2 - i1, j2 - j1)):
            exp = expected[j1 + k] if j1 + k < j2 else ""
            got = found[i1 + k] if i1 + k < i2 else ""
            out.append(Deviation(i1 + k + 1, exp, got))
    return out
