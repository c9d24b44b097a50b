"""Lay out a :class:`BlockTree` in a given style.

Rendering works on a list of output lines.  Most nodes emit fresh lines;
brace cuddling, ``} else``, ``} while (...)`` and trailing comments append
to the line before.  A line ending in a line comment or holding a
preprocessor directive is *closed*: nothing may be appended to it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .blocktree import (Block, BlockTree, Comment, Header, HeaderKind, Label, Node, Preprocessor,
                        Statement, parse_blocks)
from .lexer import Token, TokenKind, match_operator, significant, tokenize
from .styles import (BodyRelativeTo, BracePlacement, CloseBracePlacement, FormatConfig,
                     SimpleBodyPolicy, StyleSpec, SwitchScheme, builtin_style)

K = TokenKind

NULL_BODY_COMMENT = "/* null body */"

_TYPE_WORDS = frozenset({"int", "char", "float", "double", "void", "long", "short", "unsigned",
                         "signed", "const", "bool", "size_t", "auto"})
_UNARY_AFTER = frozenset({K.OPEN_PAREN, K.COMMA, K.SEMICOLON, K.COLON, K.OPEN_BRACE, K.KEYWORD})
_MEMBER_OPS = frozenset({".", "->", "::", ".*", "->*"})
_OPENERS = frozenset({"(", "[", "{"})
_CLOSERS = frozenset({")", "]", "}"})


def _wordy(ch: str) -> bool:
    return ch.isalnum() or ch == "_" or ord(ch) > 127


def _glue_hazard(a: Token, b: Token) -> bool:
    """True when writing *a* and *b* with no space would re-lex differently."""
    if _wordy(a.text[-1]) and (_wordy(b.text[0]) or b.text[0] in "\"'"):
        return True
    if a.kind is K.NUMBER and b.text[0] == ".":
        return True
    if a.text[-1] == "/" and b.text[0] in "/*":
        return True
    if a.kind in (K.PUNCT, K.COLON) and b.kind in (K.PUNCT, K.COLON):
        joined = a.text + b.text
        return len(match_operator(joined, 0)) > len(a.text)
    return False


def spaced(tokens: Sequence[Token], space_before_call_paren: bool = False,
           prev: Optional[Token] = None) -> str:
    """Join a flat token run with normalized single spacing.

    *prev* is the token just before the run, used to tell unary from
    binary operators at the start of a continuation line.
    """
    parts: list[str] = []
    prev_unary = False
    prev_postfix = False
    for i, tok in enumerate(tokens):
        unary = False
        postfix = False
        if tok.kind is K.PUNCT:
            if tok.text in ("!", "~"):
                unary = True
            elif tok.text in ("-", "+", "*", "&", "++", "--"):
                if prev is None or prev.kind in _UNARY_AFTER:
                    unary = True
                elif prev.kind is K.PUNCT and prev.text not in (")", "]") and not prev_postfix:
                    unary = True
                elif tok.text in ("*", "&") and prev.kind is K.IDENTIFIER and prev.text in _TYPE_WORDS:
                    unary = True
                postfix = tok.text in ("++", "--") and not unary
        if i > 0:
            if _space_between(prev, tok, prev_unary, postfix, space_before_call_paren):
                parts.append(" ")
            elif _glue_hazard(prev, tok):
                parts.append(" ")
        parts.append(tok.text)
        prev, prev_unary, prev_postfix = tok, unary, postfix
    return "".join(parts)


def _space_between(a: Token, b: Token, a_unary: bool, b_postfix: bool, call_space: bool) -> bool:
    if a.is_comment or b.is_comment:
        return True
    if b.kind in (K.SEMICOLON, K.COMMA, K.CLOSE_PAREN) or b.text == "]":
        return False
    if a.kind is K.OPEN_PAREN or a.text == "[":
        return False
    if a.text in _MEMBER_OPS or b.text in _MEMBER_OPS:
        return False
    if b.kind is K.OPEN_PAREN:
        if a.kind is K.KEYWORD:
            return True
        if a.kind is K.IDENTIFIER or a.text in ("]", ")"):
            return call_space
        return not a_unary
    if b.text == "[":
        return not (a.kind in (K.IDENTIFIER, K.STRING) or a.text in ("]", ")"))
    if a_unary or b_postfix:
        return False
    if b.kind is K.OPEN_BRACE:
        return a.kind is not K.IDENTIFIER
    if a.kind is K.OPEN_BRACE or b.kind is K.CLOSE_BRACE:
        return False
    return True


@dataclass
class _Line:
    col: int
    level: int
    text: str
    closed: bool = False


@dataclass
class _Close:
    index: int
    cuddled: bool
    col: int


class _Renderer:
    def __init__(self, style: StyleSpec, config: FormatConfig):
        self.style = style
        self.cfg = config
        self.unit = config.indent_width
        self.lines: list[_Line] = []

    # -- primitives ------------------------------------------------------------
    def emit(self, col: int, level: int, text: str, closed: bool = False) -> None:
        self.lines.append(_Line(col, level, text, closed))

    def append(self, text: str, closed: bool = False, sep: str = " ") -> bool:
        if not self.lines or self.lines[-1].closed or not self.lines[-1].text:
            return False
        last = self.lines[-1]
        last.text += sep + text
        last.closed = closed
        return True

    def blank(self) -> None:
        if self.lines and self.lines[-1].text:
            self.emit(0, 0, "")

    def join(self, tokens: Sequence[Token], prev: Optional[Token] = None) -> str:
        return spaced(tokens, self.style.space_before_call_paren, prev)

    # -- token runs --------------------------------------------------------------
    def wrap_at_commas(self, tokens: Sequence[Token], col: int, cont_col: int,
                       prev: Optional[Token]) -> list[tuple[int, str]]:
        width = self.cfg.max_line_width
        out: list[tuple[int, str]] = []
        rest = list(tokens)
        cur = col
        while True:
            text = self.join(rest, prev)
            if cur + len(text) <= width:
                out.append((cur, text))
                return out
            depth = 0
            best = first = None
            for j, tok in enumerate(rest[:-1]):
                if tok.text in _OPENERS:
                    depth += 1
                elif tok.text in _CLOSERS:
                    depth -= 1
                elif tok.kind is K.COMMA and depth <= 1:
                    if first is None:
                        first = j
                    if cur + len(self.join(rest[:j + 1], prev)) <= width:
                        best = j
                    else:
                        break
            cut = best if best is not None else first
            if cut is None:
                out.append((cur, text))
                return out
            out.append((cur, self.join(rest[:cut + 1], prev)))
            prev = rest[cut]
            rest = rest[cut + 1:]
            cur = cont_col

    def parameter_pieces(self, tokens: Sequence[Token], col: int) -> Optional[list[tuple[int, str]]]:
        """One parameter per line, aligned after the open paren, when too wide."""
        if any(t.is_comment or t.kind is K.PREPROCESSOR for t in tokens):
            return None
        if col + len(self.join(tokens)) <= self.cfg.max_line_width:
            return None
        depth = 0
        paren = None
        commas: list[int] = []
        for j, tok in enumerate(tokens):
            if tok.text in _OPENERS:
                depth += 1
                if tok.kind is K.OPEN_PAREN and depth == 1 and paren is None:
                    paren = j
            elif tok.text in _CLOSERS:
                depth -= 1
                if paren is not None and depth == 0:
                    break
            elif tok.kind is K.COMMA and depth == 1 and paren is not None:
                commas.append(j)
        if paren is None or not commas:
            return None
        align = col + len(self.join(tokens[:paren + 1]))
        bounds = [0] + [c + 1 for c in commas] + [len(tokens)]
        out = []
        for n, (lo, hi) in enumerate(zip(bounds, bounds[1:])):
            prev = tokens[lo - 1] if lo else None
            out.append((col if n == 0 else align, self.join(tokens[lo:hi], prev)))
        return out

    def pieces(self, tokens: Sequence[Token], col: int,
               declaration: bool = False) -> list[tuple[int, str, bool]]:
        """Split a token run into ``(col, text, closed)`` output lines."""
        if declaration:
            params = self.parameter_pieces(tokens, col)
            if params is not None:
                return [(c, t, False) for c, t in params]
        cont = col + self.unit
        out: list[tuple[int, str, bool]] = []
        segment: list[Token] = []
        prev: Optional[Token] = None

        def flush(closed: bool) -> None:
            nonlocal prev
            if not segment:
                return
            start = col if not out else cont
            wrapped = self.wrap_at_commas(segment, start, cont, prev)
            for n, (c, t) in enumerate(wrapped):
                out.append((c, t, closed and n == len(wrapped) - 1))
            prev = segment[-1]
            segment.clear()

        for tok in tokens:
            if tok.kind is K.PREPROCESSOR:
                flush(False)
                out.append((0, tok.text, True))
                prev = tok
            elif tok.kind is K.LINE_COMMENT:
                segment.append(tok)
                flush(True)
            else:
                segment.append(tok)
        flush(False)
        return out

    def emit_pieces(self, pieces: list[tuple[int, str, bool]], level: int) -> None:
        for c, t, closed in pieces:
            self.emit(c, level, t, closed)

    # -- nodes ---------------------------------------------------------------------
    def render_nodes(self, nodes: list[Node], col: int, level: int,
                     owner: Optional[HeaderKind] = None, header_col: int = 0) -> None:
        unit = self.unit
        indented = self.cfg.switch_scheme is SwitchScheme.CASES_INDENTED
        label_col = col if indented else header_col
        case_col = col + unit if indented else col
        after_label = False
        declarations = (owner is None and level == 0) or owner is HeaderKind.CLASS_DEF

        def placement(node: Node, after: bool) -> tuple[int, int]:
            if owner is HeaderKind.SWITCH:
                if isinstance(node, Label):
                    return label_col, level
                if after:
                    return case_col, level + 1
            elif owner is HeaderKind.CLASS_DEF and isinstance(node, Label):
                return header_col, level - 1
            return col, level

        for i, node in enumerate(nodes):
            if node.blank_before and i > 0:
                self.blank()
            if isinstance(node, Label) and owner is HeaderKind.SWITCH:
                after_label = True
            target = node
            if isinstance(node, Comment):
                target = next((n for n in nodes[i + 1:] if not isinstance(n, Comment)), None)
            if target is None or isinstance(target, Comment):
                ncol, nlevel = placement(Statement([]), after_label)
            else:
                ncol, nlevel = placement(target, after_label)
            self.render_node(node, ncol, nlevel, declarations)

    def render_node(self, node: Node, col: int, level: int, declarations: bool = False) -> None:
        if isinstance(node, Comment):
            closed = node.token.kind is K.LINE_COMMENT
            if not (node.trailing and self.append(node.token.text, closed)):
                self.emit(col, level, node.token.text, closed)
        elif isinstance(node, Preprocessor):
            self.emit(0, level, node.token.text, closed=True)
        elif isinstance(node, Statement):
            decl = declarations and _looks_like_declaration(node.tokens)
            self.emit_pieces(self.pieces(node.tokens, col, decl), level)
        elif isinstance(node, Label):
            text = self.join(node.tokens[:-1]) + node.tokens[-1].text
            self.emit(col, level, text, node.tokens[-1].is_comment)
        elif isinstance(node, Block):
            self.render_block(node, col, level, BracePlacement.NEXT_LINE_HEADER_COLUMN, None, bare=True)
        else:
            self.render_header(node, col, level)

    def placement_for(self, kind: HeaderKind) -> BracePlacement:
        if kind is HeaderKind.FUNCTION_DEF:
            return self.style.function_brace
        if kind is HeaderKind.CLASS_DEF:
            return self.style.class_brace
        return self.style.control_brace

    def try_one_line_function(self, h: Header, col: int, level: int) -> bool:
        body = h.body
        if not (self.style.short_function_one_line and h.kind is HeaderKind.FUNCTION_DEF
                and isinstance(body, Block) and not h.comments and len(body.children) <= 1):
            return False
        if any(t.is_comment for t in h.tokens):
            return False
        head = self.join(h.tokens)
        if body.children:
            stmt = body.children[0]
            if not isinstance(stmt, Statement) or stmt.null_body:
                return False
            if any(t.is_comment or t.kind is K.PREPROCESSOR for t in stmt.tokens):
                return False
            text = f"{head} {{ {self.join(stmt.tokens)} }}"
        else:
            text = f"{head} {{ }}"
        if col + len(text) > self.cfg.max_line_width:
            return False
        self.emit(col, level, text)
        return True

    def render_header(self, h: Header, col: int, level: int) -> None:
        unit = self.unit
        if self.try_one_line_function(h, col, level):
            return
        declaration = h.kind is HeaderKind.FUNCTION_DEF
        self.emit_pieces(self.pieces(h.tokens, col, declaration), level)
        body = h.body
        braced = isinstance(body, Block)
        force_own = False
        for c in h.comments:
            closed = c.token.kind is K.LINE_COMMENT
            if c.trailing and self.append(c.token.text, closed):
                continue
            self.emit(col if braced else col + unit, level if braced else level + 1,
                      c.token.text, closed)
            force_own = True

        close: Optional[_Close] = None
        same_line_body = False
        if braced:
            close = self.render_block(body, col, level, self.placement_for(h.kind), h.kind, force_own)
        elif isinstance(body, Statement) and body.null_body:
            self.render_null_body(body, col, level)
        else:
            same_line_body = self.try_same_line_body(h, body)
            if not same_line_body:
                self.render_node(body, col + unit, level + 1)

        if h.kind is HeaderKind.DO_WHILE and h.trailer:
            text = self.join(h.trailer)
            closed = h.trailer[-1].kind is K.LINE_COMMENT
            joinable = (braced and self.cfg.do_while_cuddle) or same_line_body
            if not (joinable and not any(t.kind is K.LINE_COMMENT for t in h.trailer[:-1])
                    and self.append(text, closed)):
                self.emit_pieces(self.pieces(h.trailer, col), level)
        elif h.kind is HeaderKind.CLASS_DEF and h.trailer:
            text = self.join(h.trailer)
            sep = "" if h.trailer[0].kind is K.SEMICOLON else " "
            if not self.append(text, sep=sep):
                self.emit(col, level, text)

        if h.orelse is not None:
            self.render_else(h, h.orelse, col, level, close)

    def render_else(self, h: Header, e: Header, col: int, level: int, close: Optional[_Close]) -> None:
        style = self.style
        cuddle = (close is not None and not close.cuddled and close.col == col
                  and close.index == len(self.lines) - 1 and not self.lines[-1].closed
                  and style.control_brace is BracePlacement.SAME_LINE
                  and style.close_brace is CloseBracePlacement.HEADER_COLUMN and not e.lead)
        for c in e.lead:
            closed = c.token.kind is K.LINE_COMMENT
            if not (c.trailing and self.append(c.token.text, closed)):
                self.emit(col, level, c.token.text, closed)
        mark = len(self.lines)
        self.render_header(e, col, level)
        if cuddle:
            first = self.lines.pop(mark)
            host = self.lines[mark - 1]
            host.text += " " + first.text
            host.closed = first.closed

    def render_null_body(self, body: Statement, col: int, level: int) -> None:
        inner = col + self.unit
        if len(body.tokens) > 1:
            comments = body.tokens[:-1]
            if comments[-1].kind is K.LINE_COMMENT:
                self.emit_pieces(self.pieces(comments, inner), level + 1)
                self.emit(inner, level + 1, ";")
            else:
                self.emit(inner, level + 1, self.join(comments) + " ;")
        elif self.cfg.null_body_comment:
            self.emit(inner, level + 1, f"{NULL_BODY_COMMENT} ;")
        elif not self.append(";", sep=""):
            self.emit(inner, level + 1, ";")

    def try_same_line_body(self, h: Header, body: Node) -> bool:
        if self.cfg.simple_body_policy is not SimpleBodyPolicy.SAME_LINE:
            return False
        if not isinstance(body, Statement) or h.comments or not body.tokens:
            return False
        if any(t.is_comment or t.kind is K.PREPROCESSOR for t in body.tokens):
            return False
        if not self.lines or self.lines[-1].closed:
            return False
        text = self.join(body.tokens)
        last = self.lines[-1]
        if last.col + len(last.text) + 1 + len(text) > self.cfg.max_line_width:
            return False
        return self.append(text)

    def render_block(self, block: Block, col: int, level: int, placement: BracePlacement,
                     owner: Optional[HeaderKind], force_own: bool = False, bare: bool = False) -> _Close:
        style = self.style
        unit = self.unit
        own = True
        if placement is BracePlacement.SAME_LINE and not force_own and self.append("{"):
            own = False
            brace_col = col
        else:
            if placement is BracePlacement.NEXT_LINE_INDENTED:
                brace_col = col + style.brace_extra_indent * unit
            else:
                brace_col = col
            self.emit(brace_col, level, "{")
        brace_index = len(self.lines) - 1

        if bare or style.body_relative_to is BodyRelativeTo.HEADER:
            body_col = col + unit
        else:
            body_col = brace_col + style.body_extra_indent * unit

        children = block.children
        self.render_nodes(children, body_col, level + 1, owner, header_col=col)

        if (style.statement_on_open_brace_line and own and children
                and not isinstance(children[0], (Label, Preprocessor))
                and not (isinstance(children[0], Comment) and children[0].trailing)
                and len(self.lines) > brace_index + 1):
            first = self.lines[brace_index + 1]
            if first.text and first.col == body_col:
                pad = max(1, body_col - brace_col - 1)
                host = self.lines[brace_index]
                host.text = "{" + " " * pad + first.text
                host.closed = first.closed
                del self.lines[brace_index + 1]

        rule = style.close_brace
        if rule is CloseBracePlacement.CUDDLE_LAST_STATEMENT:
            if self.append("}"):
                return _Close(len(self.lines) - 1, True, self.lines[-1].col)
            close_col = col
        elif bare or rule is CloseBracePlacement.HEADER_COLUMN:
            close_col = col
        elif rule is CloseBracePlacement.BRACE_COLUMN:
            close_col = brace_col
        else:
            close_col = body_col
        self.emit(close_col, level, "}")
        return _Close(len(self.lines) - 1, False, close_col)

    # -- output ------------------------------------------------------------------------
    def indentation(self, col: int) -> str:
        if self.cfg.use_tabs:
            tab = self.cfg.tab_width or self.unit
            return "\t" * (col // tab) + " " * (col % tab)
        return " " * col

    def text(self) -> str:
        out = []
        for line in self.lines:
            if not line.text:
                out.append("")
                continue
            body = self.indentation(line.col) + line.text
            if self.cfg.annotate_levels:
                body = f"[{line.level}] {body}"
            out.append(body)
        return "\n".join(out) + "\n" if out else ""


def _looks_like_declaration(tokens: Sequence[Token]) -> bool:
    for tok in tokens:
        if tok.kind is K.OPEN_PAREN:
            return True
        if tok.text == "=" or tok.kind is K.KEYWORD:
            return False
    return False


def render(tree: BlockTree, style: StyleSpec, config: Optional[FormatConfig] = None) -> str:
    """Format *tree* in *style*; unset config fields come from the style."""
    cfg = (config or FormatConfig()).resolve(style)
    r = _Renderer(style, cfg)
    r.render_nodes(tree.roots, 0, 0)
    return r.text()


def format_source(source: str, style: StyleSpec, config: Optional[FormatConfig] = None,
                  source_name: str = "<stdin>") -> str:
    """tokenize -> parse_blocks -> render."""
    tree = parse_blocks(significant(tokenize(source, source_name)))
    return render(tree, style, config)


def wrap_parameter_list(header: Header | Statement, config: Optional[FormatConfig] = None,
                        style: Optional[StyleSpec] = None, column: int = 0) -> list[str]:
    """Lay out a function header or prototype starting at *column*.

    One line when it fits ``max_line_width``; otherwise one parameter per
    line, continuation lines aligned just after the open paren.
    """
    style = style or builtin_style("kr")
    r = _Renderer(style, (config or FormatConfig()).resolve(style))
    pieces = r.parameter_pieces(header.tokens, column)
    if pieces is None:
        pieces = [(column, r.join(header.tokens))]
    return [" " * c + t for c, t in pieces]
