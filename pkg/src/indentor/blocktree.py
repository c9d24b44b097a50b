"""Structural tree over a significant token stream.

The tree only recovers what a re-indenter needs: headers that own a body,
brace blocks, flat statement runs, labels, comments and preprocessor
lines.  ``flatten(parse_blocks(ts))`` always gives back ``ts``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional, Union

from .errors import MalformedDoWhile, SourceError, UnbalancedBraces, UnexpectedCloseBrace
from .lexer import Token, TokenKind, TokenStream

K = TokenKind


class HeaderKind(Enum):
    FUNCTION_DEF = "FunctionDef"
    CLASS_DEF = "ClassDef"
    IF = "If"
    ELSE_IF = "ElseIf"
    ELSE = "Else"
    WHILE = "While"
    FOR = "For"
    DO_WHILE = "DoWhile"
    SWITCH = "Switch"
    CASE_LABEL = "CaseLabel"
    DEFAULT_LABEL = "DefaultLabel"
    ACCESS_LABEL = "AccessLabel"


CONTROL_KINDS = frozenset({HeaderKind.IF, HeaderKind.ELSE_IF, HeaderKind.ELSE, HeaderKind.WHILE,
                           HeaderKind.FOR, HeaderKind.DO_WHILE, HeaderKind.SWITCH})
LABEL_KINDS = frozenset({HeaderKind.CASE_LABEL, HeaderKind.DEFAULT_LABEL, HeaderKind.ACCESS_LABEL})

_CONTROL_KEYWORDS = {"if": HeaderKind.IF, "while": HeaderKind.WHILE,
                     "for": HeaderKind.FOR, "switch": HeaderKind.SWITCH}
# A keyword at the start of a fresh line ends a statement that is missing its ';'.
_STATEMENT_STARTERS = frozenset({"if", "else", "while", "for", "do", "switch", "case",
                                 "default", "return", "break", "continue"})
_ACCESS = frozenset({"public", "private", "protected"})
_CLASS_WORDS = frozenset({"class", "struct", "union", "enum", "namespace"})
_OPENERS = {"(": ")", "[": "]", "{": "}"}


class ParseError(SourceError):
    pass


@dataclass
class Statement:
    tokens: list[Token]
    null_body: bool = False
    blank_before: bool = False


@dataclass
class Comment:
    token: Token
    trailing: bool = False
    blank_before: bool = False


@dataclass
class Preprocessor:
    token: Token
    blank_before: bool = False


@dataclass
class Label:
    kind: HeaderKind
    tokens: list[Token]
    blank_before: bool = False


@dataclass
class Block:
    open: Token
    children: list["Node"]
    close: Token
    blank_before: bool = False


@dataclass
class Header:
    """A construct that owns a body.

    ``comments`` sit between the header tokens and the body; ``lead`` holds
    comments found between a preceding if-body and this ``else``.  An if's
    else branch hangs off ``orelse`` so braceless nesting keeps one node
    per body.
    """

    kind: HeaderKind
    tokens: list[Token]
    body: "Node"
    comments: list[Comment] = field(default_factory=list)
    trailer: list[Token] = field(default_factory=list)
    orelse: Optional["Header"] = None
    lead: list[Comment] = field(default_factory=list)
    blank_before: bool = False


Node = Union[Header, Block, Statement, Label, Comment, Preprocessor]


@dataclass
class BlockTree:
    roots: list[Node]
    source_name: str = "<stdin>"


class _Parser:
    def __init__(self, ts: TokenStream):
        self.toks = [t for t in ts.tokens if t.kind is not K.NEWLINE]
        self.name = ts.source_name
        self.i = 0

    # -- helpers -----------------------------------------------------------
    def peek(self, offset: int = 0) -> Optional[Token]:
        j = self.i + offset
        return self.toks[j] if j < len(self.toks) else None

    def prev(self) -> Optional[Token]:
        return self.toks[self.i - 1] if self.i > 0 else None

    def take(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def blank_before(self) -> bool:
        prev, cur = self.prev(), self.peek()
        return prev is not None and cur is not None and cur.line - prev.end_line >= 2

    def error(self, cls, message: str, tok: Optional[Token]):
        line, col = (tok.line, tok.column) if tok is not None else (0, 0)
        return cls(message, line, col, self.name)

    def new_line_starts(self) -> bool:
        prev, cur = self.prev(), self.peek()
        return prev is not None and cur is not None and cur.line > prev.end_line

    def comment_node(self) -> Comment:
        prev = self.prev()
        blank = self.blank_before()
        tok = self.take()
        trailing = prev is not None and tok.line == prev.end_line
        return Comment(tok, trailing=trailing, blank_before=blank)

    def take_comments(self) -> list[Comment]:
        out = []
        while (tok := self.peek()) is not None and tok.is_comment:
            out.append(self.comment_node())
        return out

    def take_balanced(self, out: list[Token]) -> None:
        """Consume a bracketed group starting at the current opener."""
        stack = []
        while (tok := self.peek()) is not None:
            if tok.text in _OPENERS:
                stack.append(_OPENERS[tok.text])
            elif stack and tok.text == stack[-1]:
                stack.pop()
            out.append(self.take())
            if not stack:
                return

    # -- lists ---------------------------------------------------------------
    def parse_list(self, open_brace: Optional[Token]) -> list[Node]:
        nodes: list[Node] = []
        while True:
            tok = self.peek()
            if tok is None:
                if open_brace is not None:
                    raise self.error(UnbalancedBraces, "unclosed '{'", open_brace)
                return nodes
            if tok.kind is K.CLOSE_BRACE:
                if open_brace is None:
                    raise self.error(UnexpectedCloseBrace, "unexpected '}'", tok)
                return nodes
            nodes.append(self.parse_node())

    def parse_node(self) -> Node:
        tok = self.peek()
        if tok is None:
            raise self.error(ParseError, "expected a statement", self.prev())
        if tok.is_comment:
            return self.comment_node()
        blank = self.blank_before()
        node = self._parse_node(tok)
        node.blank_before = blank
        return node

    def _parse_node(self, tok: Token) -> Node:
        if tok.kind is K.PREPROCESSOR:
            return Preprocessor(self.take())
        if tok.kind is K.OPEN_BRACE:
            return self.parse_block()
        if tok.kind is K.SEMICOLON:
            return Statement([self.take()])
        if tok.kind is K.KEYWORD:
            word = tok.text
            if word in _CONTROL_KEYWORDS:
                return self.parse_control(_CONTROL_KEYWORDS[word])
            if word == "do":
                node = self.parse_do()
                if node is not None:
                    return node
                return self.parse_run()
            if word == "else":
                return self.parse_else()
            if word in ("case", "default"):
                label = self.parse_label(HeaderKind.CASE_LABEL if word == "case" else HeaderKind.DEFAULT_LABEL)
                if label is not None:
                    return label
        if tok.kind is K.IDENTIFIER and tok.text in _ACCESS:
            nxt = self.peek(1)
            if nxt is not None and nxt.kind is K.COLON:
                return Label(HeaderKind.ACCESS_LABEL, [self.take(), self.take()])
        return self.parse_run()

    def parse_block(self) -> Block:
        open_tok = self.take()
        children = self.parse_list(open_tok)
        return Block(open_tok, children, self.take())

    # -- constructs ----------------------------------------------------------
    def header_tokens(self) -> list[Token]:
        out = [self.take()]
        while (tok := self.peek()) is not None and tok.is_comment and tok.line == out[-1].end_line:
            out.append(self.take())
        if (tok := self.peek()) is not None and tok.kind is K.OPEN_PAREN:
            self.take_balanced(out)
        return out

    def parse_body(self, header: Header, allow_null: bool) -> None:
        start = self.i
        comments = self.take_comments()
        tok = self.peek()
        if allow_null and tok is not None and tok.kind is K.SEMICOLON:
            self.i = start
            toks = [c.token for c in self.take_comments()] + [self.take()]
            header.body = Statement(toks, null_body=True)
            return
        header.comments = comments
        header.body = self.parse_node()

    def parse_control(self, kind: HeaderKind) -> Header:
        header = Header(kind, self.header_tokens(), body=None)  # type: ignore[arg-type]
        self.parse_body(header, allow_null=kind in (HeaderKind.FOR, HeaderKind.WHILE))
        if kind is HeaderKind.IF:
            self.attach_else(header)
        return header

    def attach_else(self, header: Header) -> None:
        start = self.i
        lead = self.take_comments()
        tok = self.peek()
        if tok is None or tok.text != "else" or tok.kind is not K.KEYWORD:
            self.i = start
            return
        else_node = self.parse_else()
        else_node.lead = lead
        header.orelse = else_node

    def parse_else(self) -> Header:
        else_tok = self.take()
        nxt = self.peek()
        if nxt is not None and nxt.kind is K.KEYWORD and nxt.text == "if":
            header = Header(HeaderKind.ELSE_IF, [else_tok] + self.header_tokens(), body=None)  # type: ignore[arg-type]
            self.parse_body(header, allow_null=False)
            self.attach_else(header)
            return header
        header = Header(HeaderKind.ELSE, [else_tok], body=None)  # type: ignore[arg-type]
        self.parse_body(header, allow_null=False)
        return header

    def parse_do(self) -> Optional[Header]:
        """Parse ``do body while (...);``.

        Returns None (with the cursor restored) when ``do`` opens a braceless
        body that is never followed by ``while``; the caller then treats the
        run as a plain statement.
        """
        start = self.i
        do_tok = self.peek()
        header = Header(HeaderKind.DO_WHILE, [self.take()], body=None)  # type: ignore[arg-type]
        if self.peek() is None:
            self.i = start
            return None
        self.parse_body(header, allow_null=False)
        trailer: list[Token] = []
        while (tok := self.peek()) is not None and tok.is_comment:
            trailer.append(self.take())
        tok = self.peek()
        if tok is None or tok.kind is not K.KEYWORD or tok.text != "while":
            if isinstance(header.body, Block):
                raise self.error(MalformedDoWhile, "'do' block is not followed by 'while'", do_tok)
            self.i = start
            return None
        trailer.append(self.take())
        if (tok := self.peek()) is not None and tok.kind is K.OPEN_PAREN:
            self.take_balanced(trailer)
        if (tok := self.peek()) is not None and tok.kind is K.SEMICOLON:
            trailer.append(self.take())
        header.trailer = trailer
        return header

    def parse_label(self, kind: HeaderKind) -> Optional[Label]:
        start = self.i
        out: list[Token] = []
        depth = 0
        while (tok := self.peek()) is not None:
            if tok.kind in (K.SEMICOLON, K.OPEN_BRACE, K.CLOSE_BRACE) and depth == 0:
                break
            out.append(self.take())
            if tok.text in ("(", "["):
                depth += 1
            elif tok.text in (")", "]"):
                depth -= 1
            elif tok.kind is K.COLON and depth == 0:
                return Label(kind, out)
        self.i = start
        return None

    # -- runs ----------------------------------------------------------------
    def inline_brace(self, run: list[Token]) -> bool:
        code = [t for t in run if not t.is_comment]
        if not code:
            return False
        last = code[-1]
        if last.kind in (K.COMMA, K.OPEN_PAREN) or last.text in ("=", "[", "return"):
            return True
        if last.kind is K.IDENTIFIER or last.text == ">":
            if self.class_like(run):
                return False
            # constructor initializer list: name(args) : member{init}
            seen_close = False
            for tok in run:
                if tok.kind is K.CLOSE_PAREN:
                    seen_close = True
                elif tok.kind is K.COLON and seen_close:
                    return True
        return False

    @staticmethod
    def class_like(run: list[Token]) -> bool:
        for tok in run:
            if tok.kind is K.OPEN_PAREN:
                return False
            if tok.text in _CLASS_WORDS and tok.kind in (K.KEYWORD, K.IDENTIFIER):
                return True
        return False

    def parse_run(self) -> Node:
        run: list[Token] = []
        depth = 0
        while (tok := self.peek()) is not None:
            if depth > 0:
                if tok.text in _OPENERS:
                    depth += 1
                elif tok.text in (")", "]", "}"):
                    depth -= 1
                run.append(self.take())
                continue
            if run and tok.kind is K.PREPROCESSOR:
                break
            if run and self.new_line_starts() and tok.kind is K.KEYWORD and tok.text in _STATEMENT_STARTERS:
                break
            if tok.kind is K.SEMICOLON:
                run.append(self.take())
                return Statement(run)
            if tok.kind is K.CLOSE_BRACE:
                break
            if tok.kind is K.OPEN_BRACE:
                if run and self.inline_brace(run):
                    depth += 1
                    run.append(self.take())
                    continue
                return self.parse_definition(run)
            if tok.text in ("(", "["):
                depth += 1
            run.append(self.take())
        return Statement(run)

    def parse_definition(self, run: list[Token]) -> Header:
        kind = HeaderKind.CLASS_DEF if self.class_like(run) else HeaderKind.FUNCTION_DEF
        # comments between the signature and its brace belong to the header
        comments: list[Comment] = []
        while run and run[-1].is_comment:
            run.pop()
        # (they were consumed as part of the run; rebuild them as nodes)
        j = self.i - 1
        while j >= 0 and self.toks[j].is_comment:
            j -= 1
        trailing_comments = self.toks[j + 1:self.i]
        prev = self.toks[j]
        for tok in trailing_comments:
            comments.append(Comment(tok, trailing=tok.line == prev.end_line))
            prev = tok
        header = Header(kind, run, body=self.parse_block(), comments=comments)
        if kind is HeaderKind.CLASS_DEF:
            header.trailer = self.class_trailer(header.body.close)
        return header

    def class_trailer(self, close: Token) -> list[Token]:
        start = self.i
        out: list[Token] = []
        while (tok := self.peek()) is not None and tok.line == close.end_line:
            if tok.kind is K.SEMICOLON:
                out.append(self.take())
                return out
            if tok.kind not in (K.IDENTIFIER, K.COMMA) and tok.text not in ("*", "&", "[", "]") \
                    and tok.kind is not K.NUMBER:
                break
            out.append(self.take())
        self.i = start
        return []


def parse_blocks(ts: TokenStream) -> BlockTree:
    """Recover the block structure of a token stream (Newlines are ignored)."""
    parser = _Parser(ts)
    return BlockTree(parser.parse_list(None), ts.source_name)


def iter_tokens(node: Node) -> Iterator[Token]:
    if isinstance(node, Header):
        for c in node.lead:
            yield c.token
        yield from node.tokens
        for c in node.comments:
            yield c.token
        yield from iter_tokens(node.body)
        yield from node.trailer
        if node.orelse is not None:
            yield from iter_tokens(node.orelse)
    elif isinstance(node, Block):
        yield node.open
        for child in node.children:
            yield from iter_tokens(child)
        yield node.close
    elif isinstance(node, (Statement, Label)):
        yield from node.tokens
    else:
        yield node.token


def flatten(tree: BlockTree) -> TokenStream:
    """Emit the tree's tokens in source order."""
    out: list[Token] = []
    for node in tree.roots:
        out.extend(iter_tokens(node))
    return TokenStream(tuple(out), tree.source_name)


def depth_map(tree: BlockTree) -> list[tuple[Node, int]]:
    """Pre-order ``(node, level)`` pairs.

    A header's body sits one level deeper than the header whether or not it
    is braced; the braces themselves share the header's level.  Inside a
    switch, labels are one level in and the statements under them two;
    class access labels stay at the class level.
    """
    out: list[tuple[Node, int]] = []

    def children(nodes: list[Node], level: int, owner: Optional[HeaderKind]) -> None:
        after_label = False
        for child in nodes:
            if owner is HeaderKind.SWITCH:
                if isinstance(child, Label):
                    after_label = True
                    visit(child, level)
                else:
                    visit(child, level + 1 if after_label else level)
            elif owner is HeaderKind.CLASS_DEF and isinstance(child, Label):
                visit(child, level - 1)
            else:
                visit(child, level)

    def visit(node: Node, level: int, owner: Optional[HeaderKind] = None) -> None:
        out.append((node, level))
        if isinstance(node, Header):
            for c in node.lead + node.comments:
                out.append((c, level))
            body = node.body
            if isinstance(body, Block):
                out.append((body, level))
                children(body.children, level + 1, node.kind)
            else:
                visit(body, level + 1)
            if node.orelse is not None:
                visit(node.orelse, level)
        elif isinstance(node, Block):
            children(node.children, level + 1, owner)

    children(tree.roots, 0, None)
    return out
