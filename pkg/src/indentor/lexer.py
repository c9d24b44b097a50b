"""Lossless tokenizer for C-like source.

Comments, string/char literals and preprocessor lines come out as single
opaque tokens, so braces inside them never reach the block parser.
Whitespace is not tokenized; each token remembers the whitespace that
preceded it, which is enough to rebuild the input byte for byte.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import UnterminatedComment, UnterminatedString


class TokenKind(Enum):
    IDENTIFIER = "Identifier"
    KEYWORD = "Keyword"
    NUMBER = "Number"
    STRING = "StringLiteral"
    CHAR = "CharLiteral"
    PUNCT = "Punct"
    OPEN_BRACE = "OpenBrace"
    CLOSE_BRACE = "CloseBrace"
    OPEN_PAREN = "OpenParen"
    CLOSE_PAREN = "CloseParen"
    SEMICOLON = "Semicolon"
    COLON = "Colon"
    COMMA = "Comma"
    LINE_COMMENT = "LineComment"
    BLOCK_COMMENT = "BlockComment"
    PREPROCESSOR = "PreprocessorLine"
    NEWLINE = "Newline"


KEYWORDS = frozenset(
    {"if", "else", "while", "for", "do", "switch", "case", "default",
     "class", "struct", "return", "break", "continue"}
)

# Longest first; anything else is a one-character Punct.
OPERATORS = (
    ">>=", "<<=", "...", "->*",
    "==", "<=", ">=", "!=", "++", "--", "+=", "-=", "*=", "/=", "%=",
    "&=", "|=", "^=", "->", "::", "&&", "||", "<<", ">>", ".*",
)

_SINGLE = {
    "{": TokenKind.OPEN_BRACE,
    "}": TokenKind.CLOSE_BRACE,
    "(": TokenKind.OPEN_PAREN,
    ")": TokenKind.CLOSE_PAREN,
    ";": TokenKind.SEMICOLON,
    ":": TokenKind.COLON,
    ",": TokenKind.COMMA,
}

_STRING_PREFIXES = frozenset({"L", "u", "U", "u8"})
_IDENT_RE = re.compile(r"[A-Za-z_\x80-\U0010ffff][A-Za-z0-9_\x80-\U0010ffff]*")
_NUMBER_RE = re.compile(r"\.?[0-9](?:[eEpP][+-]|[0-9A-Za-z_.'])*")
_HSPACE = " \t\f\v"

COMMENT_KINDS = frozenset({TokenKind.LINE_COMMENT, TokenKind.BLOCK_COMMENT})


@dataclass(frozen=True, slots=True)
class Token:
    """One lexical unit.

    Equality compares ``kind`` and ``text`` only, so token runs taken from
    differently laid-out sources compare equal when their content does.
    """

    kind: TokenKind
    text: str
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)
    leading: str = field(default="", compare=False, repr=False)

    @property
    def end_line(self) -> int:
        if self.kind is TokenKind.NEWLINE:
            return self.line
        return self.line + self.text.count("\n")

    @property
    def is_comment(self) -> bool:
        return self.kind in COMMENT_KINDS


@dataclass(frozen=True, slots=True)
class TokenStream:
    tokens: tuple[Token, ...]
    source_name: str = "<stdin>"
    trailing: str = field(default="", compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, index):
        return self.tokens[index]


def match_operator(text: str, pos: int) -> str:
    for op in OPERATORS:
        if text.startswith(op, pos):
            return op
    return text[pos]


class _Scanner:
    def __init__(self, source: str, source_name: str):
        self.src = source
        self.name = source_name
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens: list[Token] = []
        self.at_line_start = True

    def advance_over(self, text: str) -> None:
        newlines = text.count("\n")
        if newlines:
            self.line += newlines
            self.col = len(text) - text.rfind("\n")
        else:
            self.col += len(text)
        self.pos += len(text)

    def emit(self, kind: TokenKind, text: str, leading: str) -> None:
        self.tokens.append(Token(kind, text, self.line, self.col, leading))
        self.advance_over(text)

    def scan_quoted(self, start: int, quote: str) -> int:
        """Return the index just past the closing quote."""
        src = self.src
        i = start + 1
        while i < len(src):
            ch = src[i]
            if ch == "\\":
                i += 2
                continue
            if ch == quote:
                return i + 1
            if ch == "\n":
                break
            i += 1
        kind = UnterminatedString
        what = "string" if quote == '"' else "character"
        raise kind(f"unterminated {what} literal", self.line, self.col, self.name)

    def scan_preprocessor(self, start: int) -> int:
        src = self.src
        i = start
        while True:
            nl = src.find("\n", i)
            if nl == -1:
                return len(src)
            end = nl - 1 if nl > 0 and src[nl - 1] == "\r" else nl
            if end > start and src[end - 1] == "\\":
                i = nl + 1
                continue
            return end

    def run(self) -> TokenStream:
        src = self.src
        n = len(src)
        leading_start = 0
        while True:
            # whitespace
            while self.pos < n and (src[self.pos] in _HSPACE or
                                    (src[self.pos] == "\r" and not src.startswith("\r\n", self.pos))):
                self.advance_over(src[self.pos])
            leading = src[leading_start:self.pos]
            if self.pos >= n:
                break
            ch = src[self.pos]
            start = self.pos

            if ch == "\n" or src.startswith("\r\n", start):
                text = "\n" if ch == "\n" else "\r\n"
                self.tokens.append(Token(TokenKind.NEWLINE, text, self.line, self.col, leading))
                self.pos += len(text)
                self.line += 1
                self.col = 1
                self.at_line_start = True
                leading_start = self.pos
                continue

            if ch == "#" and self.at_line_start:
                end = self.scan_preprocessor(start)
                self.emit(TokenKind.PREPROCESSOR, src[start:end], leading)
            elif src.startswith("//", start):
                end = start
                while end < n and src[end] != "\n":
                    end += 1
                if end > start and src[end - 1] == "\r" and end < n:
                    end -= 1
                self.emit(TokenKind.LINE_COMMENT, src[start:end], leading)
            elif src.startswith("/*", start):
                end = src.find("*/", start + 2)
                if end == -1:
                    raise UnterminatedComment("unterminated block comment", self.line, self.col, self.name)
                self.emit(TokenKind.BLOCK_COMMENT, src[start:end + 2], leading)
            elif ch == '"' or ch == "'":
                end = self.scan_quoted(start, ch)
                kind = TokenKind.STRING if ch == '"' else TokenKind.CHAR
                self.emit(kind, src[start:end], leading)
            elif m := _NUMBER_RE.match(src, start):
                self.emit(TokenKind.NUMBER, m.group(), leading)
            elif m := _IDENT_RE.match(src, start):
                word = m.group()
                end = m.end()
                if word in _STRING_PREFIXES and end < n and src[end] in "\"'":
                    quote_end = self.scan_quoted(end, src[end])
                    kind = TokenKind.STRING if src[end] == '"' else TokenKind.CHAR
                    self.emit(kind, src[start:quote_end], leading)
                else:
                    kind = TokenKind.KEYWORD if word in KEYWORDS else TokenKind.IDENTIFIER
                    self.emit(kind, word, leading)
            elif ch in _SINGLE and not src.startswith("::", start):
                self.emit(_SINGLE[ch], ch, leading)
            else:
                self.emit(TokenKind.PUNCT, match_operator(src, start), leading)
            self.at_line_start = False
            leading_start = self.pos
        return TokenStream(tuple(self.tokens), self.name, src[leading_start:])


def tokenize(source: str, source_name: str = "<stdin>") -> TokenStream:
    """Split *source* into a lossless :class:`TokenStream`.

    Raises :class:`UnterminatedString` or :class:`UnterminatedComment`
    positioned at the opening delimiter.
    """
    return _Scanner(source, source_name).run()


def significant(ts: TokenStream) -> TokenStream:
    """Drop Newline tokens; comments and preprocessor lines stay."""
    kept = tuple(t for t in ts.tokens if t.kind is not TokenKind.NEWLINE)
    return TokenStream(kept, ts.source_name, ts.trailing)


def untokenize(ts: TokenStream) -> str:
    """Inverse of :func:`tokenize` for a full (non-filtered) stream."""
    return "".join(t.leading + t.text for t in ts.tokens) + ts.trailing
