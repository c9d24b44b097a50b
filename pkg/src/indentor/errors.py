"""Exception hierarchy shared by the lexer, parser, style table and CLI."""

from __future__ import annotations


class IndentorError(Exception):
    """Base class for every error raised by this package."""


class SourceError(IndentorError):
    """An error tied to a position in an input file.

    ``str(err)`` renders as ``file:line:col: message`` so the CLI can
    print it unchanged.
    """

    def __init__(self, message: str, line: int, column: int, source_name: str = "<stdin>"):
        self.message = message
        self.line = line
        self.column = column
        self.source_name = source_name
        super().__init__(f"{source_name}:{line}:{column}: {message}")


class UnterminatedString(SourceError):
    pass


class UnterminatedComment(SourceError):
    pass


class UnbalancedBraces(SourceError):
    pass


class UnexpectedCloseBrace(SourceError):
    pass


class MalformedDoWhile(SourceError):
    pass


class UnknownStyle(IndentorError, ValueError):
    def __init__(self, name: str, valid: tuple[str, ...]):
        self.name = name
        self.valid = valid
        super().__init__(f"unknown style {name!r}; valid styles: {', '.join(valid)}")


class ConfigParseError(IndentorError, ValueError):
    def __init__(self, message: str, line: int, path: str = "<config>"):
        self.message = message
        self.line = line
        self.path = path
        super().__init__(f"{path}:{line}:1: {message}")
