"""Re-indent C-like source in one of twelve classic brace styles.

The pipeline is ``tokenize -> parse_blocks -> render``; ``detect_style``
and ``check`` read an existing layout back.
"""

from .blocktree import (
    Block,
    BlockTree,
    Comment,
    Header,
    HeaderKind,
    Label,
    ParseError,
    Preprocessor,
    Statement,
    depth_map,
    flatten,
    parse_blocks,
)
from .detector import AMBIGUOUS, Deviation, Observation, StyleReport, check, detect_style, observe
from .errors import (
    ConfigParseError,
    IndentorError,
    MalformedDoWhile,
    SourceError,
    UnbalancedBraces,
    UnexpectedCloseBrace,
    UnknownStyle,
    UnterminatedComment,
    UnterminatedString,
)
from .lexer import Token, TokenKind, TokenStream, significant, tokenize, untokenize
from .render import NULL_BODY_COMMENT, format_source, render, wrap_parameter_list
from .styles import (
    BUILTIN_STYLES,
    STYLE_NAMES,
    BodyRelativeTo,
    BracePlacement,
    CloseBracePlacement,
    FormatConfig,
    SimpleBodyPolicy,
    StyleSpec,
    SwitchScheme,
    builtin_style,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
