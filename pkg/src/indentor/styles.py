"""The twelve built-in indentation styles and the user-facing format knobs."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from enum import Enum
from typing import Optional

from .errors import UnknownStyle


class BracePlacement(Enum):
    SAME_LINE = "SameLine"
    NEXT_LINE_HEADER_COLUMN = "NextLineHeaderColumn"
    NEXT_LINE_INDENTED = "NextLineIndented"


class CloseBracePlacement(Enum):
    HEADER_COLUMN = "HeaderColumn"
    BRACE_COLUMN = "BraceColumn"
    BODY_COLUMN = "BodyColumn"
    CUDDLE_LAST_STATEMENT = "CuddleLastStatement"


class BodyRelativeTo(Enum):
    HEADER = "Header"
    BRACE = "Brace"


class SimpleBodyPolicy(Enum):
    SAME_LINE = "same-line"
    NEXT_LINE_BRACED = "braced"


class SwitchScheme(Enum):
    CASES_AT_SWITCH_COLUMN = "aligned"
    CASES_INDENTED = "indented"


@dataclass(frozen=True)
class StyleSpec:
    """Parameter vector separating the built-in styles.

    ``brace_extra_indent`` and ``body_extra_indent`` are in indent units.
    With ``body_relative_to=BRACE`` the body sits ``body_extra_indent``
    units right of the brace; otherwise one unit right of the header.
    ``default_tab_width`` of None means a tab spans one indent unit.
    """

    name: str
    function_brace: BracePlacement
    control_brace: BracePlacement
    class_brace: BracePlacement
    close_brace: CloseBracePlacement = CloseBracePlacement.HEADER_COLUMN
    brace_extra_indent: int = 0
    body_relative_to: BodyRelativeTo = BodyRelativeTo.HEADER
    body_extra_indent: int = 1
    statement_on_open_brace_line: bool = False
    short_function_one_line: bool = False
    space_before_call_paren: bool = False
    default_indent_width: int = 4
    default_use_tabs: bool = False
    default_tab_width: Optional[int] = None

    def __post_init__(self) -> None:
        placements = (self.function_brace, self.control_brace, self.class_brace)
        if self.brace_extra_indent and BracePlacement.NEXT_LINE_INDENTED not in placements:
            raise ValueError("brace_extra_indent needs a NextLineIndented placement")
        if self.statement_on_open_brace_line and BracePlacement.SAME_LINE in placements:
            raise ValueError("statement_on_open_brace_line needs own-line open braces")
        if self.default_indent_width < 1:
            raise ValueError("default_indent_width must be positive")


SAME = BracePlacement.SAME_LINE
NEXT = BracePlacement.NEXT_LINE_HEADER_COLUMN
INDENTED = BracePlacement.NEXT_LINE_INDENTED

_STYLES = (
    StyleSpec("kr", function_brace=NEXT, control_brace=SAME, class_brace=NEXT),
    StyleSpec("1tbs", function_brace=SAME, control_brace=SAME, class_brace=SAME),
    StyleSpec("stroustrup", function_brace=NEXT, control_brace=SAME, class_brace=SAME,
              short_function_one_line=True),
    StyleSpec("allman", function_brace=NEXT, control_brace=NEXT, class_brace=NEXT),
    # soft tabulator of 4 columns, hard tabs every 8
    StyleSpec("knf", function_brace=NEXT, control_brace=SAME, class_brace=NEXT,
              default_indent_width=4, default_use_tabs=True, default_tab_width=8),
    StyleSpec("whitesmiths", function_brace=INDENTED, control_brace=INDENTED, class_brace=INDENTED,
              brace_extra_indent=1, body_relative_to=BodyRelativeTo.BRACE, body_extra_indent=0,
              close_brace=CloseBracePlacement.BRACE_COLUMN),
    StyleSpec("gnu", function_brace=NEXT, control_brace=INDENTED, class_brace=NEXT,
              brace_extra_indent=1, body_relative_to=BodyRelativeTo.BRACE, body_extra_indent=1,
              close_brace=CloseBracePlacement.BRACE_COLUMN, space_before_call_paren=True,
              default_indent_width=2),
    StyleSpec("horstmann", function_brace=NEXT, control_brace=NEXT, class_brace=NEXT,
              statement_on_open_brace_line=True, default_indent_width=2),
    StyleSpec("pico", function_brace=NEXT, control_brace=NEXT, class_brace=NEXT,
              statement_on_open_brace_line=True,
              close_brace=CloseBracePlacement.CUDDLE_LAST_STATEMENT, default_indent_width=2),
    StyleSpec("banner", function_brace=SAME, control_brace=SAME, class_brace=SAME,
              default_indent_width=2),
    StyleSpec("lisp", function_brace=SAME, control_brace=SAME, class_brace=SAME,
              close_brace=CloseBracePlacement.CUDDLE_LAST_STATEMENT),
    StyleSpec("ratliff", function_brace=SAME, control_brace=SAME, class_brace=SAME,
              close_brace=CloseBracePlacement.BODY_COLUMN),
)

BUILTIN_STYLES: dict[str, StyleSpec] = {s.name: s for s in _STYLES}
STYLE_NAMES: tuple[str, ...] = tuple(BUILTIN_STYLES)


def builtin_style(name: str) -> StyleSpec:
    """Look up a built-in style by case-insensitive name."""
    try:
        return BUILTIN_STYLES[name.strip().lower()]
    except KeyError:
        raise UnknownStyle(name, STYLE_NAMES) from None


@dataclass(frozen=True)
class FormatConfig:
    """User-tunable formatting options.

    ``indent_width``, ``use_tabs`` and ``tab_width`` left as None are filled
    from the chosen style by :meth:`resolve`.
    """

    indent_width: Optional[int] = None
    use_tabs: Optional[bool] = None
    tab_width: Optional[int] = None
    max_line_width: int = 79
    simple_body_policy: SimpleBodyPolicy = SimpleBodyPolicy.NEXT_LINE_BRACED
    switch_scheme: SwitchScheme = SwitchScheme.CASES_INDENTED
    null_body_comment: bool = True
    do_while_cuddle: bool = True
    annotate_levels: bool = False

    def __post_init__(self) -> None:
        if self.indent_width is not None and self.indent_width < 1:
            raise ValueError("indent_width must be >= 1")
        if self.tab_width is not None and self.tab_width < 1:
            raise ValueError("tab_width must be >= 1")
        if self.max_line_width < 20:
            raise ValueError("max_line_width must be >= 20")

    def resolve(self, style: StyleSpec) -> "FormatConfig":
        """Fill unset fields from *style*; explicit settings win."""
        width = self.indent_width if self.indent_width is not None else style.default_indent_width
        tabs = self.use_tabs if self.use_tabs is not None else style.default_use_tabs
        tab_width = self.tab_width
        if tab_width is None:
            # a style's hard-tab width only applies to its own indent unit
            if self.indent_width is None and style.default_tab_width is not None:
                tab_width = style.default_tab_width
            else:
                tab_width = width
        return replace(self, indent_width=width, use_tabs=tabs, tab_width=tab_width)

    def merged(self, **overrides) -> "FormatConfig":
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise TypeError(f"unknown config fields: {sorted(unknown)}")
        return replace(self, **overrides)
