"""Command-line front end: format, check or detect files and stdin.

Exit status is 0 on success, 1 when ``--check`` finds deviations, 2 when any
input fails to read, lex or parse (other inputs are still processed) and 3
for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, TextIO

from .detector import check, detect_style
from .errors import ConfigParseError, SourceError, UnknownStyle
from .render import format_source
from .styles import STYLE_NAMES, FormatConfig, SimpleBodyPolicy, SwitchScheme, builtin_style

EXIT_OK = 0
EXIT_DEVIATIONS = 1
EXIT_SOURCE_ERROR = 2
EXIT_USAGE = 3

SOURCE_SUFFIXES = frozenset({".c", ".h", ".cc", ".cpp", ".hpp"})
STDIN = "-"


class UsageError(Exception):
    pass


@dataclass
class ConfigFile:
    """Settings read from a config file; ``overrides`` are FormatConfig fields."""

    style: Optional[str] = None
    overrides: dict = field(default_factory=dict)


def _parse_bool(text: str) -> bool:
    value = text.lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise ValueError(f"expected a positive integer, got {text!r}")
    return value


def _parse_width(text: str) -> int:
    value = int(text)
    if value < 20:
        raise ValueError(f"line width must be at least 20, got {text!r}")
    return value


def _parse_style(text: str) -> str:
    return builtin_style(text).name


# config key -> (FormatConfig field, value parser); None field means the style
_CONFIG_KEYS = {
    "style": (None, _parse_style),
    "indent_size": ("indent_width", _parse_positive),
    "use_tabs": ("use_tabs", _parse_bool),
    "line_width": ("max_line_width", _parse_width),
    "simple_body": ("simple_body_policy", SimpleBodyPolicy),
    "switch": ("switch_scheme", SwitchScheme),
    "null_body_comment": ("null_body_comment", _parse_bool),
    "do_while_cuddle": ("do_while_cuddle", _parse_bool),
}


def load_config(path: str | os.PathLike) -> ConfigFile:
    """Read a flat ``key=value`` file; ``#`` starts a comment."""
    name = str(path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigParseError(f"cannot read config: {exc}", 0, name) from None
    result = ConfigFile()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            raise ConfigParseError(f"expected key=value, got {line!r}", lineno, name)
        if key not in _CONFIG_KEYS:
            raise ConfigParseError(
                f"unknown key {key!r}; known keys: {', '.join(_CONFIG_KEYS)}", lineno, name)
        target, parse = _CONFIG_KEYS[key]
        try:
            parsed = parse(value)
        except (ValueError, UnknownStyle) as exc:
            raise ConfigParseError(f"invalid value for {key}: {exc}", lineno, name) from None
        if target is None:
            result.style = parsed
        else:
            result.overrides[target] = parsed
    return result


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)

    def exit(self, status=0, message=None):
        if message:
            raise UsageError(message.strip())
        raise SystemExit(status)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="indentor", description="Re-indent C-like source in a named brace style.")
    p.add_argument("inputs", nargs="*", metavar="PATH",
                   help="files or directories; '-' or nothing reads stdin")
    p.add_argument("--style", help=f"one of: {', '.join(STYLE_NAMES)} (default kr)")
    p.add_argument("--indent-size", type=_parse_positive, metavar="N")
    tabs = p.add_mutually_exclusive_group()
    tabs.add_argument("--use-tabs", dest="use_tabs", action="store_const", const=True)
    tabs.add_argument("--use-spaces", dest="use_tabs", action="store_const", const=False)
    p.add_argument("--line-width", type=_parse_width, metavar="N")
    p.add_argument("--simple-body", type=SimpleBodyPolicy,
                   metavar="{same-line,braced}")
    p.add_argument("--switch", type=SwitchScheme, metavar="{aligned,indented}")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--check", action="store_true", help="report lines that would change")
    mode.add_argument("--detect", action="store_true", help="score each style against the input")
    p.add_argument("--in-place", action="store_true", help="rewrite files instead of printing")
    p.add_argument("--show-levels", action="store_true",
                   help="prefix each output line with its nesting level")
    p.add_argument("--report", choices=("text", "json"), default="text")
    p.add_argument("--config", metavar="FILE")
    return p


def collect_inputs(inputs: list[str]) -> list[str]:
    """Expand directories to their C-family files, sorted; keep other paths."""
    if not inputs:
        return [STDIN]
    out: list[str] = []
    for item in inputs:
        path = Path(item)
        if item != STDIN and path.is_dir():
            out.extend(str(p) for p in sorted(path.rglob("*"))
                       if p.is_file() and p.suffix.lower() in SOURCE_SUFFIXES)
        else:
            out.append(item)
    return out


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Replace *path* with *text* via a sibling temp file and a rename."""
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        if target.exists():
            os.chmod(tmp, target.stat().st_mode & 0o7777)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def _effective(args: argparse.Namespace) -> tuple[str, FormatConfig]:
    settings = load_config(args.config) if args.config else ConfigFile()
    style = args.style or settings.style or "kr"
    style = builtin_style(style).name
    overrides = dict(settings.overrides)
    cli = {
        "indent_width": args.indent_size,
        "use_tabs": args.use_tabs,
        "max_line_width": args.line_width,
        "simple_body_policy": args.simple_body,
        "switch_scheme": args.switch,
    }
    overrides.update({k: v for k, v in cli.items() if v is not None})
    overrides["annotate_levels"] = args.show_levels
    return style, FormatConfig(**overrides)


def _check_text(name: str, deviations) -> str:
    lines = [f"{name}:{d.line}:1: expected {d.expected!r}, found {d.found!r}" for d in deviations]
    lines.append(f"{name}: {len(deviations)} deviation(s)")
    return "\n".join(lines) + "\n"


def run(argv: list[str], stdin: Optional[TextIO] = None, stdout: Optional[TextIO] = None,
        stderr: Optional[TextIO] = None) -> int:
    """Run the tool on *argv* and return the exit status."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.check and args.show_levels:
            raise UsageError("--show-levels output cannot be checked")
        if args.in_place and (args.check or args.detect):
            raise UsageError("--in-place only applies when formatting")
        if args.in_place and args.show_levels:
            raise UsageError("--show-levels output cannot be written in place")
        inputs = collect_inputs(args.inputs)
        if args.in_place and STDIN in inputs:
            raise UsageError("--in-place needs file inputs, not stdin")
        style_name, config = _effective(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    except (UsageError, UnknownStyle, ConfigParseError) as exc:
        stderr.write(f"indentor: {exc}\n")
        return EXIT_USAGE

    style = builtin_style(style_name)
    status = EXIT_OK
    for name in inputs:
        display = "<stdin>" if name == STDIN else name
        try:
            if name == STDIN:
                source = stdin.read()
            else:
                with open(name, encoding="utf-8", newline="") as fh:
                    source = fh.read()
        except (OSError, UnicodeDecodeError) as exc:
            stderr.write(f"{display}:1:1: cannot read input: {exc}\n")
            status = max(status, EXIT_SOURCE_ERROR)
            continue
        try:
            if args.detect:
                report = detect_style(source, display)
                out = report.to_json() + "\n" if args.report == "json" else report.to_text()
            elif args.check:
                deviations = check(source, style, config, display)
                if args.report == "json":
                    out = json.dumps({"file": display, "style": style_name,
                                      "deviations": [d._asdict() for d in deviations]}) + "\n"
                else:
                    out = _check_text(display, deviations) if deviations else ""
                if deviations:
                    status = max(status, EXIT_DEVIATIONS)
            else:
                out = format_source(source, style, config, display)
                if args.in_place:
                    if out != source:
                        atomic_write(name, out)
                    out = ""
        except SourceError as exc:
            stderr.write(f"{exc}\n")
            status = max(status, EXIT_SOURCE_ERROR)
            continue
        except OSError as exc:
            stderr.write(f"{display}:1:1: cannot write: {exc}\n")
            status = max(status, EXIT_SOURCE_ERROR)
            continue
        stdout.write(out)
    stdout.flush()
    return status


def main() -> int:
    return run(sys.argv[1:])
