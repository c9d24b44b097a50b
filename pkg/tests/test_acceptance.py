"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the lines are printed as
each criterion finishes and repeated in the terminal summary.
"""

from __future__ import annotations

import io
import random
import subprocess
import sys
import time
from itertools import product

import pytest

from figures import FIGURES, LEVELS_ANNOTATED, NESTED_LEVELS, STYLE_GOLDENS
from gen import random_source
from structure import indent_column, layout_differences, line_tokens
from indentor import cli
from indentor.blocktree import CONTROL_KINDS, Block, Header, flatten, parse_blocks
from indentor.detector import detect_style
from indentor.lexer import COMMENT_KINDS as COMMENTS
from indentor.lexer import TokenKind, significant, tokenize
from indentor.render import NULL_BODY_COMMENT, format_source
from indentor.styles import STYLE_NAMES, FormatConfig, builtin_style

RESULTS: dict[int, str] = {}


def report(capsys, number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    RESULTS[number] = line
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def fmt(source, style, config=None):
    return format_source(source, builtin_style(style), config)


# 1 ---------------------------------------------------------------------

def test_criterion_1_golden_styles(capsys):
    start = time.perf_counter()
    failures = {}
    for style, golden in STYLE_GOLDENS.items():
        diffs = layout_differences(golden, fmt(golden, style))
        if diffs:
            failures[style] = diffs
    gnu_exact = fmt(STYLE_GOLDENS["gnu"], "gnu") == STYLE_GOLDENS["gnu"]
    elapsed = time.perf_counter() - start
    ok = not failures and gnu_exact and elapsed < 1.0
    report(capsys, 1, ok, f"{12 - len(failures)}/12 styles match structurally, "
                          f"GNU exact={gnu_exact}, {elapsed:.3f}s (limit 1s) {failures or ''}")


# 2 ---------------------------------------------------------------------

def _index_search_ok() -> bool:
    lines = fmt(FIGURES["index_search"], "kr", FormatConfig(max_line_width=60)).splitlines()
    col = lines[0].index("(") + 1
    return len(lines) == 4 and all(indent_column(ln) == col for ln in lines[1:])


def _null_body_ok() -> bool:
    return fmt(FIGURES["for_misleading_null"], "kr").splitlines()[1].strip() == \
        NULL_BODY_COMMENT + " ;"


def _do_while_ok() -> bool:
    lines = fmt(FIGURES["do_own_line_brace"], "kr").splitlines()
    return lines[1] == "do {" and lines[-1] == "} while (i < LIST_SIZE);"


def _switch_ok() -> bool:
    lines = fmt(FIGURES["switch_vowels"], "kr").splitlines()
    labels = [ln for ln in lines if ln.strip().startswith(("case", "default"))]
    body = [ln for ln in lines[1:-1] if ln not in labels]
    return (all(indent_column(ln) == 4 for ln in labels)
            and all(indent_column(ln) == 8 for ln in body) and len(labels) == 7)


def test_criterion_2_construct_goldens(capsys):
    checks = {"index_search": _index_search_ok(), "null_body": _null_body_ok(),
              "do_while": _do_while_ok(), "switch": _switch_ok()}
    failed = [k for k, v in checks.items() if not v]
    report(capsys, 2, not failed, f"{len(checks) - len(failed)}/4 constructs {failed or ''}")


# 3 and 4 ----------------------------------------------------------------

MATRIX = list(product(sorted(FIGURES), STYLE_NAMES, (False, True), (2, 4, 8)))


def _config(use_tabs, width):
    return FormatConfig(use_tabs=use_tabs, indent_width=width)


def test_criterion_3_idempotence(capsys):
    start = time.perf_counter()
    bad = []
    for name, style, tabs, width in MATRIX:
        cfg = _config(tabs, width)
        once = fmt(FIGURES[name], style, cfg)
        if fmt(once, style, cfg) != once:
            bad.append((name, style, tabs, width))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 10
    report(capsys, 3, ok, f"{len(MATRIX) - len(bad)}/{len(MATRIX)} cases idempotent, "
                          f"{elapsed:.2f}s (limit 10s) {bad[:5] or ''}")


def _visible(tokens):
    return [(t.kind, t.text) for t in tokens
            if not (t.kind is TokenKind.BLOCK_COMMENT and t.text == NULL_BODY_COMMENT)]


def _stream(text):
    return _visible(significant(tokenize(text)))


def test_criterion_4_semantic_preservation(capsys):
    bad = []
    for name, style, tabs, width in MATRIX:
        source = FIGURES[name]
        out = fmt(source, style, _config(tabs, width))
        if _stream(out) != _stream(source):
            bad.append((name, style, tabs, width))
    report(capsys, 4, not bad, f"{len(MATRIX) - len(bad)}/{len(MATRIX)} cases keep "
                               f"their significant tokens {bad[:5] or ''}")


# 5 ---------------------------------------------------------------------

# Styles that render a figure identically, worked out per figure from which
# distinguishing rules it exercises:
#   - no function or class block: function/class brace rules unused;
#   - nesting depth 1 only: KNF's 8-column hard tab never appears;
#   - no short function: stroustrup's one-line rule unused.
# Any style not listed for a figure is distinguishable on it.
CONTROL_ONLY_SHALLOW = frozenset({"kr", "1tbs", "knf", "stroustrup"})
CONTROL_ONLY_DEEP = frozenset({"kr", "1tbs", "stroustrup"})
FUNCTION_PLUS_CONTROL = frozenset({"kr", "stroustrup"})
TIE_GROUPS = {
    "kr_main": [FUNCTION_PLUS_CONTROL],
    "one_tbs_if_else": [CONTROL_ONLY_SHALLOW],
    "allman_while": [CONTROL_ONLY_SHALLOW],
    "knf_while": [CONTROL_ONLY_SHALLOW],
    "whitesmiths_while": [CONTROL_ONLY_SHALLOW],
    "gnu_combine": [FUNCTION_PLUS_CONTROL],
    "horstmann_if": [CONTROL_ONLY_DEEP],
    "lisp_for": [CONTROL_ONLY_DEEP],
    "ratliff_for": [CONTROL_ONLY_DEEP],
    "if_else_compound": [CONTROL_ONLY_SHALLOW],
    "if_else_mixed": [CONTROL_ONLY_SHALLOW],
    # case bodies sit two levels deep
    "switch_vowels": [CONTROL_ONLY_DEEP],
    "while_simple": [CONTROL_ONLY_SHALLOW],
    "while_compound": [CONTROL_ONLY_SHALLOW],
    "for_compound": [CONTROL_ONLY_SHALLOW],
    "do_braced": [CONTROL_ONLY_SHALLOW],
    "do_own_line_brace": [CONTROL_ONLY_SHALLOW],
    "do_cuddled": [CONTROL_ONLY_SHALLOW],
    "nested_levels": [FUNCTION_PLUS_CONTROL],
}


def _has_braced_control(source: str) -> bool:
    def walk(nodes):
        for n in nodes:
            if isinstance(n, Header):
                if n.kind in CONTROL_KINDS and isinstance(n.body, Block):
                    return True
                if walk([n.body] + ([n.orelse] if n.orelse else [])):
                    return True
            elif isinstance(n, Block) and walk(n.children):
                return True
        return False

    return walk(parse_blocks(significant(tokenize(source))).roots)


def test_criterion_5_detector_round_trip(capsys):
    figures = [n for n in sorted(FIGURES) if _has_braced_control(FIGURES[n])]
    bad = []
    for name in figures:
        outputs = {s: fmt(FIGURES[name], s) for s in STYLE_NAMES}
        for style in STYLE_NAMES:
            scores = detect_style(outputs[style]).scores
            leaders = {n for n, v in scores.items() if v == 1.0}
            group = next((g for g in TIE_GROUPS.get(name, []) if style in g), {style})
            identical = {s for s in STYLE_NAMES if outputs[s] == outputs[style]}
            best = detect_style(outputs[style]).best
            expected_best = style if len(group) == 1 else "Ambiguous"
            if not (scores[style] == 1.0 and leaders == set(group) == identical
                    and best == expected_best):
                bad.append((name, style, sorted(leaders)))
    total = len(figures) * len(STYLE_NAMES)
    covered = set(figures) == set(TIE_GROUPS)
    report(capsys, 5, not bad and covered,
           f"{total - len(bad)}/{total} (figure, style) pairs score 1.0 with the "
           f"expected tie set over {len(figures)} figures {bad[:5] or ''}")


# 6 ---------------------------------------------------------------------

def test_criterion_6_level_annotation(capsys):
    published = [ln[:3] for ln in LEVELS_ANNOTATED.splitlines() if ln.strip()]
    out = fmt(NESTED_LEVELS, "kr", FormatConfig(annotate_levels=True))
    produced = [ln[:3] for ln in out.splitlines() if ln.strip()]
    # the published figure stops before the function's closing brace
    ok = produced[:len(published)] == published and produced[len(published):] == ["[0]"]
    report(capsys, 6, ok, f"levels {' '.join(produced)} vs published {' '.join(published)}")


# 7 ---------------------------------------------------------------------

def _structural_braces(text):
    """(line, column, text) of each block brace; initializer braces skipped."""
    out = []
    depth_inline = 0
    prev = None
    for t in significant(tokenize(text)):
        if t.kind is TokenKind.OPEN_BRACE:
            if depth_inline or (prev is not None and prev.text in ("=", ",")):
                depth_inline += 1
            else:
                out.append((t.line, t.text))
        elif t.kind is TokenKind.CLOSE_BRACE:
            if depth_inline:
                depth_inline -= 1
            else:
                out.append((t.line, t.text))
        prev = t
    return out


def _column_law_violations(text: str, style: str, unit: int = 4) -> list[str]:
    """Check brace columns line by line, without using the renderer."""
    lines = text.splitlines()
    braces = _structural_braces(text)
    open_lines = {ln for ln, b in braces if b == "{"}
    close_lines = {ln for ln, b in braces if b == "}"}
    problems = []
    stack = []
    prev = None
    pending = None
    for n, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        col = indent_column(line)
        if pending is not None:
            if n not in close_lines and col != pending:
                problems.append(f"line {n}: first body line at {col}, expected {pending}")
            pending = None
        if n in open_lines:
            rest = [t for t in line_tokens(line)[1:] if t[0] not in COMMENTS]
            if not line.lstrip().startswith("{") or rest:
                # a trailing comment may follow the brace
                problems.append(f"line {n}: open brace shares its line")
            header = prev is not None and not prev[1].endswith((";", "{", "}", "*/", ":"))
            if header:
                want = prev[0] + (unit if style == "whitesmiths" else 0)
                if col != want:
                    problems.append(f"line {n}: open brace at {col}, expected {want}")
                pending = col if style == "whitesmiths" else col + unit
            else:
                pending = col + unit
            stack.append(col)
        if n in close_lines:
            if not line.lstrip().startswith("}"):
                problems.append(f"line {n}: close brace not first on its line")
            elif not stack:
                problems.append(f"line {n}: unbalanced close brace")
            elif stack.pop() != col:
                problems.append(f"line {n}: close brace not under its open brace")
        prev = (col, line.strip())
    if stack:
        problems.append("unclosed brace")
    return problems


def _balanced(tokens) -> bool:
    depth = 0
    for t in tokens:
        if t.kind is TokenKind.OPEN_BRACE:
            depth += 1
        elif t.kind is TokenKind.CLOSE_BRACE:
            depth -= 1
            if depth < 0:
                return False
    return depth == 0


RANDOM_TREES = 1000


def test_criterion_7_random_trees(capsys):
    start = time.perf_counter()
    rng = random.Random(20261018)
    bad = []
    for i in range(RANDOM_TREES):
        source = random_source(rng.randrange(2**32))
        ts = significant(tokenize(source))
        if flatten(parse_blocks(ts)).tokens != ts.tokens:
            bad.append((i, "inversion"))
            continue
        expected = _visible(ts)
        extra = STYLE_NAMES[i % len(STYLE_NAMES)]
        for style in dict.fromkeys(("allman", "whitesmiths", extra)):
            out = fmt(source, style)
            out_tokens = significant(tokenize(out))
            if not _balanced(out_tokens):
                bad.append((i, style, "balance"))
            if fmt(out, style) != out:
                bad.append((i, style, "idempotence"))
            if _visible(out_tokens) != expected:
                bad.append((i, style, "tokens"))
            if style in ("allman", "whitesmiths"):
                problems = _column_law_violations(out, style)
                if problems:
                    bad.append((i, style, problems[0]))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 30
    report(capsys, 7, ok, f"{RANDOM_TREES} random programs, {len(bad)} failures, "
                          f"{elapsed:.1f}s (limit 30s) {bad[:3] or ''}")


# 8 ---------------------------------------------------------------------

def _run(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdin=io.StringIO(stdin), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_criterion_8_cli_contract(capsys, tmp_path, monkeypatch):
    clean = tmp_path / "clean.c"
    clean.write_text(STYLE_GOLDENS["allman"])
    dirty = tmp_path / "dirty.c"
    dirty.write_text(FIGURES["knf_while"])
    broken = tmp_path / "broken.c"
    broken.write_text("int f(void)\n{\n    x();\n")
    outcomes = {
        "clean check": _run("--style=allman", "--check", str(clean))[0] == 0,
        "dirty check": _run("--style=allman", "--check", str(dirty))[0] == 1,
        "syntax error": _run("--style=allman", str(broken), str(clean))[0] == 2,
        "unknown style": _run("--style=nope", str(clean))[0] == 3,
    }
    proc = subprocess.run([sys.executable, "-m", "indentor", "--style=nope", str(clean)],
                          capture_output=True, text=True)
    outcomes["entry point"] = proc.returncode == 3 and "ratliff" in proc.stderr

    def failing_replace(src, dst):
        raise OSError("simulated failure")

    with monkeypatch.context() as m:
        m.setattr(cli.os, "replace", failing_replace)
        code = _run("--style=gnu", "--in-place", str(dirty))[0]
    leftovers = sorted(p.name for p in tmp_path.iterdir())
    outcomes["atomic in-place"] = (code == 2 and dirty.read_text() == FIGURES["knf_while"]
                                   and leftovers == ["broken.c", "clean.c", "dirty.c"])
    failed = [k for k, v in outcomes.items() if not v]
    report(capsys, 8, not failed, f"{len(outcomes) - len(failed)}/{len(outcomes)} "
                                  f"scenarios {failed or ''}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
