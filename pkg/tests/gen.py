"""Random well-formed C-like programs for the property suites.

Programs are built as a small tree first, then printed with randomly
chosen (but legal) whitespace so the formatter never sees a tidy input.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

MAX_DEPTH = 6
MAX_NODES = 50

_NAMES = ("a", "b", "count", "x1", "sum", "ptr", "list", "total")
_CALLS = ("f", "g", "puts", "printf", "do_work", "update")


@dataclass
class Node:
    kind: str
    text: str = ""
    children: list["Node"] = field(default_factory=list)
    orelse: list["Node"] = field(default_factory=list)
    braced: bool = True


class _Budget:
    def __init__(self, limit: int):
        self.left = limit

    def take(self) -> bool:
        if self.left <= 0:
            return False
        self.left -= 1
        return True


def _expr(rng: random.Random) -> str:
    a, b = rng.choice(_NAMES), rng.choice(_NAMES)
    op = rng.choice(("<", ">", "==", "!=", "&&", "<="))
    return f"{a} {op} {b}" if rng.random() < 0.7 else f"{a} {op} {rng.randint(0, 99)}"


def _simple(rng: random.Random) -> str:
    roll = rng.random()
    name = rng.choice(_NAMES)
    if roll < 0.35:
        return f"{rng.choice(_CALLS)}({name}, {rng.randint(0, 9)});"
    if roll < 0.6:
        return f"{name} = {rng.choice(_NAMES)} + {rng.randint(1, 9)};"
    if roll < 0.7:
        return f'printf("{{%d}}\\n", {name});'
    if roll < 0.8:
        return f"{name}++;"
    if roll < 0.9:
        return f"int {name}s[] = {{1, 2, {rng.randint(3, 9)}}};"
    return "return " + name + ";"


def _stmt_node(rng: random.Random, depth: int, budget: _Budget) -> Node:
    if depth >= MAX_DEPTH - 2 or rng.random() < 0.45:
        if rng.random() < 0.08:
            return Node("comment", f"/* note {rng.randint(0, 99)} */")
        return Node("stmt", _simple(rng))
    kind = rng.choice(("if", "if", "while", "for", "do", "switch", "block"))
    node = Node(kind)
    if kind == "if":
        node.text = f"if ({_expr(rng)})"
        node.braced = rng.random() < 0.7
        node.children = _body(rng, depth, budget, node.braced)
        if rng.random() < 0.5:
            node.orelse = _body(rng, depth, budget, node.braced)
    elif kind == "while":
        node.text = f"while ({_expr(rng)})"
        node.braced = rng.random() < 0.8
        node.children = _body(rng, depth, budget, node.braced)
    elif kind == "for":
        v = rng.choice(_NAMES)
        node.text = f"for ({v} = 0; {v} < {rng.randint(2, 50)}; {v}++)"
        node.braced = rng.random() < 0.8
        node.children = _body(rng, depth, budget, node.braced)
    elif kind == "do":
        node.text = f"while ({_expr(rng)});"
        node.children = _body(rng, depth, budget, True)
    elif kind == "switch":
        node.text = f"switch ({rng.choice(_NAMES)})"
        for k in range(rng.randint(1, 3)):
            if not budget.take():
                break
            case = Node("case", f"case {k}:" if rng.random() < 0.8 else "default:")
            case.children = [Node("stmt", _simple(rng)), Node("stmt", "break;")]
            node.children.append(case)
    else:
        node.children = _body(rng, depth, budget, True)
    return node


def _body(rng: random.Random, depth: int, budget: _Budget, braced: bool) -> list[Node]:
    if not braced:
        node = _stmt_node(rng, depth + 1, budget) if budget.take() else None
        if node is None or node.kind == "comment":
            # a lone comment is not a body
            node = Node("stmt", _simple(rng))
        return [node]
    out = []
    for _ in range(rng.randint(1, 4)):
        if not budget.take():
            break
        out.append(_stmt_node(rng, depth + 1, budget))
    return out or [Node("stmt", _simple(rng))]


def random_program(rng: random.Random) -> list[Node]:
    """Top-level functions and declarations within the size and depth caps."""
    while True:
        roots = _program(rng)
        if count_nodes(roots) <= MAX_NODES and tree_depth(roots) <= MAX_DEPTH:
            return roots


def _program(rng: random.Random) -> list[Node]:
    # the budget is soft (fallback bodies are free); random_program enforces the caps
    budget = _Budget(MAX_NODES - 15)
    roots = []
    for i in range(rng.randint(1, 3)):
        if not budget.take():
            break
        if rng.random() < 0.2:
            roots.append(Node("stmt", f"int {rng.choice(_NAMES)}{i} = {rng.randint(0, 9)};"))
            continue
        params = ", ".join(f"int p{k}" for k in range(rng.randint(0, 3))) or "void"
        fn = Node("func", f"int fn{i}({params})")
        fn.children = _body(rng, 0, budget, True)
        roots.append(fn)
    return roots


def count_nodes(nodes: list[Node]) -> int:
    return sum(1 + count_nodes(n.children) + count_nodes(n.orelse) for n in nodes)


def tree_depth(nodes: list[Node]) -> int:
    return max((1 + max(tree_depth(n.children), tree_depth(n.orelse)) for n in nodes), default=0)


class _Printer:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.parts: list[str] = []

    def gap(self) -> None:
        self.parts.append(self.rng.choice((" ", "\n", "  ", "\n\t", " \n   ")))

    def word(self, text: str) -> None:
        self.parts.append(text)
        self.gap()

    def body(self, nodes: list[Node], braced: bool) -> None:
        if braced:
            self.word("{")
        for n in nodes:
            self.node(n)
        if braced:
            self.word("}")

    def node(self, n: Node) -> None:
        if n.kind in ("stmt", "comment"):
            self.word(n.text)
        elif n.kind == "func":
            self.word(n.text)
            self.body(n.children, True)
        elif n.kind == "block":
            self.body(n.children, True)
        elif n.kind == "do":
            self.word("do")
            self.body(n.children, True)
            self.word(n.text)
        elif n.kind == "switch":
            self.word(n.text)
            self.word("{")
            for case in n.children:
                self.word(case.text)
                for c in case.children:
                    self.node(c)
            self.word("}")
        else:
            self.word(n.text)
            self.body(n.children, n.braced)
            if n.orelse:
                self.word("else")
                self.body(n.orelse, n.braced)


def program_source(nodes: list[Node], rng: random.Random) -> str:
    """Print *nodes* as source with random whitespace between tokens."""
    p = _Printer(rng)
    for n in nodes:
        p.node(n)
    return "".join(p.parts).strip() + "\n"


def random_source(seed: int) -> str:
    rng = random.Random(seed)
    return program_source(random_program(rng), rng)
