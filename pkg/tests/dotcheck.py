"""Minimal DOT grammar checker, used only by tests.

Accepts the subset the emitters produce:

    graph    := ("digraph" | "graph") IDENT? "{" stmt* "}"
    stmt     := node_id (edge_op node_id)? attr_list? ";"
    attr_list:= "[" IDENT "=" (IDENT | QUOTED) ("," ...)* "]"

Edge operator must match the graph type (-> for digraph, -- for graph).
Raises ValueError on anything outside the grammar.
"""

from __future__ import annotations

import re

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<quoted>"(?:\\.|[^"\\])*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*|-?[0-9.]+)
  | (?P<op>->|--|[{}\[\];=,])
    """,
    re.VERBOSE,
)


def _tokens(text: str) -> list[str]:
    out: list[str] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ValueError(f"DOT: cannot tokenize at offset {pos}: {text[pos:pos + 20]!r}")
        pos = match.end()
        if match.lastgroup != "ws":
            out.append(match.group())
    return out


def check_dot(text: str) -> dict:
    """Parse; return {'directed': bool, 'nodes': set, 'edges': list}."""
    toks = _tokens(text)
    i = 0

    def take(expected: str | None = None) -> str:
        nonlocal i
        if i >= len(toks):
            raise ValueError("DOT: unexpected end of input")
        tok = toks[i]
        if expected is not None and tok != expected:
            raise ValueError(f"DOT: expected {expected!r}, found {tok!r}")
        i += 1
        return tok

    def is_id(tok: str) -> bool:
        return bool(re.fullmatch(r'"(?:\\.|[^"\\])*"|[A-Za-z_][A-Za-z0-9_]*|-?[0-9.]+', tok))

    kind = take()
    if kind not in ("digraph", "graph"):
        raise ValueError(f"DOT: expected digraph or graph, found {kind!r}")
    directed = kind == "digraph"
    if toks[i] != "{":
        take()  # optional graph name
    take("{")

    nodes: set[str] = set()
    edges: list[tuple[str, str]] = []
    while toks[i] != "}":
        left = take()
        if not is_id(left):
            raise ValueError(f"DOT: expected node id, found {left!r}")
        right = None
        if toks[i] in ("->", "--"):
            op = take()
            if (op == "->") != directed:
                raise ValueError(f"DOT: edge operator {op} in a {kind}")
            right = take()
            if not is_id(right):
                raise ValueError(f"DOT: expected node id, found {right!r}")
        if toks[i] == "[":
            take("[")
            while True:
                name = take()
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                    raise ValueError(f"DOT: bad attribute name {name!r}")
                take("=")
                value = take()
                if not is_id(value):
                    raise ValueError(f"DOT: bad attribute value {value!r}")
                if toks[i] == ",":
                    take(",")
                    continue
                break
            take("]")
        take(";")
        nodes.add(left)
        if right is not None:
            nodes.add(right)
            edges.append((left, right))
    take("}")
    if i != len(toks):
        raise ValueError("DOT: trailing content after closing brace")
    return {"directed": directed, "nodes": nodes, "edges": edges}
