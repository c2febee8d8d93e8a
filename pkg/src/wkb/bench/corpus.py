"""Text formats for graph and 2+2-formula corpora.

Graph::

    4          # vertex count
    0 1        # one edge per line
    1 2

Formula::

    2 1        # variable count, clause count
    1 T 2 F    # pos1 pos2 neg1 neg2; variables are 1-based, T/F constants

``#`` starts a comment; blank lines are ignored.
"""

from __future__ import annotations

from typing import Iterator

from ..core import WKBError
from .solvers import FALSE, TRUE, Graph, TwoTwoFormula


class CorpusFormatError(WKBError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for no, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split("#", 1)[0].split()
        if toks:
            yield no, toks


def _int(tok: str, no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise CorpusFormatError(no, f"expected an integer, got {tok!r}") from None


def parse_graph(text: str) -> Graph:
    rows = list(_lines(text))
    if not rows:
        raise CorpusFormatError(1, "missing vertex count")
    no, head = rows[0]
    if len(head) != 1:
        raise CorpusFormatError(no, "the first line holds only the vertex count")
    n = _int(head[0], no)
    edges = []
    for no, toks in rows[1:]:
        if len(toks) != 2:
            raise CorpusFormatError(no, "an edge line holds two vertices")
        edges.append((_int(toks[0], no), _int(toks[1], no)))
    try:
        return Graph(n, tuple(edges))
    except ValueError as exc:
        raise CorpusFormatError(no, str(exc)) from None


def format_graph(g: Graph) -> str:
    return "\n".join([str(g.n)] + [f"{u} {v}" for u, v in g.edges]) + "\n"


def _slot(tok: str, no: int):
    if tok in (TRUE, FALSE):
        return tok
    return _int(tok, no)


def parse_formula(text: str) -> TwoTwoFormula:
    rows = list(_lines(text))
    if not rows:
        raise CorpusFormatError(1, "missing header")
    no, head = rows[0]
    if len(head) != 2:
        raise CorpusFormatError(no, "the header is 'n m'")
    n, m = _int(head[0], no), _int(head[1], no)
    clauses = []
    for no, toks in rows[1:]:
        if len(toks) != 4:
            raise CorpusFormatError(no, "a clause has four slots")
        clauses.append(tuple(_slot(t, no) for t in toks))
    if len(clauses) != m:
        raise CorpusFormatError(no, f"header announces {m} clauses, found {len(clauses)}")
    try:
        return TwoTwoFormula(n, tuple(clauses))
    except ValueError as exc:
        raise CorpusFormatError(no, str(exc)) from None


def format_formula(phi: TwoTwoFormula) -> str:
    body = [" ".join(str(s) for s in c) for c in phi.clauses]
    return "\n".join([f"{phi.n} {phi.m}"] + body) + "\n"


def all_graphs(max_n: int, min_n: int = 1) -> list[Graph]:
    """One graph per isomorphism class with ``min_n..max_n`` vertices (max 7),
    taken from the networkx graph atlas."""
    if max_n > 7:
        raise ValueError("the graph atlas stops at 7 vertices")
    from networkx.generators.atlas import graph_atlas_g

    out = []
    for g in graph_atlas_g():
        n = g.number_of_nodes()
        if min_n <= n <= max_n:
            out.append(Graph(n, tuple(sorted((min(u, v), max(u, v)) for u, v in g.edges()))))
    return out
