"""Combinatorial ground truth, written without any reasoning machinery."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Union

Slot = Union[int, str]
TRUE = "T"
FALSE = "F"


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        norm = []
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) leaves the vertex range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "edges", tuple(norm))

    def neighbours(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


@dataclass(frozen=True)
class TwoTwoFormula:
    """Clauses ``(pos1, pos2, neg1, neg2)``: satisfied when a positive slot is
    true or a negative slot is false. Slots are 1-based variable indices or
    the constants ``"T"`` / ``"F"``."""

    n: int
    clauses: tuple[tuple[Slot, Slot, Slot, Slot], ...]

    def __post_init__(self) -> None:
        cls = tuple(tuple(c) for c in self.clauses)
        for c in cls:
            if len(c) != 4:
                raise ValueError("each clause has exactly four slots")
            for s in c:
                if s in (TRUE, FALSE):
                    continue
                if isinstance(s, bool) or not isinstance(s, int) or not 1 <= s <= self.n:
                    raise ValueError(f"bad slot {s!r}")
        object.__setattr__(self, "clauses", cls)

    @property
    def m(self) -> int:
        return len(self.clauses)


def three_colouring(g: Graph) -> list[int] | None:
    """A proper 3-colouring by backtracking in vertex order, or ``None``."""
    adj = g.neighbours()
    colour = [-1] * g.n

    def place(v: int) -> bool:
        if v == g.n:
            return True
        for c in range(3):
            if all(colour[u] != c for u in adj[v]):
                colour[v] = c
                if place(v + 1):
                    return True
        colour[v] = -1
        return False

    return list(colour) if place(0) else None


def is_three_colourable(g: Graph) -> bool:
    return three_colouring(g) is not None


def independent_sets(g: Graph) -> Iterator[frozenset[int]]:
    adj = g.neighbours()
    for mask in range(1 << g.n):
        members = [v for v in range(g.n) if mask >> v & 1]
        if all(not (adj[v] & set(members)) for v in members):
            yield frozenset(members)


def maximum_independent_sets(g: Graph) -> list[frozenset[int]]:
    sets = list(independent_sets(g))
    best = max(len(s) for s in sets)
    return [s for s in sets if len(s) == best]


def in_every_maximum_independent_set(g: Graph, w: int) -> bool:
    return all(w in s for s in maximum_independent_sets(g))


def _slot_value(s: Slot, nu: tuple[int, ...]) -> int:
    if s == TRUE:
        return 1
    if s == FALSE:
        return 0
    return nu[s - 1]


def satisfies(phi: TwoTwoFormula, nu: tuple[int, ...]) -> bool:
    for p1, p2, n1, n2 in phi.clauses:
        if not (
            _slot_value(p1, nu)
            or _slot_value(p2, nu)
            or not _slot_value(n1, nu)
            or not _slot_value(n2, nu)
        ):
            return False
    return True


def lexmax_assignment(phi: TwoTwoFormula) -> tuple[int, ...] | None:
    """The satisfying assignment that is largest comparing x1 first, then x2, ..."""
    for nu in itertools.product((1, 0), repeat=phi.n):
        if satisfies(phi, nu):
            return nu
    return None
