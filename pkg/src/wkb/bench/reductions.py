"""Instance generators for the three data-complexity hardness reductions.

Each generator emits an EL_bot weighted KB whose reasoning verdict is tied
to a graph or formula property checked independently in
:mod:`wkb.bench.solvers`.
"""

from __future__ import annotations

from ..core import (
    INF,
    And,
    Bot,
    ConceptAssertion,
    ConceptAtom,
    Exists,
    Inclusion,
    Name,
    Query,
    RoleAssertion,
    WeightedKB,
    WKBError,
    conj,
)
from .solvers import FALSE, TRUE, Graph, TwoTwoFormula, lexmax_assignment


class UnsatisfiableInput(WKBError):
    pass


def vertex(v: int) -> str:
    return f"v{v}"


def gen_3col(g: Graph) -> tuple[WeightedKB, int]:
    """A KB that has an interpretation of cost at most 3 iff ``g`` is 3-colourable.

    Colour individuals c1..c3 are forced into B, whose elements each cost 1;
    every vertex needs an R-successor in B, and adjacent vertices pointing
    to the same colour would put a fourth element into B.
    """
    A, B, E, R = Name("A"), Name("B"), "E", "R"
    tbox: list = []
    for i in (1, 2, 3):
        Ci = Name(f"C{i}")
        tbox.append((Inclusion(And(Exists(R, Ci), Exists(E, Exists(R, Ci))), B), INF))
    tbox.append((Inclusion(A, Exists(R, B)), INF))
    tbox.append((Inclusion(B, Bot), 1))
    abox: list = [(ConceptAssertion("A", vertex(v)), INF) for v in range(g.n)]
    abox += [(RoleAssertion(E, vertex(u), vertex(v)), INF) for u, v in g.edges]
    for i in (1, 2, 3):
        abox.append((ConceptAssertion(f"C{i}", f"c{i}"), INF))
    for i in (1, 2, 3):
        abox.append((ConceptAssertion("B", f"c{i}"), INF))
    return WeightedKB(tuple(tbox), tuple(abox)), 3


def gen_independent_set(g: Graph, w: int) -> WeightedKB:
    """Membership of ``w`` in every maximum independent set as a certain-opt query.

    Goal(w) is certain-opt entailed iff ``w`` lies in every maximum independent
    set; NoGoal(w) is possible-opt entailed iff some maximum independent set
    omits ``w``.
    """
    if not 0 <= w < g.n:
        raise WKBError(f"vertex {w} out of range")
    tbox: list = []
    for i in (1, 2):
        In = Name(f"In{i}")
        tbox.append((Inclusion(And(In, Exists("Edge", In)), Bot), INF))
    for i in (1, 2):
        tbox.append((Inclusion(And(Name(f"In{i}"), Name("Distinguish")), Name("Goal")), INF))
    tbox.append((Inclusion(And(Name("Goal"), Name("NoGoal")), Bot), INF))
    abox: list = []
    for v in range(g.n):
        for i in (1, 2):
            abox.append((ConceptAssertion(f"In{i}", vertex(v)), 1))
    abox += [(RoleAssertion("Edge", vertex(u), vertex(v)), INF) for u, v in g.edges]
    abox.append((ConceptAssertion("Distinguish", vertex(w)), INF))
    abox.append((ConceptAssertion("NoGoal", vertex(w)), 1))
    return WeightedKB(tuple(tbox), tuple(abox))


def goal_query(w: int) -> Query:
    return Query((ConceptAtom("Goal", vertex(w)),))


def nogoal_query(w: int) -> Query:
    return Query((ConceptAtom("NoGoal", vertex(w)),))


def lexmax_base(n: int, m: int) -> int:
    return max(2 * n, m) + 1


def _slot_individual(s) -> str:
    if s == TRUE:
        return "t"
    if s == FALSE:
        return "f"
    return f"x{s}"


def gen_lexmax(phi: TwoTwoFormula, k: int | None = None, *, check: bool = True) -> WeightedKB:
    """Prioritised KB whose optimal interpretations encode the lexicographically
    maximum satisfying assignment: T'(x_i) (concept ``Tp``) is entailed under
    either opt semantics iff that assignment sets x_i to 1.

    ``k`` only selects the query (see :func:`lexmax_query`); the KB is the same
    for every k.
    """
    if check and lexmax_assignment(phi) is None:
        raise UnsatisfiableInput("the formula has no satisfying assignment")
    if k is not None and not 1 <= k <= phi.n:
        raise WKBError(f"variable index {k} out of range")
    n, m = phi.n, phi.m
    u = lexmax_base(n, m)
    T, F, Tp = Name("T"), Name("F"), Name("Tp")
    clause_violated = conj(Exists("P1", F), Exists("P2", F), Exists("N1", T), Exists("N2", T))
    tbox = (
        (Inclusion(And(F, T), Bot), INF),
        (Inclusion(And(F, Tp), Bot), INF),
        (Inclusion(Exists("S", clause_violated), Bot), INF),
    )
    abox: list = []
    for j in range(1, m + 1):
        abox.append((RoleAssertion("S", "phi", f"c{j}"), u ** n))
    for j, (p1, p2, n1, n2) in enumerate(phi.clauses, start=1):
        for role, slot in (("P1", p1), ("P2", p2), ("N1", n1), ("N2", n2)):
            abox.append((RoleAssertion(role, f"c{j}", _slot_individual(slot)), INF))
    for i in range(1, n + 1):
        abox.append((ConceptAssertion("F", f"x{i}"), u ** (n + 1)))
        abox.append((ConceptAssertion("T", f"x{i}"), u ** (n + 1)))
        abox.append((ConceptAssertion("Tp", f"x{i}"), u ** (n - i)))
    abox.append((ConceptAssertion("F", "f"), INF))
    abox.append((ConceptAssertion("T", "t"), INF))
    return WeightedKB(tbox, _dedupe(abox))


def _dedupe(abox: list) -> tuple:
    """Merge repeated assertions (a clause may name the same slot twice)."""
    out: dict = {}
    for a, w in abox:
        out[a] = max(out[a], w) if a in out else w
    return tuple(out.items())


def lexmax_query(k: int) -> Query:
    return Query((ConceptAtom("Tp", f"x{k}"),))


def lexmax_weights(n: int, m: int) -> list[int]:
    """Weights of priority levels L_1 .. L_{n+2}."""
    u = lexmax_base(n, m)
    return [u ** (n + 2 - i) for i in range(1, n + 3)]
