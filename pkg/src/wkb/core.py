"""Syntax of weighted ALCO knowledge bases and conjunctive queries.

Concepts are immutable trees compared structurally, so ``And(A, B)`` and
``And(B, A)`` are different keys. Weights are positive integers or the
singleton :data:`INF`; costs use the same representation with Python's
arbitrary-precision integers underneath, so sums never wrap around.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
MAX_WEIGHT = 2**64 - 1


class WKBError(Exception):
    """Base class for errors raised by this package."""


class UnknownIndividual(WKBError):
    pass


class UnknownNominalIndividual(UnknownIndividual):
    pass


class ResourceLimit(WKBError):
    """A configured search or enumeration budget ran out."""


class InfiniteCost(WKBError):
    pass


# ---------------------------------------------------------------- weights


class Infinity:
    """The saturating top element of the cost semiring."""

    _instance: Infinity | None = None

    def __new__(cls) -> Infinity:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self) -> str:
        return "INF"

    def __hash__(self) -> int:
        return hash("wkb.INF")

    def __eq__(self, other: object) -> bool:
        return other is self

    def __lt__(self, other: object) -> bool:
        if other is self or isinstance(other, int):
            return False
        return NotImplemented

    def __le__(self, other: object) -> bool:
        if other is self:
            return True
        if isinstance(other, int):
            return False
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if other is self:
            return False
        if isinstance(other, int):
            return True
        return NotImplemented

    def __ge__(self, other: object) -> bool:
        if other is self or isinstance(other, int):
            return True
        return NotImplemented

    def __add__(self, other: object) -> Infinity:
        if other is self or isinstance(other, int):
            return self
        return NotImplemented

    __radd__ = __add__


INF = Infinity()
Weight = Union[int, Infinity]
Cost = Union[int, Infinity]


def is_inf(value: object) -> bool:
    return value is INF


def cost_add(a: Cost, b: Cost) -> Cost:
    if a is INF or b is INF:
        return INF
    return a + b


def cost_scale(w: Weight, n: int) -> Cost:
    """``w * n`` where an infinite weight times zero contributes nothing."""
    if n < 0:
        raise ValueError("multiplicity must be non-negative")
    if n == 0:
        return 0
    if w is INF:
        return INF
    return w * n


def cost_sum(values: Iterable[Cost]) -> Cost:
    total: Cost = 0
    for v in values:
        if v is INF:
            return INF
        total += v
    return total


def format_cost(c: Cost) -> str:
    return "inf" if c is INF else str(c)


# --------------------------------------------------------------- concepts


class Concept:
    """Base class; ``&``, ``|`` and ``~`` build conjunctions, disjunctions and negations."""

    __slots__ = ()

    def __and__(self, other: Concept) -> Concept:
        return And(self, other)

    def __or__(self, other: Concept) -> Concept:
        return Or(self, other)

    def __invert__(self) -> Concept:
        return Not(self)

    def children(self) -> tuple[Concept, ...]:
        return ()


@dataclass(frozen=True, slots=True)
class Name(Concept):
    name: str


@dataclass(frozen=True, slots=True)
class Nominal(Concept):
    individual: str


@dataclass(frozen=True, slots=True)
class TopConcept(Concept):
    pass


@dataclass(frozen=True, slots=True)
class BotConcept(Concept):
    pass


Top = TopConcept()
Bot = BotConcept()


@dataclass(frozen=True, slots=True)
class And(Concept):
    left: Concept
    right: Concept

    def children(self) -> tuple[Concept, ...]:
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class Or(Concept):
    left: Concept
    right: Concept

    def children(self) -> tuple[Concept, ...]:
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class Not(Concept):
    operand: Concept

    def children(self) -> tuple[Concept, ...]:
        return (self.operand,)


@dataclass(frozen=True, slots=True)
class Exists(Concept):
    role: str
    filler: Concept

    def children(self) -> tuple[Concept, ...]:
        return (self.filler,)


@dataclass(frozen=True, slots=True)
class Forall(Concept):
    role: str
    filler: Concept

    def children(self) -> tuple[Concept, ...]:
        return (self.filler,)


def conj(*parts: Concept) -> Concept:
    """Left-nested conjunction; the empty conjunction is ``Top``."""
    if not parts:
        return Top
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def walk(c: Concept) -> Iterator[Concept]:
    """Pre-order traversal of every node of ``c``."""
    stack = [c]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


def concept_names_in(c: Concept) -> set[str]:
    return {n.name for n in walk(c) if isinstance(n, Name)}


def role_names_in(c: Concept) -> set[str]:
    return {n.role for n in walk(c) if isinstance(n, (Exists, Forall))}


def nominals_in(c: Concept) -> list[str]:
    seen: dict[str, None] = {}
    for n in walk(c):
        if isinstance(n, Nominal):
            seen.setdefault(n.individual)
    return list(seen)


# ------------------------------------------------------- axioms and ABox


@dataclass(frozen=True, slots=True)
class Inclusion:
    lhs: Concept
    rhs: Concept


@dataclass(frozen=True, slots=True)
class ConceptAssertion:
    concept: str
    individual: str

    @property
    def individuals(self) -> tuple[str, ...]:
        return (self.individual,)


@dataclass(frozen=True, slots=True)
class RoleAssertion:
    role: str
    subject: str
    object: str

    @property
    def individuals(self) -> tuple[str, ...]:
        return (self.subject, self.object)


Assertion = Union[ConceptAssertion, RoleAssertion]
Axiom = Union[Inclusion, ConceptAssertion, RoleAssertion]


def violation_concept(tau: Inclusion) -> Concept:
    """The concept whose extension is the violation set of ``tau``."""
    return And(tau.lhs, Not(tau.rhs))


@dataclass(frozen=True)
class WeightedKB:
    tbox: tuple[tuple[Inclusion, Weight], ...] = ()
    abox: tuple[tuple[Assertion, Weight], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "tbox", tuple((t, w) for t, w in self.tbox))
        object.__setattr__(self, "abox", tuple((a, w) for a, w in self.abox))

    @property
    def inclusions(self) -> tuple[Inclusion, ...]:
        return tuple(t for t, _ in self.tbox)

    @property
    def assertions(self) -> tuple[Assertion, ...]:
        return tuple(a for a, _ in self.abox)

    def items(self) -> Iterator[tuple[Axiom, Weight]]:
        yield from self.tbox
        yield from self.abox

    def weight_of(self, item: Axiom) -> Weight:
        for x, w in self.items():
            if x == item:
                return w
        raise KeyError(item)

    def individuals(self) -> list[str]:
        """ind(K): ABox individuals in order of appearance, then TBox nominals."""
        seen: dict[str, None] = {}
        for a, _ in self.abox:
            for i in a.individuals:
                seen.setdefault(i)
        for t, _ in self.tbox:
            for c in (t.lhs, t.rhs):
                for i in nominals_in(c):
                    seen.setdefault(i)
        return list(seen)

    def concept_names(self) -> list[str]:
        seen: dict[str, None] = {}
        for t, _ in self.tbox:
            for c in (t.lhs, t.rhs):
                for n in walk(c):
                    if isinstance(n, Name):
                        seen.setdefault(n.name)
        for a, _ in self.abox:
            if isinstance(a, ConceptAssertion):
                seen.setdefault(a.concept)
        return list(seen)

    def role_names(self) -> list[str]:
        seen: dict[str, None] = {}
        for t, _ in self.tbox:
            for c in (t.lhs, t.rhs):
                for n in walk(c):
                    if isinstance(n, (Exists, Forall)):
                        seen.setdefault(n.role)
        for a, _ in self.abox:
            if isinstance(a, RoleAssertion):
                seen.setdefault(a.role)
        return list(seen)

    def with_assertions(self, extra: Iterable[tuple[Assertion, Weight]]) -> WeightedKB:
        """Add assertions; an existing assertion takes the maximum of the two weights."""
        abox = list(self.abox)
        index = {a: i for i, (a, _) in enumerate(abox)}
        for a, w in extra:
            if a in index:
                i = index[a]
                old = abox[i][1]
                abox[i] = (a, max(old, w))
            else:
                index[a] = len(abox)
                abox.append((a, w))
        return WeightedKB(self.tbox, tuple(abox))


def k_infty(kb: WeightedKB) -> WeightedKB:
    """The sub-KB of infinite-weight axioms and assertions."""
    return WeightedKB(
        tuple((t, w) for t, w in kb.tbox if w is INF),
        tuple((a, w) for a, w in kb.abox if w is INF),
    )


def unweighted(tbox: Iterable[Inclusion], abox: Iterable[Assertion]) -> WeightedKB:
    """A classical KB: every axiom and assertion gets infinite weight."""
    return WeightedKB(tuple((t, INF) for t in tbox), tuple((a, INF) for a in abox))


# -------------------------------------------------------------- fragments


class Fragment(enum.Enum):
    EL_BOT = "EL_bot"
    ALCO = "ALCO"


_NON_EL = (Forall, Not, Or, Nominal)


def fragment_of(tbox: Iterable[Inclusion] | WeightedKB) -> Fragment:
    incs = tbox.inclusions if isinstance(tbox, WeightedKB) else tuple(tbox)
    for t in incs:
        for c in (t.lhs, t.rhs):
            if any(isinstance(n, _NON_EL) for n in walk(c)):
                return Fragment.ALCO
    return Fragment.EL_BOT


def subconcepts(tbox: Iterable[Inclusion] | WeightedKB) -> list[Concept]:
    """sub(T) in first-visit pre-order, deduplicated structurally."""
    incs = tbox.inclusions if isinstance(tbox, WeightedKB) else tuple(tbox)
    seen: dict[Concept, None] = {}
    for t in incs:
        for c in (t.lhs, t.rhs):
            for n in walk(c):
                seen.setdefault(n)
    return list(seen)


# ---------------------------------------------------------------- queries


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self) -> str:
        return "?" + self.name


Term = Union[Var, str]


@dataclass(frozen=True, slots=True)
class ConceptAtom:
    concept: str
    term: Term

    @property
    def terms(self) -> tuple[Term, ...]:
        return (self.term,)


@dataclass(frozen=True, slots=True)
class RoleAtom:
    role: str
    first: Term
    second: Term

    @property
    def terms(self) -> tuple[Term, ...]:
        return (self.first, self.second)


Atom = Union[ConceptAtom, RoleAtom]


@dataclass(frozen=True)
class Query:
    atoms: tuple[Atom, ...]
    answer_vars: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "answer_vars", tuple(self.answer_vars))
        used = {t.name for t in self.terms() if isinstance(t, Var)}
        for v in self.answer_vars:
            if v not in used:
                raise WKBError(f"answer variable {v!r} does not occur in any atom")

    def terms(self) -> list[Term]:
        out: dict[Term, None] = {}
        for a in self.atoms:
            for t in a.terms:
                out.setdefault(t)
        return list(out)

    def variables(self) -> list[str]:
        return [t.name for t in self.terms() if isinstance(t, Var)]

    def existential_vars(self) -> list[str]:
        return [v for v in self.variables() if v not in self.answer_vars]

    def individuals(self) -> list[str]:
        return [t for t in self.terms() if isinstance(t, str)]

    @property
    def is_boolean(self) -> bool:
        return not self.answer_vars

    @property
    def is_instance_query(self) -> bool:
        return self.is_boolean and len(self.atoms) == 1 and not self.variables()

    def substitute(self, mapping: dict[str, str]) -> Query:
        """Replace variables by individual names; replaced answer variables are dropped."""

        def sub(t: Term) -> Term:
            if isinstance(t, Var) and t.name in mapping:
                return mapping[t.name]
            return t

        atoms: list[Atom] = []
        for a in self.atoms:
            if isinstance(a, ConceptAtom):
                atoms.append(ConceptAtom(a.concept, sub(a.term)))
            else:
                atoms.append(RoleAtom(a.role, sub(a.first), sub(a.second)))
        return Query(tuple(atoms), tuple(v for v in self.answer_vars if v not in mapping))


def instance_query(atom: Assertion) -> Query:
    if isinstance(atom, ConceptAssertion):
        return Query((ConceptAtom(atom.concept, atom.individual),))
    return Query((RoleAtom(atom.role, atom.subject, atom.object),))


def bcq(*atoms: Atom) -> Query:
    return Query(tuple(atoms))


# ------------------------------------------------------------- validation


@dataclass(frozen=True)
class Diagnostic:
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.location}: {self.message}"


def _check_weight(w: object, loc: str, out: list[Diagnostic]) -> None:
    if w is INF:
        return
    if isinstance(w, bool) or not isinstance(w, int):
        out.append(Diagnostic(loc, f"weight {w!r} is not a positive integer or inf"))
    elif w < 1:
        out.append(Diagnostic(loc, "weight must be positive"))
    elif w > MAX_WEIGHT:
        out.append(Diagnostic(loc, "weight exceeds the 64-bit unsigned range"))


def validate(kb: WeightedKB) -> list[Diagnostic]:
    """Report namespace clashes, bad weights, bad identifiers and duplicates."""
    out: list[Diagnostic] = []
    kinds: dict[str, tuple[str, str]] = {}

    def use(name: str, kind: str, loc: str) -> None:
        if not IDENT.match(name):
            out.append(Diagnostic(loc, f"invalid identifier {name!r}"))
        prev = kinds.get(name)
        if prev is None:
            kinds[name] = (kind, loc)
        elif prev[0] != kind:
            out.append(
                Diagnostic(loc, f"{name!r} used as {kind} but already used as {prev[0]} at {prev[1]}")
            )

    seen: dict[object, str] = {}
    for i, (t, w) in enumerate(kb.tbox):
        loc = f"tbox[{i}]"
        _check_weight(w, loc, out)
        for c in (t.lhs, t.rhs):
            for n in walk(c):
                if isinstance(n, Name):
                    use(n.name, "concept-name", loc)
                elif isinstance(n, Nominal):
                    use(n.individual, "individual-name", loc)
                elif isinstance(n, (Exists, Forall)):
                    use(n.role, "role-name", loc)
        if t in seen:
            out.append(Diagnostic(loc, f"duplicate inclusion (first at {seen[t]})"))
        else:
            seen[t] = loc
    for i, (a, w) in enumerate(kb.abox):
        loc = f"abox[{i}]"
        _check_weight(w, loc, out)
        if isinstance(a, ConceptAssertion):
            use(a.concept, "concept-name", loc)
        else:
            use(a.role, "role-name", loc)
        for ind in a.individuals:
            use(ind, "individual-name", loc)
        if a in seen:
            out.append(Diagnostic(loc, f"duplicate assertion (first at {seen[a]})"))
        else:
            seen[a] = loc
    return out


__all__ = [
    "And", "Assertion", "Atom", "Axiom", "Bot", "BotConcept", "Concept", "ConceptAssertion",
    "ConceptAtom", "Cost", "Diagnostic", "Exists", "Forall", "Fragment", "INF", "Inclusion",
    "InfiniteCost", "Infinity", "MAX_WEIGHT", "Name", "Nominal", "Not", "Or", "Query",
    "RoleAssertion", "RoleAtom", "Term", "Top", "TopConcept", "UnknownIndividual",
    "UnknownNominalIndividual", "Var", "WKBError", "Weight", "WeightedKB", "bcq", "conj",
    "cost_add", "cost_scale", "cost_sum", "format_cost", "fragment_of", "instance_query",
    "is_inf", "k_infty", "nominals_in", "subconcepts", "unweighted", "validate",
    "violation_concept", "walk",
]
