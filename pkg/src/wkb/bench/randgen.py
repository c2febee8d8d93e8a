"""Random instances for the property and oracle-agreement suites.

Everything takes an explicit ``random.Random`` so suites are reproducible
from a seed. KBs are skewed towards conflicts (disjointness axioms and
clashing assertions on the same individual) because conflict-free KBs have
optimal cost 0 and exercise little.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..core import (
    INF,
    And,
    Bot,
    Concept,
    ConceptAssertion,
    ConceptAtom,
    Exists,
    Forall,
    Inclusion,
    Name,
    Nominal,
    Not,
    Or,
    Query,
    RoleAssertion,
    RoleAtom,
    Top,
    Var,
    WeightedKB,
)
from ..interp import Interpretation
from .oracle import Signature, raw_count
from .solvers import FALSE, TRUE, Graph, TwoTwoFormula, lexmax_assignment

CONCEPTS = ("A", "B", "C")
ROLES = ("R", "S")
INDIVIDUALS = ("a", "b", "c")


@dataclass(frozen=True)
class TinyInstance:
    kb: WeightedKB
    anon_limit: int


def random_weight(rng: random.Random, weights=(1, 2, INF)):
    return rng.choice(weights)


def random_concept(
    rng: random.Random,
    concepts: tuple[str, ...],
    roles: tuple[str, ...],
    individuals: tuple[str, ...] = (),
    depth: int = 2,
    el_only: bool = False,
) -> Concept:
    if depth <= 0 or rng.random() < 0.35:
        r = rng.random()
        if individuals and not el_only and r < 0.15:
            return Nominal(rng.choice(individuals))
        if r < 0.22:
            return Top if rng.random() < 0.5 else Bot
        return Name(rng.choice(concepts))
    kinds = ["and", "exists"] if el_only else ["and", "or", "not", "exists", "forall"]
    if not roles:
        kinds = [k for k in kinds if k not in ("exists", "forall")]
    kind = rng.choice(kinds)

    def sub() -> Concept:
        return random_concept(rng, concepts, roles, individuals, depth - 1, el_only)

    if kind == "and":
        return And(sub(), sub())
    if kind == "or":
        return Or(sub(), sub())
    if kind == "not":
        return Not(sub())
    if kind == "exists":
        return Exists(rng.choice(roles), sub())
    return Forall(rng.choice(roles), sub())


def _shape(rng: random.Random, max_bits: int) -> tuple[int, int, int, int]:
    """Pick (individuals, concepts, roles, anon) whose enumeration fits ``max_bits``."""
    while True:
        ni = rng.randint(1, 3)
        nc = rng.randint(1, 3)
        nr = rng.randint(0, 2)
        anon = rng.randint(0, 2)
        n = ni + anon
        if nc * n + nr * n * n <= max_bits:
            return ni, nc, nr, anon


def random_tiny_kb(
    rng: random.Random,
    *,
    max_bits: int = 18,
    max_axioms: int = 4,
    el_only: bool = False,
    weights=(1, 2, INF),
) -> TinyInstance:
    """A KB small enough for the definitional oracle at the returned bound.

    The signature (including nominal individuals) is fixed before the axioms
    are drawn so the enumeration stays within ``2**max_bits`` per domain size.
    """
    while True:
        ni, nc, nr, anon = _shape(rng, max_bits)
        inds = INDIVIDUALS[:ni]
        cs, rs = CONCEPTS[:nc], ROLES[:nr]
        tbox: dict = {}
        abox: dict = {}
        n_ax = rng.randint(1, max_axioms)
        for _ in range(n_ax):
            roll = rng.random()
            if roll < 0.3 and len(cs) >= 2:
                x, y = rng.sample(cs, 2)
                tbox[Inclusion(And(Name(x), Name(y)), Bot)] = random_weight(rng, weights)
            elif roll < 0.55:
                lhs = random_concept(rng, cs, rs, inds, 2, el_only)
                rhs = random_concept(rng, cs, rs, inds, 2, el_only)
                tbox[Inclusion(lhs, rhs)] = random_weight(rng, weights)
            elif roll < 0.85 or not rs:
                abox[ConceptAssertion(rng.choice(cs), rng.choice(inds))] = random_weight(rng, weights)
            else:
                abox[RoleAssertion(rng.choice(rs), rng.choice(inds), rng.choice(inds))] = random_weight(
                    rng, weights
                )
        # a clash on one individual, so that opt > 0 is common
        if len(cs) >= 2 and rng.random() < 0.5:
            x, y = rng.sample(cs, 2)
            a = rng.choice(inds)
            tbox.setdefault(Inclusion(And(Name(x), Name(y)), Bot), random_weight(rng, weights))
            abox.setdefault(ConceptAssertion(x, a), random_weight(rng, weights))
            abox.setdefault(ConceptAssertion(y, a), random_weight(rng, weights))
        kb = WeightedKB(tuple(tbox.items()), tuple(abox.items()))
        sig = Signature.of(kb)
        if raw_count(kb.individuals(), sig, anon) <= (1 << max_bits) * (anon + 1) and kb.individuals():
            return TinyInstance(kb, anon)


def _term(rng: random.Random, inds: list[str], vars_: list[str], p_var: float):
    if vars_ and (not inds or rng.random() < p_var):
        return Var(rng.choice(vars_))
    return rng.choice(inds)


def random_iq(rng: random.Random, kb: WeightedKB) -> Query:
    """A single ground atom over the KB signature."""
    inds = kb.individuals()
    cs = kb.concept_names() or ["A"]
    rs = kb.role_names()
    if rs and rng.random() < 0.3:
        return Query((RoleAtom(rng.choice(rs), rng.choice(inds), rng.choice(inds)),))
    return Query((ConceptAtom(rng.choice(cs), rng.choice(inds)),))


def random_bcq(rng: random.Random, kb: WeightedKB, max_atoms: int = 3, max_vars: int = 2) -> Query:
    inds = kb.individuals()
    cs = kb.concept_names() or ["A"]
    rs = kb.role_names()
    vars_ = [f"y{i}" for i in range(rng.randint(1, max_vars))]
    atoms = []
    for _ in range(rng.randint(1, max_atoms)):
        if rs and rng.random() < 0.5:
            atoms.append(RoleAtom(rng.choice(rs), _term(rng, inds, vars_, 0.6), _term(rng, inds, vars_, 0.6)))
        else:
            atoms.append(ConceptAtom(rng.choice(cs), _term(rng, inds, vars_, 0.6)))
    return Query(tuple(atoms))


def random_interpretation(
    rng: random.Random,
    named: tuple[str, ...],
    concepts: tuple[str, ...],
    roles: tuple[str, ...],
    anon: int,
    density: float = 0.4,
) -> Interpretation:
    n = len(named) + anon
    ce = {c: frozenset(d for d in range(n) if rng.random() < density) for c in concepts}
    re_ = {
        r: frozenset((d, e) for d in range(n) for e in range(n) if rng.random() < density / 2)
        for r in roles
    }
    return Interpretation(named, anon, ce, re_)


def random_graph(rng: random.Random, n: int, p: float = 0.4) -> Graph:
    edges = tuple((u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p)
    return Graph(n, edges)


def random_two_two(rng: random.Random, n: int, m: int, *, satisfiable: bool = True) -> TwoTwoFormula:
    """A random 2+2 formula; with ``satisfiable`` the draw is repeated until
    it has a model. Clauses lean on constants so that the lexicographically
    maximum assignment is rarely all ones."""

    def slot():
        r = rng.random()
        if r < 0.2:
            return TRUE if rng.random() < 0.3 else FALSE
        return rng.randint(1, n)

    while True:
        clauses = []
        for _ in range(m):
            if rng.random() < 0.4:
                # forces one of two variables to 0 (or one variable, via duplication)
                clauses.append((FALSE, FALSE, rng.randint(1, n), rng.randint(1, n)))
            else:
                clauses.append((slot(), slot(), slot(), slot()))
        phi = TwoTwoFormula(n, tuple(clauses))
        if not satisfiable or lexmax_assignment(phi) is not None:
            return phi


def random_repair_instance(rng: random.Random, *, max_bits: int = 16) -> TinyInstance:
    """All-infinite TBox, all-finite ABox: the setting where optimal certain
    answers coincide with preferred-repair answers. TBox satisfiability is
    the caller's to check (it depends on the domain bound)."""
    while True:
        inst = random_tiny_kb(rng, max_bits=max_bits, weights=(1, 2, 3))
        kb = inst.kb
        tbox = tuple((t, INF) for t, _ in kb.tbox)
        abox = tuple((a, w) for a, w in kb.abox)
        if abox:
            return TinyInstance(WeightedKB(tbox, abox), inst.anon_limit)
