"""Finite interpretations, concept evaluation, costs and query matching.

Element ids ``0..len(named)-1`` are the named individuals in order; the
anonymous elements follow. Extensions are evaluated as integer bitmasks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Mapping

from .core import (
    INF,
    And,
    Assertion,
    BotConcept,
    Concept,
    ConceptAssertion,
    ConceptAtom,
    Cost,
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
    Term,
    TopConcept,
    UnknownIndividual,
    UnknownNominalIndividual,
    Var,
    WeightedKB,
    WKBError,
    cost_scale,
    cost_sum,
    violation_concept,
)

Match = dict[Term, int]


@dataclass(frozen=True, eq=False)
class Interpretation:
    named: tuple[str, ...]
    anon_count: int = 0
    concepts: Mapping[str, frozenset[int]] = field(default_factory=dict)
    roles: Mapping[str, frozenset[tuple[int, int]]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        named = tuple(self.named)
        object.__setattr__(self, "named", named)
        if len(set(named)) != len(named):
            raise WKBError("named individuals must be pairwise distinct")
        if self.anon_count < 0:
            raise WKBError("anon_count must be non-negative")
        n = len(named) + self.anon_count
        if n == 0:
            raise WKBError("the domain must be non-empty")
        concepts = {k: frozenset(v) for k, v in self.concepts.items()}
        roles = {k: frozenset((int(a), int(b)) for a, b in v) for k, v in self.roles.items()}
        for k, ext in concepts.items():
            if any(not 0 <= d < n for d in ext):
                raise WKBError(f"extension of {k} mentions an element outside the domain")
        for k, ext in roles.items():
            if any(not (0 <= a < n and 0 <= b < n) for a, b in ext):
                raise WKBError(f"extension of {k} mentions an element outside the domain")
        object.__setattr__(self, "concepts", concepts)
        object.__setattr__(self, "roles", roles)

    @property
    def size(self) -> int:
        return len(self.named) + self.anon_count

    @cached_property
    def _index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.named)}

    @cached_property
    def _full(self) -> int:
        return (1 << self.size) - 1

    @cached_property
    def _cmask(self) -> dict[str, int]:
        return {k: _mask(v) for k, v in self.concepts.items()}

    @cached_property
    def _succ(self) -> dict[str, list[int]]:
        out: dict[str, list[int]] = {}
        for r, pairs in self.roles.items():
            succ = [0] * self.size
            for a, b in pairs:
                succ[a] |= 1 << b
            out[r] = succ
        return out

    def element(self, individual: str) -> int:
        try:
            return self._index[individual]
        except KeyError:
            raise UnknownIndividual(individual) from None

    def label(self, d: int) -> str:
        return self.named[d] if d < len(self.named) else f"_:{d - len(self.named)}"

    def key(self) -> tuple:
        """A hashable canonical form (not invariant under renaming anonymous elements)."""
        return (
            self.named,
            self.anon_count,
            tuple(sorted((k, tuple(sorted(v))) for k, v in self.concepts.items() if v)),
            tuple(sorted((k, tuple(sorted(v))) for k, v in self.roles.items() if v)),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Interpretation):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    # evaluation ---------------------------------------------------------

    def mask_of(self, c: Concept) -> int:
        if isinstance(c, Name):
            return self._cmask.get(c.name, 0)
        if isinstance(c, TopConcept):
            return self._full
        if isinstance(c, BotConcept):
            return 0
        if isinstance(c, Nominal):
            idx = self._index.get(c.individual)
            if idx is None:
                raise UnknownNominalIndividual(c.individual)
            return 1 << idx
        if isinstance(c, And):
            return self.mask_of(c.left) & self.mask_of(c.right)
        if isinstance(c, Or):
            return self.mask_of(c.left) | self.mask_of(c.right)
        if isinstance(c, Not):
            return self._full & ~self.mask_of(c.operand)
        if isinstance(c, Exists):
            return self._exists(c.role, self.mask_of(c.filler))
        if isinstance(c, Forall):
            return self._full & ~self._exists(c.role, self._full & ~self.mask_of(c.filler))
        raise TypeError(f"not a concept: {c!r}")

    def _exists(self, role: str, target: int) -> int:
        succ = self._succ.get(role)
        if succ is None or not target:
            return 0
        out = 0
        for d, s in enumerate(succ):
            if s & target:
                out |= 1 << d
        return out

    def to_json(self) -> dict[str, Any]:
        return {
            "domain": self.size,
            "named": list(self.named),
            "concepts": {k: sorted(v) for k, v in sorted(self.concepts.items())},
            "roles": {k: [list(p) for p in sorted(v)] for k, v in sorted(self.roles.items())},
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> Interpretation:
        named = tuple(data["named"])
        return cls(
            named=named,
            anon_count=int(data["domain"]) - len(named),
            concepts={k: frozenset(v) for k, v in data.get("concepts", {}).items()},
            roles={k: frozenset(tuple(p) for p in v) for k, v in data.get("roles", {}).items()},
        )


def _mask(ids: Iterable[int]) -> int:
    m = 0
    for d in ids:
        m |= 1 << d
    return m


def _ids(mask: int) -> frozenset[int]:
    out = []
    d = 0
    while mask:
        if mask & 1:
            out.append(d)
        mask >>= 1
        d += 1
    return frozenset(out)


def concept_extension(I: Interpretation, c: Concept) -> frozenset[int]:
    return _ids(I.mask_of(c))


def satisfies_assertion(I: Interpretation, alpha: Assertion) -> bool:
    if isinstance(alpha, ConceptAssertion):
        d = I.element(alpha.individual)
        return d in I.concepts.get(alpha.concept, ())
    a, b = I.element(alpha.subject), I.element(alpha.object)
    return (a, b) in I.roles.get(alpha.role, ())


def violations_of_inclusion(I: Interpretation, tau: Inclusion) -> frozenset[int]:
    return concept_extension(I, violation_concept(tau))


def satisfies_inclusion(I: Interpretation, tau: Inclusion) -> bool:
    return I.mask_of(violation_concept(tau)) == 0


def violations_of_abox(I: Interpretation, abox: Iterable[Assertion]) -> list[Assertion]:
    return [a for a in abox if not satisfies_assertion(I, a)]


def _embed_check(I: Interpretation, kb: WeightedKB) -> None:
    for ind in kb.individuals():
        I.element(ind)


def cost_of(I: Interpretation, kb: WeightedKB) -> Cost:
    _embed_check(I, kb)
    parts: list[Cost] = []
    for tau, w in kb.tbox:
        parts.append(cost_scale(w, I.mask_of(violation_concept(tau)).bit_count()))
    for alpha, w in kb.abox:
        if not satisfies_assertion(I, alpha):
            parts.append(w)
    return cost_sum(parts)


def is_model(I: Interpretation, kb: WeightedKB) -> bool:
    """Classical modelhood: every axiom and assertion holds, whatever its weight."""
    _embed_check(I, kb)
    return all(satisfies_inclusion(I, t) for t in kb.inclusions) and all(
        satisfies_assertion(I, a) for a in kb.assertions
    )


def has_finite_cost(I: Interpretation, kb: WeightedKB) -> bool:
    return cost_of(I, kb) is not INF


# ---------------------------------------------------------------- queries


def _resolve(I: Interpretation, t: Term, binding: Mapping[Term, int]) -> int | None:
    if isinstance(t, Var):
        return binding.get(t)
    return I.element(t)


def find_match(I: Interpretation, q: Query, binding: Mapping[Term, int] | None = None) -> Match | None:
    """A homomorphism from ``q`` into ``I`` extending ``binding``, or ``None``.

    Atoms are processed most-constrained first and candidate elements are
    tried in increasing id order, so the first match found is deterministic.
    """
    env: dict[Term, int] = dict(binding or {})
    for t in q.terms():
        if isinstance(t, str):
            env[t] = I.element(t)
    for key, val in list(env.items()):
        if not 0 <= val < I.size:
            raise WKBError(f"binding for {key} is outside the domain")
    atoms = list(q.atoms)
    if _solve(I, atoms, env):
        return env
    return None


def _unbound(atom: ConceptAtom | RoleAtom, env: Mapping[Term, int]) -> int:
    return sum(1 for t in atom.terms if isinstance(t, Var) and t not in env)


def _solve(I: Interpretation, atoms: list, env: dict[Term, int]) -> bool:
    if not atoms:
        return True
    best = min(range(len(atoms)), key=lambda i: (_unbound(atoms[i], env), i))
    atom = atoms[best]
    rest = atoms[:best] + atoms[best + 1 :]
    if isinstance(atom, ConceptAtom):
        ext = I.concepts.get(atom.concept, frozenset())
        d = _resolve(I, atom.term, env)
        if d is not None:
            return d in ext and _solve(I, rest, env)
        for e in sorted(ext):
            env[atom.term] = e
            if _solve(I, rest, env):
                return True
        env.pop(atom.term, None)
        return False
    pairs = I.roles.get(atom.role, frozenset())
    a = _resolve(I, atom.first, env)
    b = _resolve(I, atom.second, env)
    if a is not None and b is not None:
        return (a, b) in pairs and _solve(I, rest, env)
    candidates = sorted(p for p in pairs if (a is None or p[0] == a) and (b is None or p[1] == b))
    same = atom.first == atom.second
    for x, y in candidates:
        if same and x != y:
            continue
        added = []
        if a is None:
            env[atom.first] = x
            added.append(atom.first)
        if b is None and not same:
            env[atom.second] = y
            added.append(atom.second)
        if _solve(I, rest, env):
            return True
        for t in added:
            del env[t]
    return False


def satisfies_bcq(I: Interpretation, q: Query) -> bool:
    return find_match(I, q) is not None


def ground_atom(atom: ConceptAtom | RoleAtom) -> Assertion:
    """Turn a variable-free query atom into an assertion."""
    if any(isinstance(t, Var) for t in atom.terms):
        raise WKBError("atom still contains variables")
    if isinstance(atom, ConceptAtom):
        return ConceptAssertion(atom.concept, atom.term)  # type: ignore[arg-type]
    return RoleAssertion(atom.role, atom.first, atom.second)  # type: ignore[arg-type]


def restrict_named(I: Interpretation, names: Iterable[str]) -> Interpretation:
    """Rename ``I`` so that ``names`` come first, in the given order.

    Named elements of ``I`` not listed keep their positions after the given
    ones but become anonymous.
    """
    names = tuple(names)
    order = [I.element(n) for n in names]
    rest = [d for d in range(I.size) if d not in set(order)]
    perm = {old: new for new, old in enumerate(order + rest)}
    return Interpretation(
        named=names,
        anon_count=I.size - len(names),
        concepts={k: frozenset(perm[d] for d in v) for k, v in I.concepts.items()},
        roles={k: frozenset((perm[a], perm[b]) for a, b in v) for k, v in I.roles.items()},
    )
