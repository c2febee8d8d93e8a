"""Grounding of a weighted KB over a bounded domain into clauses plus weighted
at-most constraints.

Elements are the named individuals followed by ``anon`` anonymous slots. A
slot is *active* when its activity variable is true; slots are used in
order, so a model with ``j`` active slots is an interpretation with ``j``
anonymous elements. Concept literals are built with Tseitin gates (full
equivalence, constant folding, structural hashing).

In *relaxed* mode there are no anonymous slots; instead every existential
restriction at a named element gets an extra free variable standing for
"some anonymous successor satisfies the filler". Any interpretation of any
size projects onto a relaxed assignment with no larger cost, so an
unsatisfiable relaxation refutes every domain size at once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import (
    INF,
    And,
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
    TopConcept,
    Var,
    WeightedKB,
    WKBError,
)
from .interp import Interpretation
from .kernel import SolveResult, solve

TRUE = 1
FALSE = -1


def _may_hold_anon(c: Concept) -> bool:
    """Over-approximates whether ``c`` can contain an anonymous element."""
    if isinstance(c, Nominal) or isinstance(c, BotConcept):
        return False
    if isinstance(c, And):
        return _may_hold_anon(c.left) and _may_hold_anon(c.right)
    if isinstance(c, Or):
        return _may_hold_anon(c.left) or _may_hold_anon(c.right)
    if isinstance(c, Not):
        return _may_fail_anon(c.operand)
    return True


def _may_fail_anon(c: Concept) -> bool:
    """Over-approximates whether some anonymous element can lie outside ``c``."""
    if isinstance(c, TopConcept):
        return False
    if isinstance(c, And):
        return _may_fail_anon(c.left) or _may_fail_anon(c.right)
    if isinstance(c, Or):
        return _may_fail_anon(c.left) and _may_fail_anon(c.right)
    if isinstance(c, Not):
        return _may_hold_anon(c.operand)
    return True


class Grounding:
    def __init__(
        self,
        named: Sequence[str],
        anon: int,
        concept_names: Iterable[str],
        role_names: Iterable[str],
        *,
        relaxed: bool = False,
    ) -> None:
        if relaxed and anon:
            raise ValueError("relaxed groundings have no anonymous slots")
        self.named = tuple(named)
        if len(set(self.named)) != len(self.named):
            raise WKBError("duplicate named individuals")
        self.anon = anon
        self.relaxed = relaxed
        self.size = len(self.named) + anon
        if self.size == 0:
            raise WKBError("a grounding needs at least one element")
        self.index = {n: i for i, n in enumerate(self.named)}
        self.concept_names = list(dict.fromkeys(concept_names))
        self.role_names = list(dict.fromkeys(role_names))
        self.num_vars = 1
        self.clauses: list[list[int]] = [[TRUE]]
        self._and_cache: dict[tuple[int, ...], int] = {}
        self._lit_cache: dict[tuple[Concept, int], int] = {}
        self._cvars: dict[tuple[str, int], int] = {}
        self._rvars: dict[tuple[str, int, int], int] = {}
        self._free: dict[tuple[str, Concept, int], int] = {}
        self.active: list[int] = [TRUE] * len(self.named)
        for i in range(anon):
            u = self.new_var()
            self.active.append(u)
            if i > 0:
                self.clauses.append([-u, self.active[-2]])
        if not self.named and anon:
            self.clauses.append([self.active[len(self.named)]])
        for a in self.concept_names:
            self._declare_concept(a)
        for r in self.role_names:
            self._declare_role(r)

    # variables ---------------------------------------------------------

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def _declare_concept(self, a: str) -> None:
        for d in range(self.size):
            v = self.new_var()
            self._cvars[(a, d)] = v
            if self.active[d] != TRUE:
                self.clauses.append([-v, self.active[d]])

    def _declare_role(self, r: str) -> None:
        for d in range(self.size):
            for e in range(self.size):
                v = self.new_var()
                self._rvars[(r, d, e)] = v
                for x in (d, e):
                    if self.active[x] != TRUE:
                        self.clauses.append([-v, self.active[x]])

    def concept_var(self, a: str, d: int) -> int:
        key = (a, d)
        if key not in self._cvars:
            self.concept_names.append(a)
            self._declare_concept(a)
        return self._cvars[key]

    def role_var(self, r: str, d: int, e: int) -> int:
        key = (r, d, e)
        if key not in self._rvars:
            self.role_names.append(r)
            self._declare_role(r)
        return self._rvars[key]

    def element(self, individual: str) -> int:
        try:
            return self.index[individual]
        except KeyError:
            raise WKBError(f"individual {individual!r} is not a named element of the grounding") from None

    # gates ---------------------------------------------------------------

    def AND(self, lits: Iterable[int]) -> int:
        seen: dict[int, None] = {}
        for l in lits:
            if l == FALSE:
                return FALSE
            if l == TRUE:
                continue
            if -l in seen:
                return FALSE
            seen[l] = None
        if not seen:
            return TRUE
        if len(seen) == 1:
            return next(iter(seen))
        key = tuple(sorted(seen))
        g = self._and_cache.get(key)
        if g is None:
            g = self.new_var()
            self._and_cache[key] = g
            for l in key:
                self.clauses.append([-g, l])
            self.clauses.append([g] + [-l for l in key])
        return g

    def OR(self, lits: Iterable[int]) -> int:
        return -self.AND(-l for l in lits)

    # concepts ------------------------------------------------------------

    def lit(self, c: Concept, d: int) -> int:
        key = (c, d)
        hit = self._lit_cache.get(key)
        if hit is not None:
            return hit
        out = self._lit(c, d)
        self._lit_cache[key] = out
        return out

    def _lit(self, c: Concept, d: int) -> int:
        if isinstance(c, Name):
            return self.concept_var(c.name, d)
        if isinstance(c, TopConcept):
            return TRUE
        if isinstance(c, BotConcept):
            return FALSE
        if isinstance(c, Nominal):
            return TRUE if self.element(c.individual) == d else FALSE
        if isinstance(c, And):
            return self.AND((self.lit(c.left, d), self.lit(c.right, d)))
        if isinstance(c, Or):
            return self.OR((self.lit(c.left, d), self.lit(c.right, d)))
        if isinstance(c, Not):
            return -self.lit(c.operand, d)
        if isinstance(c, Exists):
            return self._exists(c.role, c.filler, d)
        if isinstance(c, Forall):
            return -self._exists(c.role, Not(c.filler), d)
        raise TypeError(f"not a concept: {c!r}")

    def _exists(self, role: str, filler: Concept, d: int) -> int:
        parts = [self.AND((self.role_var(role, d, e), self.lit(filler, e))) for e in range(self.size)]
        if self.relaxed and _may_hold_anon(filler):
            key = (role, filler, d)
            if key not in self._free:
                self._free[key] = self.new_var()
            parts.append(self._free[key])
        return self.OR(parts)

    def violation(self, tau: Inclusion, d: int) -> int:
        """True iff element ``d`` is active and violates ``tau``."""
        return self.AND((self.lit(tau.lhs, d), -self.lit(tau.rhs, d), self.active[d]))

    def assertion_lit(self, alpha) -> int:
        if isinstance(alpha, ConceptAssertion):
            return self.concept_var(alpha.concept, self.element(alpha.individual))
        return self.role_var(alpha.role, self.element(alpha.subject), self.element(alpha.object))

    # queries ---------------------------------------------------------------

    def _mappings(self, q: Query) -> Iterable[dict]:
        vars_ = q.variables()
        for combo in itertools.product(range(self.size), repeat=len(vars_)):
            yield {Var(v): e for v, e in zip(vars_, combo)}

    def _atom_lit(self, atom, env: dict) -> int:
        def pos(t) -> int:
            return env[t] if isinstance(t, Var) else self.element(t)

        if isinstance(atom, ConceptAtom):
            return self.concept_var(atom.concept, pos(atom.term))
        return self.role_var(atom.role, pos(atom.first), pos(atom.second))

    def match_lit(self, q: Query) -> int:
        """A literal that is true iff ``q`` has a match into the active domain."""
        alts = [self.AND(self._atom_lit(a, env) for a in q.atoms) for env in self._mappings(q)]
        if self.relaxed and q.variables():
            alts.append(self.new_var())
        return self.OR(alts)

    def avoid_clauses(self, q: Query) -> list[list[int]]:
        """One clause per mapping forbidding that mapping from being a match."""
        out: list[list[int]] = []
        for env in self._mappings(q):
            lits = [self._atom_lit(a, env) for a in q.atoms]
            if FALSE in lits:
                continue
            out.append([-l for l in lits if l != TRUE])
        return out

    # decoding ----------------------------------------------------------------

    def decode(self, model: Sequence[bool]) -> Interpretation:
        def val(l: int) -> bool:
            return model[l] if l > 0 else not model[-l]

        n = len(self.named) + sum(1 for u in self.active[len(self.named) :] if val(u))
        concepts: dict[str, set[int]] = {}
        for (a, d), v in self._cvars.items():
            if d < n and model[v]:
                concepts.setdefault(a, set()).add(d)
        roles: dict[str, set[tuple[int, int]]] = {}
        for (r, d, e), v in self._rvars.items():
            if d < n and e < n and model[v]:
                roles.setdefault(r, set()).add((d, e))
        return Interpretation(
            named=self.named,
            anon_count=n - len(self.named),
            concepts={k: frozenset(v) for k, v in concepts.items()},
            roles={k: frozenset(v) for k, v in roles.items()},
        )


@dataclass
class Encoded:
    """A grounded problem: hard clauses plus soft literals with weights."""

    grounding: Grounding
    hard: list[list[int]]
    soft: dict[int, int]
    caps: list[tuple[list[int], int]]
    infeasible: bool = False

    def solve(self, k: Cost, extra: Sequence[Sequence[int]] = (), **kw) -> SolveResult:
        """Solve with cost bound ``k`` plus the clauses in ``extra``."""
        if self.infeasible:
            return SolveResult("UNSAT", None, {"nodes": 0})
        pbs: list = []
        if k is not INF:
            pbs.append((list(self.soft.items()), k))
        pbs.extend((list((l, 1) for l in lits), cap) for lits, cap in self.caps)
        return solve(
            self.grounding.num_vars,
            self.hard + list(extra),
            pbs,
            trusted=self.grounding.clauses,
            **kw,
        )


def encode(
    kb: WeightedKB,
    grounding: Grounding,
    *,
    k_is_infinite: bool = False,
    caps: dict[Inclusion, int] | None = None,
    relaxed_assertions: Iterable = (),
) -> Encoded:
    """Constraints saying "cost <= k" (soft part, bound given at solve time)
    or, with ``caps``, "|violations of tau| <= caps[tau]" for finite ``tau``.

    ``relaxed_assertions`` are finite assertions dropped from the hard part
    in configuration mode (those whose allowance is 1).
    """
    g = grounding
    hard: list[list[int]] = []
    soft: dict[int, int] = {}
    cap_list: list[tuple[list[int], int]] = []
    infeasible = False
    dropped = set(relaxed_assertions)

    def add_soft(lit: int, w: int) -> None:
        if lit == FALSE:
            return
        soft[lit] = soft.get(lit, 0) + w

    def add_hard_not(lit: int) -> None:
        nonlocal infeasible
        if lit == TRUE:
            infeasible = True
        elif lit != FALSE:
            hard.append([-lit])

    if not k_is_infinite:
        for tau, w in kb.tbox:
            viols = [g.violation(tau, d) for d in range(g.size)]
            if w is INF:
                for v in viols:
                    add_hard_not(v)
            elif caps is not None:
                live = [v for v in viols if v != FALSE]
                fixed = sum(1 for v in live if v == TRUE)
                rest = [v for v in live if v != TRUE]
                cap = caps.get(tau, 0) - fixed
                if cap < 0:
                    infeasible = True
                elif rest:
                    cap_list.append((rest, cap))
            else:
                for v in viols:
                    add_soft(v, w)
        for alpha, w in kb.abox:
            lit = g.assertion_lit(alpha)
            if w is INF or (caps is not None and alpha not in dropped):
                hard.append([lit])
            elif caps is None:
                add_soft(-lit, w)
    return Encoded(g, hard, soft, cap_list, infeasible)
