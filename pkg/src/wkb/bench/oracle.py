"""Definitional oracle: enumerate every small interpretation and read verdicts
straight off the cost and query-satisfaction definitions.

Interpretations over a fixed domain size are encoded as bit vectors (one bit
per concept membership and per role edge), so a whole batch is evaluated
with numpy at once. Two interpretations that differ only by a renaming of
anonymous elements are isomorphic; only the one with the smallest code is
kept. The oracle shares no code with the solver path beyond the syntax and
result types.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ..core import (
    INF,
    And,
    BotConcept,
    Concept,
    ConceptAssertion,
    ConceptAtom,
    Cost,
    Exists,
    Forall,
    Name,
    Nominal,
    Not,
    Or,
    Query,
    ResourceLimit,
    TopConcept,
    Var,
    WeightedKB,
    WKBError,
    subconcepts,
)
from ..interp import Interpretation
from ..reason import CertainBounded, CertainOpt, PossibleOpt, Semantics, Verdict

DEFAULT_BUDGET = 1 << 22
_CHUNK = 1 << 16


class BudgetExceeded(ResourceLimit):
    def __init__(self, count: int) -> None:
        super().__init__(f"refusing to enumerate {count} interpretations")
        self.count = count


@dataclass(frozen=True)
class Signature:
    concepts: tuple[str, ...] = ()
    roles: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "concepts", tuple(dict.fromkeys(self.concepts)))
        object.__setattr__(self, "roles", tuple(dict.fromkeys(self.roles)))

    @classmethod
    def of(cls, kb: WeightedKB, queries: Sequence[Query] = ()) -> Signature:
        concepts = list(kb.concept_names())
        roles = list(kb.role_names())
        for q in queries:
            for a in q.atoms:
                if isinstance(a, ConceptAtom):
                    concepts.append(a.concept)
                else:
                    roles.append(a.role)
        return cls(tuple(concepts), tuple(roles))


class _Layout:
    """Bit positions for one domain size."""

    def __init__(self, sig: Signature, n: int) -> None:
        self.n = n
        self.sig = sig
        self.cpos = {c: i * n for i, c in enumerate(sig.concepts)}
        base = len(sig.concepts) * n
        self.rpos = {r: base + i * n * n for i, r in enumerate(sig.roles)}
        self.bits = base + len(sig.roles) * n * n

    def permuted_positions(self, perm: Sequence[int]) -> np.ndarray:
        n = self.n
        out = np.empty(self.bits, dtype=np.int64)
        for c, p in self.cpos.items():
            for d in range(n):
                out[p + d] = p + perm[d]
        for r, p in self.rpos.items():
            for d in range(n):
                for e in range(n):
                    out[p + d * n + e] = p + perm[d] * n + perm[e]
        return out


def _sizes(named: Sequence[str], anon_limit: int) -> list[int]:
    lo = len(named) if named else 1
    return list(range(lo, len(named) + max(anon_limit, 0 if named else 1) + 1))


def raw_count(named: Sequence[str], sig: Signature, anon_limit: int) -> int:
    """Number of labelled interpretations before isomorphism reduction."""
    return sum(1 << _Layout(sig, n).bits for n in _sizes(named, anon_limit))


def _canonical_batches(named: Sequence[str], sig: Signature, anon_limit: int, budget: int):
    total = raw_count(named, sig, anon_limit)
    if total > budget:
        raise BudgetExceeded(total)
    for n in _sizes(named, anon_limit):
        lay = _Layout(sig, n)
        k = len(named)
        perms = [
            tuple(range(k)) + p
            for p in itertools.permutations(range(k, n))
            if p != tuple(range(k, n))
        ]
        weights = [np.left_shift(np.int64(1), lay.permuted_positions(p)) for p in perms]
        shifts = np.arange(lay.bits, dtype=np.int64)
        for start in range(0, 1 << lay.bits, _CHUNK):
            codes = np.arange(start, min(start + _CHUNK, 1 << lay.bits), dtype=np.int64)
            bits = ((codes[:, None] >> shifts) & 1).astype(bool)
            keep = np.ones(len(codes), dtype=bool)
            for w in weights:
                keep &= codes <= bits.astype(np.int64) @ w
            yield lay, codes[keep], bits[keep]


def _decode(lay: _Layout, named: Sequence[str], row: np.ndarray) -> Interpretation:
    n = lay.n
    concepts = {c: frozenset(d for d in range(n) if row[p + d]) for c, p in lay.cpos.items()}
    roles = {
        r: frozenset((d, e) for d in range(n) for e in range(n) if row[p + d * n + e])
        for r, p in lay.rpos.items()
    }
    return Interpretation(tuple(named), n - len(named), concepts, roles)


def enumerate_interpretations(
    named: Sequence[str],
    signature: Signature,
    anon_limit: int,
    *,
    budget: int = DEFAULT_BUDGET,
) -> Iterator[Interpretation]:
    """Every interpretation over ``named`` plus 0..``anon_limit`` anonymous
    elements, one per isomorphism class of the anonymous part."""
    for lay, _, bits in _canonical_batches(named, signature, anon_limit, budget):
        for row in bits:
            yield _decode(lay, named, row)


# ------------------------------------------------------------------ evaluation


class _Batch:
    def __init__(self, lay: _Layout, named: Sequence[str], bits: np.ndarray) -> None:
        self.lay = lay
        self.bits = bits
        self.index = {a: i for i, a in enumerate(named)}
        self._memo: dict[Concept, np.ndarray] = {}

    def concept(self, name: str) -> np.ndarray:
        n = self.lay.n
        p = self.lay.cpos.get(name)
        if p is None:
            return np.zeros((len(self.bits), n), dtype=bool)
        return self.bits[:, p : p + n]

    def role(self, name: str) -> np.ndarray:
        n = self.lay.n
        p = self.lay.rpos.get(name)
        if p is None:
            return np.zeros((len(self.bits), n, n), dtype=bool)
        return self.bits[:, p : p + n * n].reshape(-1, n, n)

    def ext(self, c: Concept) -> np.ndarray:
        hit = self._memo.get(c)
        if hit is None:
            hit = self._ext(c)
            self._memo[c] = hit
        return hit

    def _ext(self, c: Concept) -> np.ndarray:
        B, n = len(self.bits), self.lay.n
        if isinstance(c, Name):
            return self.concept(c.name)
        if isinstance(c, TopConcept):
            return np.ones((B, n), dtype=bool)
        if isinstance(c, BotConcept):
            return np.zeros((B, n), dtype=bool)
        if isinstance(c, Nominal):
            if c.individual not in self.index:
                raise WKBError(f"nominal individual {c.individual!r} is not named")
            out = np.zeros((B, n), dtype=bool)
            out[:, self.index[c.individual]] = True
            return out
        if isinstance(c, And):
            return self.ext(c.left) & self.ext(c.right)
        if isinstance(c, Or):
            return self.ext(c.left) | self.ext(c.right)
        if isinstance(c, Not):
            return ~self.ext(c.operand)
        if isinstance(c, Exists):
            return (self.role(c.role) & self.ext(c.filler)[:, None, :]).any(axis=2)
        if isinstance(c, Forall):
            return (~self.role(c.role) | self.ext(c.filler)[:, None, :]).all(axis=2)
        raise TypeError(f"not a concept: {c!r}")

    def costs(self, kb: WeightedKB, dtype) -> tuple[np.ndarray, np.ndarray]:
        B = len(self.bits)
        cost = np.zeros(B, dtype=dtype)
        inf = np.zeros(B, dtype=bool)
        for tau, w in kb.tbox:
            count = (self.ext(tau.lhs) & ~self.ext(tau.rhs)).sum(axis=1)
            if w is INF:
                inf |= count > 0
            else:
                cost += count.astype(dtype) * w
        for alpha, w in kb.abox:
            bad = ~self.holds(alpha)
            if w is INF:
                inf |= bad
            else:
                cost += bad.astype(dtype) * w
        return cost, inf

    def holds(self, alpha) -> np.ndarray:
        if isinstance(alpha, ConceptAssertion):
            return self.concept(alpha.concept)[:, self.index[alpha.individual]]
        i, j = self.index[alpha.subject], self.index[alpha.object]
        return self.role(alpha.role)[:, i, j]

    def query(self, q: Query, floating: Sequence[str], universal: bool) -> np.ndarray:
        """Satisfaction of ``q`` per interpretation.

        Individuals in ``floating`` are not fixed by the KB: they are read
        existentially (some denotation works) or, with ``universal``, every
        denotation has to work.
        """
        n = self.lay.n
        vars_ = q.variables()
        fl = list(floating)

        def atom(a, env) -> np.ndarray:
            def pos(t):
                return env[t.name] if isinstance(t, Var) else env.get(t, self.index.get(t))

            if isinstance(a, ConceptAtom):
                return self.concept(a.concept)[:, pos(a.term)]
            return self.role(a.role)[:, pos(a.first), pos(a.second)]

        def exists_match(fixed: dict) -> np.ndarray:
            out = np.zeros(len(self.bits), dtype=bool)
            free = vars_ + ([] if universal else fl)
            for combo in itertools.product(range(n), repeat=len(free)):
                env = dict(fixed)
                env.update(zip(free, combo))
                hit = np.ones(len(self.bits), dtype=bool)
                for a in q.atoms:
                    hit &= atom(a, env)
                out |= hit
            return out

        if not universal or not fl:
            return exists_match({})
        result = np.ones(len(self.bits), dtype=bool)
        for combo in itertools.product(range(n), repeat=len(fl)):
            result &= exists_match(dict(zip(fl, combo)))
        return result


# ---------------------------------------------------------------------- oracle


class Oracle:
    """All interpretations of one KB within an anonymous-element bound.

    Costs are computed once; queries are evaluated on demand. Query names
    outside the KB signature must be announced via ``queries``.
    """

    def __init__(
        self,
        kb: WeightedKB,
        anon_limit: int,
        queries: Sequence[Query] = (),
        *,
        budget: int = DEFAULT_BUDGET,
    ) -> None:
        self.kb = kb
        self.anon_limit = anon_limit
        self.named = list(kb.individuals())
        self.sig = Signature.of(kb, queries)
        finite = [w for _, w in kb.items() if w is not INF]
        n_max = len(self.named) + max(anon_limit, 1)
        worst = sum(finite) * max(n_max, 1)
        dtype = np.int64 if worst < (1 << 62) else object
        self.batches: list[_Batch] = []
        self.cost: list[np.ndarray] = []
        self.inf: list[np.ndarray] = []
        for lay, _, bits in _canonical_batches(self.named, self.sig, anon_limit, budget):
            if not len(bits):
                continue
            b = _Batch(lay, self.named, bits)
            c, i = b.costs(kb, dtype)
            self.batches.append(b)
            self.cost.append(c)
            self.inf.append(i)

    @property
    def count(self) -> int:
        return sum(len(b.bits) for b in self.batches)

    def _within(self, idx: int, k: Cost) -> np.ndarray:
        if k is INF:
            return np.ones(len(self.cost[idx]), dtype=bool)
        return ~self.inf[idx] & (self.cost[idx] <= k)

    def opt(self) -> Cost:
        best: Cost = INF
        for c, i in zip(self.cost, self.inf):
            finite = c[~i]
            if len(finite):
                m = int(finite.min())
                best = m if best is INF else min(best, m)
        return best

    def bcs(self, k: Cost) -> bool:
        return any(self._within(i, k).any() for i in range(len(self.batches)))

    def interpretation(self, idx: int, row: int) -> Interpretation:
        b = self.batches[idx]
        return _decode(b.lay, self.named, b.bits[row])

    def cost_of_row(self, idx: int, row: int) -> Cost:
        return INF if self.inf[idx][row] else int(self.cost[idx][row])

    def entails(self, q: Query, sem: Semantics) -> tuple[bool, Interpretation | None, Cost | None]:
        """``(answer, witness, opt)``; the witness certifies possible-yes or certain-no."""
        if not q.is_boolean:
            raise WKBError("the oracle decides Boolean queries")
        opt: Cost | None = None
        if isinstance(sem, (CertainOpt, PossibleOpt)):
            opt = self.opt()
            k = opt
            certain = isinstance(sem, CertainOpt)
        else:
            k = sem.k
            certain = isinstance(sem, CertainBounded)
        known = set(self.named)
        floating = [a for a in q.individuals() if a not in known]
        for idx, b in enumerate(self.batches):
            within = self._within(idx, k)
            if opt is not None and opt is not INF:
                within &= self.cost[idx] == opt
            if not within.any():
                continue
            sat = b.query(q, floating, universal=certain)
            hits = within & (~sat if certain else sat)
            if hits.any():
                row = int(np.flatnonzero(hits)[0])
                return (not certain), self.interpretation(idx, row), opt
        return certain, None, opt


def _complete(kb: WeightedKB, anon_limit: int, certain: bool) -> bool:
    if certain:
        return False
    s = len(subconcepts(kb))
    return s < 63 and anon_limit >= (1 << s)


def oracle_bcs(kb: WeightedKB, k: Cost, anon_limit: int, *, budget: int = DEFAULT_BUDGET) -> Verdict:
    o = Oracle(kb, anon_limit, budget=budget)
    return Verdict(o.bcs(k), _complete(kb, anon_limit, False), stats={"interpretations": o.count})


def oracle_opt(kb: WeightedKB, anon_limit: int, *, budget: int = DEFAULT_BUDGET) -> tuple[Cost, bool]:
    o = Oracle(kb, anon_limit, budget=budget)
    return o.opt(), _complete(kb, anon_limit, False)


def oracle_entails(
    kb: WeightedKB,
    q: Query,
    sem: Semantics,
    anon_limit: int,
    *,
    budget: int = DEFAULT_BUDGET,
) -> Verdict:
    o = Oracle(kb, anon_limit, [q], budget=budget)
    answer, witness, opt = o.entails(q, sem)
    certain = isinstance(sem, (CertainBounded, CertainOpt))
    return Verdict(
        answer,
        _complete(kb, anon_limit, certain),
        witness,
        opt,
        status="opt-infinite" if opt is INF else "ok",
        stats={"interpretations": o.count},
    )
