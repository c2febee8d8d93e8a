"""Weight-maximal ABox repairs and the AR / brave semantics over them.

A repair is a subset of the ABox that is consistent with the (hard) TBox
and has maximum total weight among consistent subsets. Consistency and
classical entailment are decided by brute-force enumeration within an
anonymous-element bound, so these answers are independent of the search
machinery. Every KB individual stays a named element for every subset,
matching the domain the weighted semantics uses.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from ..core import INF, Assertion, Query, WeightedKB, WKBError
from .oracle import DEFAULT_BUDGET, Oracle


class HypothesisViolation(WKBError):
    pass


class RepairOracle:
    def __init__(
        self,
        kb: WeightedKB,
        anon_limit: int,
        queries: Sequence[Query] = (),
        *,
        budget: int = DEFAULT_BUDGET,
    ) -> None:
        if any(w is not INF for _, w in kb.tbox):
            raise HypothesisViolation("every TBox axiom must have infinite weight")
        if any(w is INF for _, w in kb.abox):
            raise HypothesisViolation("every ABox assertion must have finite weight")
        self.kb = kb
        self.abox: list[Assertion] = list(kb.assertions)
        self.weights = [w for _, w in kb.abox]
        self.oracle = Oracle(kb, anon_limit, queries, budget=budget)
        self.tbox_ok: list[np.ndarray] = []
        self.holds: list[list[np.ndarray]] = []
        for b in self.oracle.batches:
            ok = np.ones(len(b.bits), dtype=bool)
            for tau in kb.inclusions:
                ok &= ~(b.ext(tau.lhs) & ~b.ext(tau.rhs)).any(axis=1)
            self.tbox_ok.append(ok)
            self.holds.append([b.holds(a) for a in self.abox])
        if not self.consistent(()):
            raise HypothesisViolation("the TBox has no model within the bound")
        self._repairs: list[frozenset[int]] | None = None

    def _models(self, keep: Sequence[int]):
        for idx, ok in enumerate(self.tbox_ok):
            m = ok.copy()
            for j in keep:
                m &= self.holds[idx][j]
            yield idx, m

    def consistent(self, keep: Sequence[int]) -> bool:
        return any(m.any() for _, m in self._models(keep))

    def classically_entails(self, keep: Sequence[int], q: Query) -> bool:
        """``<T, {abox[j] | j in keep}> |= q``, individuals not in the KB read universally."""
        known = set(self.oracle.named)
        floating = [a for a in q.individuals() if a not in known]
        for idx, m in self._models(keep):
            if not m.any():
                continue
            sat = self.oracle.batches[idx].query(q, floating, universal=True)
            if (m & ~sat).any():
                return False
        return True

    def repairs(self) -> list[frozenset[int]]:
        """Index sets of the repairs, in order of first discovery by subset size."""
        if self._repairs is None:
            best = -1
            found: list[frozenset[int]] = []
            n = len(self.abox)
            for keep in itertools.chain.from_iterable(
                itertools.combinations(range(n), r) for r in range(n, -1, -1)
            ):
                w = sum(self.weights[j] for j in keep)
                if w < best or not self.consistent(keep):
                    continue
                if w > best:
                    best, found = w, []
                found.append(frozenset(keep))
            self._repairs = found
        return self._repairs

    def ar_entails(self, q: Query) -> bool:
        return all(self.classically_entails(sorted(r), q) for r in self.repairs())

    def brave_entails(self, q: Query) -> bool:
        return any(self.classically_entails(sorted(r), q) for r in self.repairs())


def enumerate_w_repairs(kb: WeightedKB, anon_limit: int = 1, **kw) -> list[frozenset[Assertion]]:
    ro = RepairOracle(kb, anon_limit, **kw)
    return [frozenset(ro.abox[j] for j in r) for r in ro.repairs()]


def ar_entails(kb: WeightedKB, q: Query, anon_limit: int = 1, **kw) -> bool:
    return RepairOracle(kb, anon_limit, [q], **kw).ar_entails(q)


def brave_entails(kb: WeightedKB, q: Query, anon_limit: int = 1, **kw) -> bool:
    return RepairOracle(kb, anon_limit, [q], **kw).brave_entails(q)
