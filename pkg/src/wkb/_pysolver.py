"""Pure-Python CDCL kernel with weighted at-most constraints.

Input literals use DIMACS signs (``v`` / ``-v`` for ``v >= 1``). Internally a
literal is ``2*v + neg``. A weighted constraint ``sum(w_i * [l_i]) <= bound``
is propagated eagerly when ``prune`` is on and only checked on complete
assignments otherwise. The compiled kernel in ``_ckernel.pyx`` mirrors this
file decision for decision; keep the two in step.
"""

from __future__ import annotations

import heapq
from typing import Callable, Sequence

SAT = "SAT"
UNSAT = "UNSAT"
BUDGET = "BUDGET"

_DECISION = -1
_RESTART_BASE = 100
_DECAY = 1.0 / 0.95


def luby(i: int) -> int:
    """The i-th element (from 0) of the Luby sequence 1 1 2 1 1 2 4 ..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


def _code(lit: int) -> int:
    return 2 * lit if lit > 0 else 2 * (-lit) + 1


def solve(
    num_vars: int,
    clauses: Sequence[Sequence[int]],
    pbs: Sequence[tuple[Sequence[tuple[int, int]], int]],
    max_nodes: int = 0,
    prune: bool = True,
    trace: Callable[[str], None] | None = None,
) -> tuple[str, list[bool] | None, dict[str, int]]:
    s = _Solver(num_vars, prune, trace)
    return s.run(clauses, pbs, max_nodes)


class _Solver:
    def __init__(self, num_vars: int, prune: bool, trace: Callable[[str], None] | None) -> None:
        n = num_vars + 1
        self.n = n
        self.prune = prune
        self.trace = trace
        self.assign = [-1] * n
        self.level = [0] * n
        self.reason = [_DECISION] * n
        self.tpos = [0] * n
        self.polarity = [1] * n
        self.activity = [0.0] * n
        self.seen = [0] * n
        self.var_inc = 1.0
        self.heap: list[tuple[float, int]] = [(-0.0, v) for v in range(1, n)]
        self.trail: list[int] = []
        self.lim: list[int] = []
        self.qhead = 0
        self.clauses: list[list[int]] = []
        self.watches: list[list[int]] = [[] for _ in range(2 * n)]
        self.pb_lits: list[list[int]] = []
        self.pb_w: list[list[int]] = []
        self.pb_bound: list[int] = []
        self.pb_sum: list[int] = []
        self.pb_occ: list[list[tuple[int, int]]] = [[] for _ in range(2 * n)]
        self.decisions = 0
        self.conflicts = 0
        self.propagations = 0

    # -- assignment ------------------------------------------------------

    def value(self, lit: int) -> int:
        a = self.assign[lit >> 1]
        return -1 if a < 0 else a ^ (lit & 1)

    def enqueue(self, lit: int, reason: int) -> None:
        v = lit >> 1
        self.assign[v] = 1 - (lit & 1)
        self.level[v] = len(self.lim)
        self.reason[v] = reason
        self.tpos[v] = len(self.trail)
        self.trail.append(lit)
        for j, w in self.pb_occ[lit]:
            self.pb_sum[j] += w

    def cancel_until(self, lvl: int) -> None:
        if len(self.lim) <= lvl:
            return
        stop = self.lim[lvl]
        trail = self.trail
        for i in range(len(trail) - 1, stop - 1, -1):
            lit = trail[i]
            v = lit >> 1
            for j, w in self.pb_occ[lit]:
                self.pb_sum[j] -= w
            self.polarity[v] = lit & 1
            self.assign[v] = -1
            heapq.heappush(self.heap, (-self.activity[v], v))
        del trail[stop:]
        del self.lim[lvl:]
        self.qhead = stop

    # -- loading ---------------------------------------------------------

    def add_clause(self, lits: list[int]) -> bool:
        if not lits:
            return False
        if len(lits) == 1:
            val = self.value(lits[0])
            if val == 0:
                return False
            if val < 0:
                self.enqueue(lits[0], _DECISION)
            return True
        idx = len(self.clauses)
        self.clauses.append(lits)
        self.watches[lits[0]].append(idx)
        self.watches[lits[1]].append(idx)
        return True

    def add_pb(self, terms: Sequence[tuple[int, int]], bound: int) -> bool:
        order = sorted(((w, _code(l)) for l, w in terms), key=lambda t: (-t[0], t[1]))
        j = len(self.pb_lits)
        self.pb_lits.append([c for _, c in order])
        self.pb_w.append([w for w, _ in order])
        self.pb_bound.append(bound)
        total = 0
        for w, c in order:
            self.pb_occ[c].append((j, w))
            if self.value(c) == 1:
                total += w
        self.pb_sum.append(total)
        if total > bound:
            return False
        return True

    # -- propagation -----------------------------------------------------

    def pb_explain(self, j: int, before: int, need: int) -> list[int]:
        """False literals (negated true members of constraint j set before trail
        position ``before``) whose weight exceeds ``need``."""
        out: list[int] = []
        acc = 0
        tpos = self.tpos
        for c, w in zip(self.pb_lits[j], self.pb_w[j]):
            if self.value(c) == 1 and tpos[c >> 1] < before:
                out.append(c ^ 1)
                acc += w
                if acc > need:
                    return out
        raise AssertionError("weighted constraint explanation incomplete")

    def reason_clause(self, v: int) -> list[int]:
        r = self.reason[v]
        if r >= 0:
            return self.clauses[r]
        j = -r - 2
        lit = 2 * v + (1 - self.assign[v])
        w = 0
        neg = lit ^ 1
        for c, wc in zip(self.pb_lits[j], self.pb_w[j]):
            if c == neg:
                w = wc
                break
        return [lit] + self.pb_explain(j, self.tpos[v], self.pb_bound[j] - w)

    def propagate(self) -> list[int] | None:
        trail = self.trail
        clauses = self.clauses
        watches = self.watches
        assign = self.assign
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = p ^ 1
            ws = watches[false_lit]
            i = j = 0
            n = len(ws)
            while i < n:
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], false_lit
                first = c[0]
                a = assign[first >> 1]
                if a >= 0 and (a ^ (first & 1)) == 1:
                    ws[j] = ci
                    j += 1
                    continue
                moved = False
                for k in range(2, len(c)):
                    lk = c[k]
                    ak = assign[lk >> 1]
                    if ak < 0 or (ak ^ (lk & 1)) == 1:
                        c[1], c[k] = lk, false_lit
                        watches[lk].append(ci)
                        moved = True
                        break
                if moved:
                    continue
                ws[j] = ci
                j += 1
                if a >= 0:
                    while i < n:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    self.qhead = len(trail)
                    return c
                self.enqueue(first, ci)
            del ws[j:]
            if self.prune:
                confl = self.propagate_pb(p)
                if confl is not None:
                    self.qhead = len(trail)
                    return confl
        return None

    def propagate_pb(self, p: int) -> list[int] | None:
        for j, _ in self.pb_occ[p]:
            bound = self.pb_bound[j]
            total = self.pb_sum[j]
            if total > bound:
                return self.pb_explain(j, len(self.trail), bound)
            slack = bound - total
            ws = self.pb_w[j]
            lits = self.pb_lits[j]
            for k in range(len(lits)):
                if ws[k] <= slack:
                    break
                c = lits[k]
                if self.assign[c >> 1] < 0:
                    self.enqueue(c ^ 1, -j - 2)
        return None

    def check_pb_full(self) -> list[int] | None:
        for j in range(len(self.pb_lits)):
            if self.pb_sum[j] > self.pb_bound[j]:
                return self.pb_explain(j, len(self.trail), self.pb_bound[j])
        return None

    # -- search ----------------------------------------------------------

    def bump(self, v: int) -> None:
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for u in range(1, self.n):
                act[u] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-act[u], u) for u in range(1, self.n) if self.assign[u] < 0]
            heapq.heapify(self.heap)
        elif self.assign[v] < 0:
            heapq.heappush(self.heap, (-act[v], v))

    def analyze(self, confl: list[int]) -> tuple[list[int], int]:
        seen = self.seen
        level = self.level
        cur = len(self.lim)
        learnt: list[int] = [0]
        path = 0
        p = -1
        idx = len(self.trail) - 1
        clause = confl
        while True:
            start = 0 if p < 0 else 1
            for k in range(start, len(clause)):
                q = clause[k]
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    self.bump(v)
                    if level[v] >= cur:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[self.trail[idx] >> 1]:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            v = p >> 1
            seen[v] = 0
            path -= 1
            if path == 0:
                break
            clause = self.reason_clause(v)
        learnt[0] = p ^ 1
        for q in learnt[1:]:
            seen[q >> 1] = 0
        back = 0
        if len(learnt) > 1:
            best = 1
            for k in range(2, len(learnt)):
                if level[learnt[k] >> 1] > level[learnt[best] >> 1]:
                    best = k
            learnt[1], learnt[best] = learnt[best], learnt[1]
            back = level[learnt[1] >> 1]
        self.var_inc *= _DECAY
        return learnt, back

    def pick(self) -> int:
        heap = self.heap
        act = self.activity
        while heap:
            neg_act, v = heapq.heappop(heap)
            if self.assign[v] < 0 and -neg_act == act[v]:
                return v
        return 0

    def handle_conflict(self, confl: list[int]) -> bool:
        """Learn from ``confl`` and backjump; False when the formula is refuted."""
        self.conflicts += 1
        top = 0
        for q in confl:
            lv = self.level[q >> 1]
            if lv > top:
                top = lv
        if top == 0:
            return False
        self.cancel_until(top)
        learnt, back = self.analyze(confl)
        self.cancel_until(back)
        if len(learnt) == 1:
            self.enqueue(learnt[0], _DECISION)
        else:
            idx = len(self.clauses)
            self.clauses.append(learnt)
            self.watches[learnt[0]].append(idx)
            self.watches[learnt[1]].append(idx)
            self.enqueue(learnt[0], idx)
        return True

    def run(self, clauses, pbs, max_nodes: int):
        status = self._run(clauses, pbs, max_nodes)
        model = None
        if status == SAT:
            model = [False] + [self.assign[v] == 1 for v in range(1, self.n)]
        stats = {
            "decisions": self.decisions,
            "conflicts": self.conflicts,
            "propagations": self.propagations,
            "nodes": self.decisions + self.conflicts,
        }
        return status, model, stats

    def _run(self, clauses, pbs, max_nodes: int) -> str:
        heapq.heapify(self.heap)
        for cl in clauses:
            if not self.add_clause([_code(l) for l in cl]):
                return UNSAT
        for terms, bound in pbs:
            if bound < 0 or not self.add_pb(terms, bound):
                return UNSAT
        if self.prune:
            for j in range(len(self.pb_lits)):
                slack = self.pb_bound[j] - self.pb_sum[j]
                for c, w in zip(self.pb_lits[j], self.pb_w[j]):
                    if w <= slack:
                        break
                    if self.value(c) < 0:
                        self.enqueue(c ^ 1, _DECISION)
        restarts = 0
        budget = _RESTART_BASE * luby(0)
        since = 0
        while True:
            confl = self.propagate()
            if confl is not None:
                if not self.handle_conflict(confl):
                    return UNSAT
                since += 1
                if max_nodes and self.decisions + self.conflicts >= max_nodes:
                    return BUDGET
                continue
            if since >= budget:
                restarts += 1
                budget = _RESTART_BASE * luby(restarts)
                since = 0
                self.cancel_until(0)
                continue
            v = self.pick()
            if v == 0:
                if not self.prune:
                    confl = self.check_pb_full()
                    if confl is not None:
                        if not self.handle_conflict(confl):
                            return UNSAT
                        since += 1
                        if max_nodes and self.decisions + self.conflicts >= max_nodes:
                            return BUDGET
                        continue
                return SAT
            if max_nodes and self.decisions + self.conflicts >= max_nodes:
                return BUDGET
            self.decisions += 1
            self.lim.append(len(self.trail))
            lit = 2 * v + self.polarity[v]
            if self.trace is not None:
                cost = self.pb_sum[0] if self.pb_sum else 0
                sign = "-" if lit & 1 else ""
                self.trace(f"{len(self.lim)}|{sign}{v}|{cost}")
            self.enqueue(lit, _DECISION)
