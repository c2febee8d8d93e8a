# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled twin of ``wkb._pysolver``.

Same algorithm, same tie-breaking, same restart schedule: given identical
input both kernels make identical decisions. Weights and bounds must fit in
a signed 64-bit integer (the dispatcher checks this).
"""

from libcpp.vector cimport vector
from libcpp.queue cimport priority_queue
from libcpp.pair cimport pair

ctypedef long long i64

cdef int DECISION = -1
cdef int RESTART_BASE = 100
cdef double DECAY = 1.0 / 0.95


cdef long luby(long i):
    cdef long size = 1, seq = 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


cdef inline int code(long lit):
    return <int>(2 * lit) if lit > 0 else <int>(2 * (-lit) + 1)


cdef class _Solver:
    cdef int n
    cdef bint prune
    cdef vector[int] assign, level, reason, tpos, polarity, seen
    cdef vector[double] activity
    cdef double var_inc
    cdef priority_queue[pair[double, int]] heap
    cdef vector[int] trail, lim
    cdef size_t qhead
    cdef vector[vector[int]] clauses
    cdef vector[vector[int]] watches
    cdef vector[vector[int]] pb_lits
    cdef vector[vector[i64]] pb_w
    cdef vector[i64] pb_bound, pb_sum
    cdef vector[vector[pair[int, i64]]] pb_occ
    cdef public long decisions, conflicts, propagations
    cdef object trace
    cdef vector[int] tmp

    def __init__(self, int num_vars, bint prune, object trace):
        cdef int n = num_vars + 1
        cdef int v
        self.n = n
        self.prune = prune
        self.trace = trace
        self.assign.assign(n, -1)
        self.level.assign(n, 0)
        self.reason.assign(n, DECISION)
        self.tpos.assign(n, 0)
        self.polarity.assign(n, 1)
        self.activity.assign(n, 0.0)
        self.seen.assign(n, 0)
        self.var_inc = 1.0
        for v in range(1, n):
            self.heap.push(pair[double, int](0.0, -v))
        self.qhead = 0
        self.watches.resize(2 * n)
        self.pb_occ.resize(2 * n)
        self.decisions = 0
        self.conflicts = 0
        self.propagations = 0

    cdef inline int value(self, int lit):
        cdef int a = self.assign[lit >> 1]
        if a < 0:
            return -1
        return a ^ (lit & 1)

    cdef void enqueue(self, int lit, int why):
        cdef int v = lit >> 1
        cdef size_t k
        self.assign[v] = 1 - (lit & 1)
        self.level[v] = <int>self.lim.size()
        self.reason[v] = why
        self.tpos[v] = <int>self.trail.size()
        self.trail.push_back(lit)
        for k in range(self.pb_occ[lit].size()):
            self.pb_sum[self.pb_occ[lit][k].first] += self.pb_occ[lit][k].second

    cdef void cancel_until(self, int lvl):
        cdef int stop, i, lit, v
        cdef size_t k
        if <int>self.lim.size() <= lvl:
            return
        stop = self.lim[lvl]
        i = <int>self.trail.size() - 1
        while i >= stop:
            lit = self.trail[i]
            v = lit >> 1
            for k in range(self.pb_occ[lit].size()):
                self.pb_sum[self.pb_occ[lit][k].first] -= self.pb_occ[lit][k].second
            self.polarity[v] = lit & 1
            self.assign[v] = -1
            self.heap.push(pair[double, int](self.activity[v], -v))
            i -= 1
        self.trail.resize(stop)
        self.lim.resize(lvl)
        self.qhead = stop

    cdef bint add_clause(self, vector[int]& lits):
        cdef int val, idx
        if lits.size() == 0:
            return False
        if lits.size() == 1:
            val = self.value(lits[0])
            if val == 0:
                return False
            if val < 0:
                self.enqueue(lits[0], DECISION)
            return True
        idx = <int>self.clauses.size()
        self.clauses.push_back(lits)
        self.watches[lits[0]].push_back(idx)
        self.watches[lits[1]].push_back(idx)
        return True

    cdef bint add_pb(self, list terms, i64 bound):
        order = sorted([(w, code(l)) for l, w in terms], key=lambda t: (-t[0], t[1]))
        cdef int j = <int>self.pb_lits.size()
        cdef vector[int] lits
        cdef vector[i64] ws
        cdef i64 total = 0
        cdef i64 w
        cdef int c
        for w, c in order:
            lits.push_back(c)
            ws.push_back(w)
            self.pb_occ[c].push_back(pair[int, i64](j, w))
            if self.value(c) == 1:
                total += w
        self.pb_lits.push_back(lits)
        self.pb_w.push_back(ws)
        self.pb_bound.push_back(bound)
        self.pb_sum.push_back(total)
        return total <= bound

    cdef void pb_explain(self, int j, int before, i64 need, vector[int]& out):
        cdef i64 acc = 0
        cdef size_t k
        cdef int c
        for k in range(self.pb_lits[j].size()):
            c = self.pb_lits[j][k]
            if self.value(c) == 1 and self.tpos[c >> 1] < before:
                out.push_back(c ^ 1)
                acc += self.pb_w[j][k]
                if acc > need:
                    return
        raise AssertionError("weighted constraint explanation incomplete")

    cdef void reason_clause(self, int v, vector[int]& out):
        cdef int r = self.reason[v]
        cdef int j, lit, neg
        cdef i64 w = 0
        cdef size_t k
        out.clear()
        if r >= 0:
            out = self.clauses[r]
            return
        j = -r - 2
        lit = 2 * v + (1 - self.assign[v])
        neg = lit ^ 1
        for k in range(self.pb_lits[j].size()):
            if self.pb_lits[j][k] == neg:
                w = self.pb_w[j][k]
                break
        out.push_back(lit)
        self.pb_explain(j, self.tpos[v], self.pb_bound[j] - w, out)

    cdef int propagate(self, vector[int]& confl):
        """0 when quiet; 1 when ``confl`` holds a conflicting clause."""
        cdef int p, false_lit, ci, first, a, lk, ak, tmpl
        cdef size_t i, j, n, k
        cdef bint moved
        while self.qhead < self.trail.size():
            p = self.trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = p ^ 1
            i = 0
            j = 0
            n = self.watches[false_lit].size()
            while i < n:
                ci = self.watches[false_lit][i]
                i += 1
                if self.clauses[ci][0] == false_lit:
                    self.clauses[ci][0] = self.clauses[ci][1]
                    self.clauses[ci][1] = false_lit
                first = self.clauses[ci][0]
                a = self.assign[first >> 1]
                if a >= 0 and (a ^ (first & 1)) == 1:
                    self.watches[false_lit][j] = ci
                    j += 1
                    continue
                moved = False
                for k in range(2, self.clauses[ci].size()):
                    lk = self.clauses[ci][k]
                    ak = self.assign[lk >> 1]
                    if ak < 0 or (ak ^ (lk & 1)) == 1:
                        self.clauses[ci][1] = lk
                        self.clauses[ci][k] = false_lit
                        self.watches[lk].push_back(ci)
                        moved = True
                        break
                if moved:
                    continue
                self.watches[false_lit][j] = ci
                j += 1
                if a >= 0:
                    while i < n:
                        self.watches[false_lit][j] = self.watches[false_lit][i]
                        j += 1
                        i += 1
                    self.watches[false_lit].resize(j)
                    self.qhead = self.trail.size()
                    confl = self.clauses[ci]
                    return 1
                self.enqueue(first, ci)
            self.watches[false_lit].resize(j)
            if self.prune:
                if self.propagate_pb(p, confl):
                    self.qhead = self.trail.size()
                    return 1
        return 0

    cdef bint propagate_pb(self, int p, vector[int]& confl):
        cdef size_t t, k
        cdef int j, c
        cdef i64 bound, total, slack
        for t in range(self.pb_occ[p].size()):
            j = self.pb_occ[p][t].first
            bound = self.pb_bound[j]
            total = self.pb_sum[j]
            if total > bound:
                confl.clear()
                self.pb_explain(j, <int>self.trail.size(), bound, confl)
                return True
            slack = bound - total
            for k in range(self.pb_lits[j].size()):
                if self.pb_w[j][k] <= slack:
                    break
                c = self.pb_lits[j][k]
                if self.assign[c >> 1] < 0:
                    self.enqueue(c ^ 1, -j - 2)
        return False

    cdef bint check_pb_full(self, vector[int]& confl):
        cdef size_t j
        for j in range(self.pb_lits.size()):
            if self.pb_sum[j] > self.pb_bound[j]:
                confl.clear()
                self.pb_explain(<int>j, <int>self.trail.size(), self.pb_bound[j], confl)
                return True
        return False

    cdef void bump(self, int v):
        cdef int u
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for u in range(1, self.n):
                self.activity[u] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = priority_queue[pair[double, int]]()
            for u in range(1, self.n):
                if self.assign[u] < 0:
                    self.heap.push(pair[double, int](self.activity[u], -u))
        elif self.assign[v] < 0:
            self.heap.push(pair[double, int](self.activity[v], -v))

    cdef int analyze(self, vector[int]& confl, vector[int]& learnt):
        cdef int cur = <int>self.lim.size()
        cdef int path = 0
        cdef int p = -1
        cdef int idx = <int>self.trail.size() - 1
        cdef int v, q, best, tmp, back
        cdef size_t k, start
        cdef vector[int] clause = confl
        learnt.clear()
        learnt.push_back(0)
        while True:
            start = 0 if p < 0 else 1
            for k in range(start, clause.size()):
                q = clause[k]
                v = q >> 1
                if not self.seen[v] and self.level[v] > 0:
                    self.seen[v] = 1
                    self.bump(v)
                    if self.level[v] >= cur:
                        path += 1
                    else:
                        learnt.push_back(q)
            while not self.seen[self.trail[idx] >> 1]:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            v = p >> 1
            self.seen[v] = 0
            path -= 1
            if path == 0:
                break
            self.reason_clause(v, clause)
        learnt[0] = p ^ 1
        for k in range(1, learnt.size()):
            self.seen[learnt[k] >> 1] = 0
        back = 0
        if learnt.size() > 1:
            best = 1
            for k in range(2, learnt.size()):
                if self.level[learnt[k] >> 1] > self.level[learnt[best] >> 1]:
                    best = <int>k
            tmp = learnt[1]
            learnt[1] = learnt[best]
            learnt[best] = tmp
            back = self.level[learnt[1] >> 1]
        self.var_inc *= DECAY
        return back

    cdef int pick(self):
        cdef pair[double, int] top
        cdef int v
        while not self.heap.empty():
            top = self.heap.top()
            self.heap.pop()
            v = -top.second
            if self.assign[v] < 0 and top.first == self.activity[v]:
                return v
        return 0

    cdef bint handle_conflict(self, vector[int]& confl):
        cdef int top = 0, lv, back, idx
        cdef size_t k
        cdef vector[int] learnt
        self.conflicts += 1
        for k in range(confl.size()):
            lv = self.level[confl[k] >> 1]
            if lv > top:
                top = lv
        if top == 0:
            return False
        self.cancel_until(top)
        back = self.analyze(confl, learnt)
        self.cancel_until(back)
        if learnt.size() == 1:
            self.enqueue(learnt[0], DECISION)
        else:
            idx = <int>self.clauses.size()
            self.clauses.push_back(learnt)
            self.watches[learnt[0]].push_back(idx)
            self.watches[learnt[1]].push_back(idx)
            self.enqueue(learnt[0], idx)
        return True

    cdef str search(self, list clauses, list pbs, long max_nodes):
        cdef vector[int] lits
        cdef vector[int] confl
        cdef size_t j, k
        cdef i64 slack
        cdef int c, v, lit
        cdef long restarts = 0, since = 0, budget
        for cl in clauses:
            lits.clear()
            for l in cl:
                lits.push_back(code(l))
            if not self.add_clause(lits):
                return "UNSAT"
        for terms, bound in pbs:
            if bound < 0 or not self.add_pb(list(terms), bound):
                return "UNSAT"
        if self.prune:
            for j in range(self.pb_lits.size()):
                slack = self.pb_bound[j] - self.pb_sum[j]
                for k in range(self.pb_lits[j].size()):
                    if self.pb_w[j][k] <= slack:
                        break
                    c = self.pb_lits[j][k]
                    if self.value(c) < 0:
                        self.enqueue(c ^ 1, DECISION)
        budget = RESTART_BASE * luby(0)
        while True:
            if self.propagate(confl):
                if not self.handle_conflict(confl):
                    return "UNSAT"
                since += 1
                if max_nodes and self.decisions + self.conflicts >= max_nodes:
                    return "BUDGET"
                continue
            if since >= budget:
                restarts += 1
                budget = RESTART_BASE * luby(restarts)
                since = 0
                self.cancel_until(0)
                continue
            v = self.pick()
            if v == 0:
                if not self.prune:
                    if self.check_pb_full(confl):
                        if not self.handle_conflict(confl):
                            return "UNSAT"
                        since += 1
                        if max_nodes and self.decisions + self.conflicts >= max_nodes:
                            return "BUDGET"
                        continue
                return "SAT"
            if max_nodes and self.decisions + self.conflicts >= max_nodes:
                return "BUDGET"
            self.decisions += 1
            self.lim.push_back(<int>self.trail.size())
            lit = 2 * v + self.polarity[v]
            if self.trace is not None:
                cost = self.pb_sum[0] if self.pb_sum.size() else 0
                sign = "-" if lit & 1 else ""
                self.trace(f"{self.lim.size()}|{sign}{v}|{cost}")
            self.enqueue(lit, DECISION)

    def run(self, clauses, pbs, long max_nodes):
        status = self.search(list(clauses), list(pbs), max_nodes)
        model = None
        if status == "SAT":
            model = [False] + [self.assign[v] == 1 for v in range(1, self.n)]
        stats = {
            "decisions": self.decisions,
            "conflicts": self.conflicts,
            "propagations": self.propagations,
            "nodes": self.decisions + self.conflicts,
        }
        return status, model, stats


def solve(int num_vars, clauses, pbs, long max_nodes=0, bint prune=True, trace=None):
    return _Solver(num_vars, prune, trace).run(clauses, pbs, max_nodes)
