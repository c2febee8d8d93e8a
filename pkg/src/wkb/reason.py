"""Decision procedures: bounded-cost satisfiability, optimal cost, and query
entailment under the certain/possible, k-bounded/optimal semantics.

Query individuals that do not occur in the KB are not constrained by the
standard-name assumption, so their denotation is part of what an
interpretation chooses. For possible semantics they behave like existential
variables; for certain semantics every denotation has to be refuted
separately, which is done by enumerating the denotations.
"""

from __future__ import annotations

import functools
import itertools
import time
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

from .configs import enumerate_configurations
from .core import (
    INF,
    ConceptAtom,
    Cost,
    Query,
    RoleAtom,
    Var,
    WeightedKB,
    WKBError,
)
from .interp import Interpretation, cost_of, ground_atom, restrict_named
from .search import (
    DomainBound,
    Found,
    MustAvoid,
    MustSatisfy,
    Problem,
    completeness_bound,
    extend_with_query,
    find_interpretation,
    fresh_names,
)


class UnknownQueryIndividual(WKBError):
    pass


# ------------------------------------------------------------------ semantics


@dataclass(frozen=True)
class CertainBounded:
    k: Cost

    def __post_init__(self) -> None:
        if self.k is not INF and self.k < 0:
            raise ValueError("k must be non-negative")

    name = "certain-k"


@dataclass(frozen=True)
class PossibleBounded:
    k: Cost

    def __post_init__(self) -> None:
        if self.k is not INF and self.k < 0:
            raise ValueError("k must be non-negative")

    name = "possible-k"


@dataclass(frozen=True)
class CertainOpt:
    name = "certain-opt"


@dataclass(frozen=True)
class PossibleOpt:
    name = "possible-opt"


Semantics = Union[CertainBounded, PossibleBounded, CertainOpt, PossibleOpt]


def parse_semantics(text: str, k: Cost | None = None) -> Semantics:
    t = text.strip().lower()
    if t in ("certain-opt", "copt"):
        return CertainOpt()
    if t in ("possible-opt", "popt"):
        return PossibleOpt()
    if t in ("certain-k", "certain", "ck", "possible-k", "possible", "pk"):
        if k is None:
            raise WKBError(f"semantics {text!r} needs a bound k")
        return CertainBounded(k) if t.startswith("c") else PossibleBounded(k)
    raise WKBError(f"unknown semantics {text!r}")


def is_certain(sem: Semantics) -> bool:
    return isinstance(sem, (CertainBounded, CertainOpt))


@dataclass
class Verdict:
    answer: bool
    complete: bool
    witness: Interpretation | None = None
    opt_used: Cost | None = None
    status: str = "ok"
    stats: dict = field(default_factory=dict)


# --------------------------------------------------------------- bookkeeping


@dataclass
class _Run:
    bound: DomainBound | None
    max_nodes: int
    prune: bool
    backend: str | None
    nodes: int = 0
    calls: int = 0
    started: float = field(default_factory=time.perf_counter)

    def find(self, kb: WeightedKB, k: Cost, constraint=None, bound=None, **kw):
        self.calls += 1
        out = find_interpretation(
            kb,
            k,
            constraint,
            bound,
            max_nodes=self.max_nodes,
            prune=self.prune,
            backend=self.backend,
            **kw,
        )
        self.nodes += out.stats.get("nodes", 0) + out.stats.get("certificate_nodes", 0)
        return out

    def stats(self) -> dict:
        return {
            "nodes": self.nodes,
            "calls": self.calls,
            "millis": round((time.perf_counter() - self.started) * 1000, 3),
        }


def _bound_for(kb: WeightedKB, run: _Run, problem: Problem) -> DomainBound:
    return run.bound if run.bound is not None else completeness_bound(kb, problem)


# ----------------------------------------------------------------------- BCS


def bcs(
    kb: WeightedKB,
    k: Cost,
    bound: DomainBound | None = None,
    *,
    max_nodes: int = 0,
    prune: bool = True,
    backend: str | None = None,
) -> Verdict:
    """Is there an interpretation (within ``bound``) of cost at most ``k``?"""
    run = _Run(bound, max_nodes, prune, backend)
    b = _bound_for(kb, run, Problem.BCS)
    out = run.find(kb, k, None, b)
    if isinstance(out, Found):
        return Verdict(True, True, out.interpretation, stats=run.stats())
    return Verdict(False, out.complete, stats=run.stats())


# -------------------------------------------------------------- optimal cost


def optimal_cost(
    kb: WeightedKB,
    bound: DomainBound | None = None,
    *,
    linear: bool = False,
    max_nodes: int = 0,
    prune: bool = True,
    backend: str | None = None,
) -> tuple[Cost, bool]:
    """The least achievable cost within ``bound`` and whether it is exact."""
    opt, complete, _ = _optimal_cost(kb, bound, linear, max_nodes, prune, backend)
    return opt, complete


@functools.lru_cache(maxsize=256)
def _optimal_cost(
    kb: WeightedKB,
    bound: DomainBound | None,
    linear: bool,
    max_nodes: int,
    prune: bool,
    backend: str | None,
) -> tuple[Cost, bool, int]:
    run = _Run(bound, max_nodes, prune, backend)
    b = _bound_for(kb, run, Problem.BCS)
    seed = run.find(kb, cost_ceiling(kb, b), None, b)
    if not isinstance(seed, Found):
        return INF, seed.complete, run.nodes
    hi = cost_of(seed.interpretation, kb)
    outcomes: dict[int, object] = {}
    if linear:
        k = 0
        while k < hi:
            out = run.find(kb, k, None, b)
            outcomes[k] = out
            if isinstance(out, Found):
                hi = cost_of(out.interpretation, kb)
                break
            k += 1
    else:
        lo = 0
        while lo < hi:
            mid = (lo + hi) // 2
            out = run.find(kb, mid, None, b)
            outcomes[mid] = out
            if isinstance(out, Found):
                hi = cost_of(out.interpretation, kb)
            else:
                lo = mid + 1
    if hi == 0:
        return 0, True, run.nodes
    below = outcomes.get(hi - 1)
    if below is None:
        below = run.find(kb, hi - 1, None, b)
    return hi, below.complete, run.nodes


def cost_ceiling(kb: WeightedKB, b: DomainBound) -> int:
    """The largest finite cost any interpretation within ``b`` can have."""
    n = len(kb.individuals()) + max(b.anon_limit, 1)
    return sum(w * n for _, w in kb.tbox if w is not INF) + sum(w for _, w in kb.abox if w is not INF)


def clear_caches() -> None:
    _optimal_cost.cache_clear()


# ----------------------------------------------------------------- entailment


def _rename_floating(kb: WeightedKB, q: Query) -> tuple[Query, list[str]]:
    """Replace individuals absent from ``kb`` by variables (returned by name)."""
    known = set(kb.individuals())
    floating = [i for i in q.individuals() if i not in known]
    if not floating:
        return q, []
    taken = set(q.variables())
    names = fresh_names(taken, len(floating), prefix="_f")
    mapping = dict(zip(floating, names))

    def sub(t):
        return Var(mapping[t]) if isinstance(t, str) and t in mapping else t

    atoms = []
    for a in q.atoms:
        if isinstance(a, ConceptAtom):
            atoms.append(ConceptAtom(a.concept, sub(a.term)))
        else:
            atoms.append(RoleAtom(a.role, sub(a.first), sub(a.second)))
    return Query(tuple(atoms), q.answer_vars), names


def valuations(vars_: Sequence[str], targets: Sequence[str], fresh: Sequence[str]) -> Iterator[dict[str, str]]:
    """Maps from ``vars_`` into ``targets`` and ``fresh``.

    Fresh names are interchangeable, so they are introduced in order: a
    valuation may use ``fresh[i]`` only if it already uses ``fresh[i-1]``.
    """
    def rec(i: int, used: int, acc: dict[str, str]) -> Iterator[dict[str, str]]:
        if i == len(vars_):
            yield dict(acc)
            return
        for t in list(targets) + list(fresh[: used + 1]):
            acc[vars_[i]] = t
            nxt = used + 1 if t in fresh[used : used + 1] else used
            yield from rec(i + 1, nxt, acc)
        del acc[vars_[i]]

    yield from rec(0, 0, {})


def _strip(I: Interpretation, kb: WeightedKB) -> Interpretation:
    return restrict_named(I, kb.individuals()) if tuple(kb.individuals()) != I.named else I


def _possible(kb: WeightedKB, q: Query, k: Cost, run: _Run, b: DomainBound) -> Verdict:
    qv, _ = _rename_floating(kb, q)
    if k is INF:
        out = run.find(kb, INF, MustSatisfy(qv), b)
        if isinstance(out, Found):
            return Verdict(True, True, _strip(out.interpretation, kb))
        return Verdict(False, out.complete)
    _, fresh = extend_with_query(kb, qv)
    exist = qv.existential_vars()
    complete = True
    for v in valuations(exist, kb.individuals(), fresh):
        grounded = qv.substitute(v)
        atoms = [(ground_atom(a), INF) for a in grounded.atoms]
        kv = kb.with_assertions(atoms)
        used = [f for f in fresh if f in v.values()]
        if len(used) > b.anon_limit:
            # the fresh elements would not fit into the anonymous part
            complete = False
            continue
        out = run.find(kv, k, None, b, consume=len(used))
        if isinstance(out, Found):
            return Verdict(True, True, restrict_named(out.interpretation, kb.individuals()))
        complete = complete and out.complete
    return Verdict(False, complete)


def _certain(kb: WeightedKB, q: Query, k: Cost, run: _Run, b: DomainBound, gammas=None) -> Verdict:
    known = set(kb.individuals())
    floating = [i for i in q.individuals() if i not in known]
    fresh = fresh_names(known | set(q.individuals()), len(floating), prefix="_a")
    complete = True
    configs = [None] if gammas is None else gammas
    for gamma in configs:
        for den in valuations(floating, kb.individuals(), fresh):
            qd = _substitute_individuals(q, den)
            extra = [f for f in fresh if f in den.values()]
            if len(extra) > b.anon_limit:
                complete = False
                continue
            kw = {"extra_named": extra}
            if gamma is not None:
                kw["caps"] = {t: a for t, a in gamma.tbox_allowance.items() if kb.weight_of(t) is not INF}
                kw["dropped"] = gamma.dropped()
            out = run.find(kb, k, MustAvoid(qd), b, **kw)
            if isinstance(out, Found):
                return Verdict(False, True, _strip(out.interpretation, kb))
            complete = complete and out.complete
    return Verdict(True, complete)


def _substitute_individuals(q: Query, mapping: dict[str, str]) -> Query:
    if not mapping:
        return q

    def sub(t):
        return mapping.get(t, t) if isinstance(t, str) else t

    atoms = []
    for a in q.atoms:
        if isinstance(a, ConceptAtom):
            atoms.append(ConceptAtom(a.concept, sub(a.term)))
        else:
            atoms.append(RoleAtom(a.role, sub(a.first), sub(a.second)))
    return Query(tuple(atoms), q.answer_vars)


def entails(
    kb: WeightedKB,
    q: Query,
    sem: Semantics,
    bound: DomainBound | None = None,
    *,
    engine: str = "search",
    max_nodes: int = 0,
    prune: bool = True,
    backend: str | None = None,
    linear_opt: bool = False,
    allow_fresh: bool = False,
) -> Verdict:
    """Decide ``kb |=_sem q`` for a Boolean query ``q``.

    Query individuals outside ind(kb) are rejected unless ``allow_fresh``;
    with it they are interpreted freely (see the module docstring).
    """
    if not q.is_boolean:
        raise WKBError("entails takes a Boolean query; use answers() for answer variables")
    _check_fresh(kb, q, allow_fresh)
    run = _Run(bound, max_nodes, prune, backend)
    opt_used: Cost | None = None
    opt_complete = True
    status = "ok"
    if isinstance(sem, (CertainOpt, PossibleOpt)):
        ob = bound if bound is not None else completeness_bound(kb, Problem.BCS)
        opt, opt_complete, nodes = _optimal_cost(kb, ob, linear_opt, max_nodes, prune, backend)
        run.nodes += nodes
        opt_used = opt
        if opt is INF:
            status = "opt-infinite"
        k = opt
        certain = isinstance(sem, CertainOpt)
    else:
        k = sem.k
        certain = isinstance(sem, CertainBounded)
    problem = Problem.CERTAIN if certain else Problem.POSSIBLE
    b = _bound_for(kb, run, problem)
    if engine == "configs" and k is not INF:
        v = _via_configurations(kb, q, k, certain, run, b)
    elif engine in ("search", "configs"):
        v = _certain(kb, q, k, run, b) if certain else _possible(kb, q, k, run, b)
    else:
        raise WKBError(f"unknown engine {engine!r}")
    v.opt_used = opt_used
    v.complete = v.complete and opt_complete
    v.status = status
    v.stats = run.stats()
    return v


def _check_fresh(kb: WeightedKB, q: Query, allow_fresh: bool) -> None:
    if allow_fresh:
        return
    known = set(kb.individuals())
    missing = [a for a in q.individuals() if a not in known]
    if missing:
        raise UnknownQueryIndividual(
            f"query individual {missing[0]!r} does not occur in the KB (pass allow_fresh to accept it)"
        )


def _via_configurations(kb: WeightedKB, q: Query, k: int, certain: bool, run: _Run, b: DomainBound) -> Verdict:
    gammas = list(enumerate_configurations(kb, k))
    if certain:
        return _certain(kb, q, k, run, b, gammas)
    qv, _ = _rename_floating(kb, q)
    complete = True
    for gamma in gammas:
        caps = {t: a for t, a in gamma.tbox_allowance.items() if kb.weight_of(t) is not INF}
        out = run.find(kb, k, MustSatisfy(qv), b, caps=caps, dropped=gamma.dropped())
        if isinstance(out, Found):
            return Verdict(True, True, out.interpretation)
        complete = complete and out.complete
    return Verdict(False, complete)


def entails_via_configurations(
    kb: WeightedKB,
    q: Query,
    k: int,
    bound: DomainBound | None = None,
    *,
    semantics: str = "certain",
    max_nodes: int = 0,
    prune: bool = True,
    backend: str | None = None,
    allow_fresh: bool = False,
) -> Verdict:
    """Entailment checked one k-configuration at a time against K_gamma."""
    if k is INF:
        raise WKBError("the configuration engine needs a finite k")
    if not q.is_boolean:
        raise WKBError("entails_via_configurations takes a Boolean query")
    _check_fresh(kb, q, allow_fresh)
    certain = semantics.startswith("c")
    run = _Run(bound, max_nodes, prune, backend)
    b = _bound_for(kb, run, Problem.CERTAIN if certain else Problem.POSSIBLE)
    v = _via_configurations(kb, q, k, certain, run, b)
    v.stats = run.stats()
    return v


# -------------------------------------------------------------------- answers


def answers(
    kb: WeightedKB,
    q: Query,
    sem: Semantics,
    bound: DomainBound | None = None,
    *,
    include_negative: bool = False,
    **kw,
) -> list[tuple[tuple[str, ...], Verdict]]:
    """Answer tuples over ind(K), in declaration order, with their verdicts.

    Only positive tuples are returned unless ``include_negative`` is set;
    a Boolean query always yields its single verdict.
    """
    if q.is_boolean:
        return [((), entails(kb, q, sem, bound, **kw))]
    inds = kb.individuals()
    out: list[tuple[tuple[str, ...], Verdict]] = []
    for combo in itertools.product(inds, repeat=len(q.answer_vars)):
        qa = q.substitute(dict(zip(q.answer_vars, combo)))
        v = entails(kb, qa, sem, bound, **kw)
        if v.answer or include_negative:
            out.append((combo, v))
    return out
