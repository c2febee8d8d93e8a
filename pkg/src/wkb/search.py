"""Bounded-domain model search and S-filtration.

``find_interpretation`` grounds the KB over the named individuals plus up to
``anon_limit`` anonymous elements and hands the result to the solver kernel,
whose weighted at-most constraint plays the role of the running-cost bound
in a branch-and-bound search. Every returned witness is re-checked with the
evaluator in :mod:`wkb.interp` before it leaves this module.
"""

from __future__ import annotations

import enum
import os
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Union

from .core import (
    INF,
    Cost,
    Inclusion,
    Query,
    ResourceLimit,
    WeightedKB,
    WKBError,
    subconcepts,
)
from .encoding import Encoded, Grounding, encode
from .interp import (
    Interpretation,
    concept_extension,
    cost_of,
    satisfies_assertion,
    satisfies_bcq,
    violations_of_inclusion,
)
from .kernel import BUDGET, SAT

DEFAULT_ANON_CAP = 12


class BudgetExhausted(ResourceLimit):
    def __init__(self, nodes: int) -> None:
        super().__init__(f"node budget exhausted after {nodes} nodes")
        self.nodes = nodes


class Problem(enum.Enum):
    BCS = "bcs"
    POSSIBLE = "possible"
    CERTAIN = "certain"


@dataclass(frozen=True)
class DomainBound:
    anon_limit: int
    theoretical_complete: bool = False

    def __post_init__(self) -> None:
        if self.anon_limit < 0:
            raise ValueError("anon_limit must be non-negative")


@dataclass(frozen=True)
class MustSatisfy:
    query: Query


@dataclass(frozen=True)
class MustAvoid:
    query: Query


QueryConstraint = Union[None, MustSatisfy, MustAvoid]


@dataclass
class Found:
    interpretation: Interpretation
    stats: dict = field(default_factory=dict)


@dataclass
class NoneWithinBound:
    complete: bool
    stats: dict = field(default_factory=dict)


SearchOutcome = Union[Found, NoneWithinBound]


def configured_cap() -> int:
    raw = os.environ.get("WKB_ANON_BOUND")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise WKBError(f"WKB_ANON_BOUND must be an integer, got {raw!r}") from None
        if value < 0:
            raise WKBError("WKB_ANON_BOUND must be non-negative")
        return value
    return DEFAULT_ANON_CAP


def completeness_bound(
    kb: WeightedKB,
    problem: Problem | str = Problem.BCS,
    k: Cost | None = None,
    q: Query | None = None,
    *,
    cap: int | None = None,
) -> DomainBound:
    """The anonymous-domain size that makes search exhaustive for ``problem``.

    For satisfiability and possible entailment, 2^|sub(T)| anonymous elements
    suffice. No explicit constant is available for certain entailment, so
    the configured cap is returned and marked incomplete.
    """
    problem = Problem(problem)
    cap = configured_cap() if cap is None else cap
    if problem is Problem.CERTAIN:
        return DomainBound(cap, False)
    n = len(subconcepts(kb))
    if n < 63 and (1 << n) <= cap:
        return DomainBound(1 << n, True)
    return DomainBound(cap, False)


def signature_of(kb: WeightedKB, queries: Iterable[Query] = ()) -> tuple[list[str], list[str]]:
    concepts = dict.fromkeys(kb.concept_names())
    roles = dict.fromkeys(kb.role_names())
    for q in queries:
        for a in q.atoms:
            if hasattr(a, "concept"):
                concepts.setdefault(a.concept)
            else:
                roles.setdefault(a.role)
    return list(concepts), list(roles)


_CACHE: OrderedDict = OrderedDict()
_CACHE_SIZE = 64


def _encoded(
    kb: WeightedKB,
    named: tuple[str, ...],
    anon: int,
    constraint: QueryConstraint,
    k_inf: bool,
    caps: tuple | None,
    dropped: frozenset,
    relaxed: bool,
) -> Encoded:
    key = (kb, named, anon, constraint, k_inf, caps, dropped, relaxed)
    hit = _CACHE.get(key)
    if hit is not None:
        _CACHE.move_to_end(key)
        return hit
    queries = [constraint.query] if constraint is not None else []
    concepts, roles = signature_of(kb, queries)
    g = Grounding(named, anon, concepts, roles, relaxed=relaxed)
    enc = encode(
        kb,
        g,
        k_is_infinite=k_inf,
        caps=dict(caps) if caps is not None else None,
        relaxed_assertions=dropped,
    )
    if isinstance(constraint, MustSatisfy):
        lit = g.match_lit(constraint.query)
        enc.hard.append([lit])
    elif isinstance(constraint, MustAvoid):
        enc.hard.extend(g.avoid_clauses(constraint.query))
    _CACHE[key] = enc
    if len(_CACHE) > _CACHE_SIZE:
        _CACHE.popitem(last=False)
    return enc


def clear_cache() -> None:
    _CACHE.clear()


def _check_individuals(named: tuple[str, ...], constraint: QueryConstraint) -> None:
    if constraint is None:
        return
    known = set(named)
    for ind in constraint.query.individuals():
        if ind not in known:
            raise WKBError(
                f"query individual {ind!r} is not a named element; extend the KB or pass extra_named"
            )
    if not constraint.query.is_boolean:
        raise WKBError("search constraints take Boolean queries")


def find_interpretation(
    kb: WeightedKB,
    k: Cost,
    constraint: QueryConstraint = None,
    bound: DomainBound | None = None,
    *,
    extra_named: Iterable[str] = (),
    caps: Mapping[Inclusion, int] | None = None,
    dropped: Iterable = (),
    consume: int = 0,
    max_nodes: int = 0,
    prune: bool = True,
    trace: Callable[[str], None] | None = None,
    backend: str | None = None,
    certify: bool = True,
) -> SearchOutcome:
    """Search for ``I`` with ``cost(I) <= k`` satisfying ``constraint``.

    ``extra_named`` adds named elements that are not KB individuals; they
    use up anonymous slots, as do ``consume`` further slots (fresh query
    individuals already added to the KB). With ``caps`` the cost bound is replaced by the
    per-inclusion violation caps of a configuration, and the assertions in
    ``dropped`` are left unconstrained.
    """
    if bound is None:
        bound = completeness_bound(kb, Problem.BCS)
    extra = [x for x in extra_named if x not in kb.individuals()]
    named = tuple(kb.individuals()) + tuple(dict.fromkeys(extra))
    anon = max(0, bound.anon_limit - len(extra) - consume)
    if not named:
        anon = max(anon, 1)
    _check_individuals(named, constraint)
    caps_key = tuple(sorted(caps.items(), key=lambda kv: repr(kv[0]))) if caps is not None else None
    dropped_set = frozenset(dropped)
    k_inf = k is INF and caps is None
    enc = _encoded(kb, named, anon, constraint, k_inf, caps_key, dropped_set, False)
    res = enc.solve(k, max_nodes=max_nodes, prune=prune, trace=trace, backend=backend)
    stats = dict(res.stats)
    stats["backend"] = res.backend
    stats["anon_limit"] = anon
    if res.status == BUDGET:
        raise BudgetExhausted(stats.get("nodes", 0))
    if res.status == SAT:
        interp = enc.grounding.decode(res.model)
        _revalidate(interp, kb, k, constraint, caps, dropped_set)
        return Found(interp, stats)
    complete = bound.theoretical_complete
    if not complete and certify:
        relaxed = _encoded(kb, named, 0, constraint, k_inf, caps_key, dropped_set, True)
        rres = relaxed.solve(k, max_nodes=max_nodes, backend=backend)
        stats["certificate_nodes"] = rres.stats.get("nodes", 0)
        if rres.status == "UNSAT":
            complete = True
            stats["certified"] = True
    return NoneWithinBound(complete, stats)


def _revalidate(
    I: Interpretation,
    kb: WeightedKB,
    k: Cost,
    constraint: QueryConstraint,
    caps: Mapping[Inclusion, int] | None,
    dropped: frozenset,
) -> None:
    if caps is not None:
        for tau, w in kb.tbox:
            n = len(violations_of_inclusion(I, tau))
            limit = 0 if w is INF else caps.get(tau, 0)
            if n > limit:
                raise WKBError("internal error: witness exceeds a configuration cap")
        for alpha, w in kb.abox:
            if alpha not in dropped and not satisfies_assertion(I, alpha):
                raise WKBError("internal error: witness violates a hard assertion")
    elif k is not INF and not cost_of(I, kb) <= k:
        raise WKBError("internal error: witness exceeds the cost bound")
    if isinstance(constraint, MustSatisfy) and not satisfies_bcq(I, constraint.query):
        raise WKBError("internal error: witness does not satisfy the query")
    if isinstance(constraint, MustAvoid) and satisfies_bcq(I, constraint.query):
        raise WKBError("internal error: witness satisfies the avoided query")


def fresh_names(taken: Iterable[str], count: int, prefix: str = "_y") -> list[str]:
    used = set(taken)
    out: list[str] = []
    i = 0
    while len(out) < count:
        name = f"{prefix}{i}"
        if name not in used:
            out.append(name)
        i += 1
    return out


def extend_with_query(kb: WeightedKB, q: Query) -> tuple[WeightedKB, list[str]]:
    """Fresh individual names, one per existential variable of ``q``.

    The KB itself is returned unchanged; the reasoner grounds the query
    atoms per valuation.
    """
    if not q.is_boolean:
        raise WKBError("extend_with_query takes a Boolean query")
    taken = set(kb.individuals()) | set(q.individuals()) | set(kb.concept_names()) | set(kb.role_names())
    return kb, fresh_names(taken, len(q.existential_vars()))


def filtrate(I: Interpretation, tbox) -> Interpretation:
    """Merge anonymous elements with equal S-types, S = sub(T).

    Named elements keep singleton classes. A class is in ``A`` (or related
    by ``R``) when some member is, which for names in S coincides with the
    shared type.
    """
    S = subconcepts(tbox)
    masks = [I.mask_of(c) for c in S]
    n_named = len(I.named)
    cls_of: dict[int, int] = {d: d for d in range(n_named)}
    reps: dict[tuple[bool, ...], int] = {}
    for d in range(n_named, I.size):
        t = tuple(bool(m >> d & 1) for m in masks)
        if t not in reps:
            reps[t] = n_named + len(reps)
        cls_of[d] = reps[t]
    concepts = {a: frozenset(cls_of[d] for d in ext) for a, ext in I.concepts.items()}
    roles = {r: frozenset((cls_of[a], cls_of[b]) for a, b in ext) for r, ext in I.roles.items()}
    return Interpretation(I.named, len(reps), concepts, roles)


def s_type(I: Interpretation, d: int, S) -> frozenset:
    return frozenset(c for c in S if d in concept_extension(I, c))
