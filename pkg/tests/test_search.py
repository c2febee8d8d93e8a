import random

import pytest
from hypothesis import given, settings

from strategies import interpretations, weighted_kbs
from wkb.bench.fixtures import visa_fixture
from wkb.bench.oracle import Oracle
from wkb.bench.randgen import random_interpretation, random_tiny_kb
from wkb.bench.reductions import gen_3col
from wkb.bench.solvers import Graph
from wkb.core import (
    INF,
    ConceptAssertion,
    ConceptAtom,
    Inclusion,
    Name,
    Query,
    RoleAtom,
    Var,
    WeightedKB,
    subconcepts,
)
from wkb.interp import concept_extension, cost_of, is_model, satisfies_bcq, violations_of_inclusion
from wkb.search import (
    BudgetExhausted,
    DomainBound,
    Found,
    MustAvoid,
    MustSatisfy,
    NoneWithinBound,
    Problem,
    completeness_bound,
    extend_with_query,
    filtrate,
    find_interpretation,
    fresh_names,
)

VISA_Q = Query((ConceptAtom("Visa", "p"),))


def test_visa_k1_found(backend):
    kb = visa_fixture()
    out = find_interpretation(kb, 1, backend=backend)
    assert isinstance(out, Found)
    assert cost_of(out.interpretation, kb) == 1


def test_visa_k0_none_and_complete(backend):
    out = find_interpretation(visa_fixture(), 0, backend=backend)
    assert isinstance(out, NoneWithinBound) and out.complete


def test_visa_k2_must_satisfy_visa(backend):
    kb = visa_fixture()
    out = find_interpretation(kb, 2, MustSatisfy(VISA_Q), backend=backend)
    assert isinstance(out, Found)
    assert satisfies_bcq(out.interpretation, VISA_Q)
    assert cost_of(out.interpretation, kb) == 2


def test_visa_k1_cannot_avoid_novisa(backend):
    q = Query((ConceptAtom("NoVisa", "p"),))
    out = find_interpretation(visa_fixture(), 1, MustAvoid(q), backend=backend)
    assert isinstance(out, NoneWithinBound) and out.complete


def test_completeness_bound():
    kb = visa_fixture()
    n = len(subconcepts(kb))
    assert completeness_bound(kb, Problem.BCS, cap=1 << n) == DomainBound(1 << n, True)
    assert completeness_bound(kb, Problem.BCS, cap=4) == DomainBound(4, False)
    assert completeness_bound(kb, Problem.CERTAIN, cap=5) == DomainBound(5, False)
    assert completeness_bound(WeightedKB(), "possible", cap=1) == DomainBound(1, True)


def test_anon_bound_from_environment(monkeypatch):
    monkeypatch.setenv("WKB_ANON_BOUND", "3")
    assert completeness_bound(visa_fixture(), Problem.CERTAIN) == DomainBound(3, False)


def test_fresh_names_skip_taken():
    assert fresh_names({"_y0", "_y2"}, 3) == ["_y1", "_y3", "_y4"]


def test_extend_with_query():
    kb = visa_fixture()
    q = Query((RoleAtom("hasNat", "p", Var("y")),))
    same, fresh = extend_with_query(kb, q)
    assert same is kb and fresh == ["_y0"]
    assert extend_with_query(kb, VISA_Q)[1] == []
    q2 = Query((RoleAtom("hasNat", Var("x"), Var("y")),))
    assert len(extend_with_query(kb, q2)[1]) == 2


def test_budget_exhaustion_is_distinct(backend):
    wheel = Graph(6, ((0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 5), (1, 5), (2, 5), (3, 5), (4, 5)))
    kb, k = gen_3col(wheel)
    with pytest.raises(BudgetExhausted):
        find_interpretation(kb, k, bound=DomainBound(0, True), max_nodes=1, backend=backend)


def test_filtration_merges_equal_types():
    I = random_interpretation(random.Random(0), ("a",), ("A",), (), 5, 0.0)
    J = filtrate(I, ())
    assert J.anon_count == 1


def test_trace_emits_lines():
    lines = []
    find_interpretation(visa_fixture(), 2, MustSatisfy(VISA_Q), trace=lines.append)
    assert all(len(line.split("|")) == 3 for line in lines)


@settings(max_examples=40)
@given(interpretations(max_anon=4), weighted_kbs(max_tbox=3, max_abox=2))
def test_filtration_invariants(I, kb):
    J = filtrate(I, kb.inclusions)
    S = subconcepts(kb.inclusions)
    assert J.size <= len(I.named) + 2 ** len(S)
    for c in S:
        ext_i, ext_j = concept_extension(I, c), concept_extension(J, c)
        for a in range(len(I.named)):
            assert (a in ext_i) == (a in ext_j)
    for tau in kb.inclusions:
        assert len(violations_of_inclusion(J, tau)) <= len(violations_of_inclusion(I, tau))
    assert cost_of(J, kb) <= cost_of(I, kb)
    if is_model(I, kb):
        assert is_model(J, kb)
    K = filtrate(J, kb.inclusions)
    assert K.anon_count == J.anon_count


def _suite(n, seed):
    rng = random.Random(seed)
    return [random_tiny_kb(rng, max_bits=14) for _ in range(n)]


@pytest.mark.parametrize("seed", range(3))
def test_search_agrees_with_oracle_on_bcs(seed, backend):
    for inst in _suite(15, seed):
        o = Oracle(inst.kb, inst.anon_limit)
        b = DomainBound(inst.anon_limit, False)
        for k in (0, 1, 2, INF):
            out = find_interpretation(inst.kb, k, bound=b, backend=backend)
            assert isinstance(out, Found) == o.bcs(k), (inst, k)


def test_pruning_never_changes_verdicts():
    for inst in _suite(25, 11):
        b = DomainBound(inst.anon_limit, False)
        for k in (0, 1, 2, 3):
            on = find_interpretation(inst.kb, k, bound=b, backend="python")
            off = find_interpretation(inst.kb, k, bound=b, backend="python", prune=False)
            assert type(on) is type(off)


def test_found_witnesses_respect_constraints():
    kb = WeightedKB(
        ((Inclusion(Name("A"), Name("B")), 1),),
        ((ConceptAssertion("A", "a"), 1),),
    )
    q = Query((ConceptAtom("B", "a"),))
    out = find_interpretation(kb, 0, MustAvoid(q))
    assert isinstance(out, NoneWithinBound)
    out = find_interpretation(kb, 1, MustAvoid(q))
    assert isinstance(out, Found) and not satisfies_bcq(out.interpretation, q)
