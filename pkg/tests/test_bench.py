import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wkb.bench.corpus import (
    CorpusFormatError,
    all_graphs,
    format_formula,
    format_graph,
    parse_formula,
    parse_graph,
)
from wkb.bench.fixtures import visa_fixture
from wkb.bench.oracle import (
    BudgetExceeded,
    Oracle,
    Signature,
    enumerate_interpretations,
    oracle_entails,
    oracle_opt,
)
from wkb.bench.randgen import random_graph, random_two_two
from wkb.bench.reductions import (
    UnsatisfiableInput,
    gen_3col,
    gen_independent_set,
    gen_lexmax,
    goal_query,
    lexmax_query,
    lexmax_weights,
)
from wkb.bench.repairs import HypothesisViolation, RepairOracle, ar_entails, brave_entails, enumerate_w_repairs
from wkb.bench.solvers import (
    FALSE,
    TRUE,
    Graph,
    TwoTwoFormula,
    in_every_maximum_independent_set,
    is_three_colourable,
    lexmax_assignment,
    maximum_independent_sets,
    satisfies,
    three_colouring,
)
from wkb.core import (
    INF,
    And,
    Bot,
    Fragment,
    ConceptAssertion,
    ConceptAtom,
    Inclusion,
    Name,
    Query,
    WeightedKB,
    fragment_of,
)
from wkb.interp import cost_of
from wkb.reason import CertainOpt, bcs, entails, optimal_cost

# ------------------------------------------------------------------- oracle


def _count(named, concepts, roles, anon):
    return sum(1 for _ in enumerate_interpretations(named, Signature(concepts, roles), anon))


def test_enumeration_examples():
    assert _count(("a",), ("A",), (), 0) == 2
    assert _count(("a",), (), (), 1) == 2
    assert _count(("a",), ("A",), ("R",), 0) == 4


def test_enumeration_collapses_anonymous_permutations():
    # one concept, no named elements, up to two anonymous elements:
    # size 1: 2 classes; size 2: multisets of two bits, 3 classes
    assert _count((), ("A",), (), 2) == 5


def test_enumerated_interpretations_are_pairwise_non_isomorphic():
    seen = set()
    for I in enumerate_interpretations(("a",), Signature(("A",), ("R",)), 2):
        named = I.named
        n = I.size
        variants = set()
        for perm in itertools.permutations(range(len(named), n)):
            m = list(range(len(named))) + list(perm)
            variants.add(
                (
                    n,
                    frozenset((c, frozenset(m[d] for d in ext)) for c, ext in I.concepts.items()),
                    frozenset((r, frozenset((m[a], m[b]) for a, b in ext)) for r, ext in I.roles.items()),
                )
            )
        assert not (variants & seen)
        seen |= variants


def test_oracle_visa():
    assert oracle_opt(visa_fixture(), 0)[0] == 1
    assert oracle_entails(visa_fixture(), Query((ConceptAtom("NoVisa", "p"),)), CertainOpt(), 0).answer
    assert oracle_opt(WeightedKB(), 0)[0] == 0


def test_oracle_costs_match_interp():
    kb = visa_fixture()
    o = Oracle(kb, 0)
    for idx, b in enumerate(o.batches):
        for row in range(0, len(b.bits), 97):
            assert o.cost_of_row(idx, row) == cost_of(o.interpretation(idx, row), kb)


def test_oracle_budget():
    with pytest.raises(BudgetExceeded):
        Oracle(visa_fixture(), 2, budget=1000)


# ------------------------------------------------------------------ repairs

A_B_CLASH = Inclusion(And(Name("A"), Name("B")), Bot)
A_a = ConceptAssertion("A", "a")
B_a = ConceptAssertion("B", "a")


def test_repairs_examples():
    kb = WeightedKB(((A_B_CLASH, INF),), ((A_a, 1), (B_a, 2)))
    assert enumerate_w_repairs(kb, 0) == [frozenset({B_a})]
    tie = WeightedKB(((A_B_CLASH, INF),), ((A_a, 1), (B_a, 1)))
    assert sorted(enumerate_w_repairs(tie, 0), key=repr) == sorted([frozenset({A_a}), frozenset({B_a})], key=repr)
    consistent = WeightedKB((), ((A_a, 1), (B_a, 1)))
    assert enumerate_w_repairs(consistent, 0) == [frozenset({A_a, B_a})]


def test_ar_and_brave():
    tie = WeightedKB(((A_B_CLASH, INF),), ((A_a, 1), (B_a, 1)))
    qa = Query((ConceptAtom("A", "a"),))
    assert not ar_entails(tie, qa, 0)
    assert brave_entails(tie, qa, 0)


def test_repair_hypotheses_enforced():
    with pytest.raises(HypothesisViolation):
        RepairOracle(WeightedKB(((A_B_CLASH, 1),), ((A_a, 1),)), 0)
    with pytest.raises(HypothesisViolation):
        RepairOracle(WeightedKB((), ((A_a, INF),)), 0)


# ------------------------------------------------------------ reductions


def test_3col_examples():
    kb, k = gen_3col(Graph(3, ((0, 1), (1, 2), (0, 2))))
    assert bcs(kb, k).answer
    k4 = Graph(4, tuple(itertools.combinations(range(4), 2)))
    kb, k = gen_3col(k4)
    assert not bcs(kb, k).answer
    assert fragment_of(kb) is Fragment.EL_BOT


def test_independent_set_examples():
    path = Graph(3, ((0, 1), (1, 2)))
    assert entails(gen_independent_set(path, 0), goal_query(0), CertainOpt()).answer
    assert not entails(gen_independent_set(path, 1), goal_query(1), CertainOpt()).answer
    single = Graph(1)
    assert entails(gen_independent_set(single, 0), goal_query(0), CertainOpt()).answer


def test_lexmax_examples():
    phi = TwoTwoFormula(2, ((1, TRUE, 2, FALSE),))
    assert lexmax_weights(2, 1) == [125, 25, 5, 1]
    assert lexmax_assignment(phi) == (1, 1)
    assert entails(gen_lexmax(phi, 1), lexmax_query(1), CertainOpt()).answer
    # only model sets x1 = 0
    forced = TwoTwoFormula(1, ((FALSE, FALSE, 1, 1),))
    assert lexmax_assignment(forced) == (0,)
    assert not entails(gen_lexmax(forced, 1), lexmax_query(1), CertainOpt()).answer
    with pytest.raises(UnsatisfiableInput):
        gen_lexmax(TwoTwoFormula(1, ((FALSE, FALSE, TRUE, TRUE),)))


def test_visa_fixture_facts():
    kb = visa_fixture()
    assert optimal_cost(kb)[0] == 1
    assert fragment_of(kb) is Fragment.ALCO


# ---------------------------------------------------------------- solvers


def test_three_colouring_is_proper():
    rng = random.Random(1)
    for _ in range(30):
        g = random_graph(rng, rng.randint(1, 7), 0.5)
        col = three_colouring(g)
        brute = any(
            all(c[u] != c[v] for u, v in g.edges) for c in itertools.product(range(3), repeat=g.n)
        )
        assert (col is not None) == brute == is_three_colourable(g)
        if col is not None:
            assert all(col[u] != col[v] for u, v in g.edges)


def test_maximum_independent_sets():
    path = Graph(3, ((0, 1), (1, 2)))
    assert maximum_independent_sets(path) == [frozenset({0, 2})]
    assert in_every_maximum_independent_set(path, 0)
    assert not in_every_maximum_independent_set(path, 1)


def test_lexmax_is_greatest_model():
    rng = random.Random(2)
    for _ in range(20):
        phi = random_two_two(rng, 3, 4)
        best = lexmax_assignment(phi)
        models = [nu for nu in itertools.product((0, 1), repeat=3) if satisfies(phi, nu)]
        assert best == max(models)


def test_graph_validation():
    with pytest.raises(ValueError):
        Graph(2, ((0, 0),))
    with pytest.raises(ValueError):
        Graph(2, ((0, 1), (1, 0)))


# ---------------------------------------------------------------- corpus


def test_graph_atlas_counts():
    graphs = all_graphs(6)
    assert len(graphs) == 208
    assert sum(1 for g in graphs if g.n == 6) == 156


graphs = st.integers(1, 6).flatmap(
    lambda n: st.sets(st.sampled_from([(u, v) for u in range(n) for v in range(u + 1, n)] or [None])).map(
        lambda es: Graph(n, tuple(sorted(e for e in es if e is not None)))
    )
)


@given(graphs)
def test_graph_round_trip(g):
    assert parse_graph(format_graph(g)) == g


slots = st.one_of(st.sampled_from([TRUE, FALSE]), st.integers(1, 3))


@given(st.lists(st.tuples(slots, slots, slots, slots), max_size=5))
def test_formula_round_trip(clauses):
    phi = TwoTwoFormula(3, tuple(clauses))
    assert parse_formula(format_formula(phi)) == phi


def test_corpus_errors():
    with pytest.raises(CorpusFormatError):
        parse_graph("")
    with pytest.raises(CorpusFormatError) as exc:
        parse_graph("3\n0 1\n0 x\n")
    assert exc.value.line == 3
    with pytest.raises(CorpusFormatError):
        parse_formula("2 2\n1 T 2 F\n")
    with pytest.raises(CorpusFormatError):
        parse_formula("1 1\n1 T 5 F\n")
    assert parse_graph("# comment\n2\n\n0 1  # edge\n") == Graph(2, ((0, 1),))
