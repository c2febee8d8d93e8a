import pytest
from hypothesis import given
from hypothesis import strategies as st

from wkb.bench.fixtures import TAU1, TAU2, TAU3, visa_fixture
from wkb.core import (
    INF,
    And,
    Bot,
    ConceptAssertion,
    ConceptAtom,
    Exists,
    Forall,
    Fragment,
    Inclusion,
    Name,
    Nominal,
    Not,
    Query,
    RoleAssertion,
    RoleAtom,
    Top,
    Var,
    WeightedKB,
    WKBError,
    cost_add,
    cost_scale,
    cost_sum,
    fragment_of,
    k_infty,
    subconcepts,
    validate,
    violation_concept,
)
from wkb.syntax import format_concept

A, B = Name("A"), Name("B")

costs = st.one_of(st.integers(min_value=0, max_value=10**30), st.just(INF))


def test_validate_accepts_visa(visa):
    assert validate(visa) == []


def test_validate_zero_weight():
    kb = WeightedKB(abox=((ConceptAssertion("A", "a"), 0),))
    diags = validate(kb)
    assert len(diags) == 1
    assert diags[0].message == "weight must be positive"
    assert diags[0].location == "abox[0]"


def test_validate_namespace_clash():
    kb = WeightedKB(
        tbox=((Inclusion(Name("Visa"), Top), 1),),
        abox=((RoleAssertion("Visa", "a", "b"), 1),),
    )
    diags = validate(kb)
    assert any("concept-name" in d.message and "role-name" in d.message for d in diags)


def test_validate_duplicates_and_overflow():
    alpha = ConceptAssertion("A", "a")
    kb = WeightedKB(abox=((alpha, 1), (alpha, 2), (ConceptAssertion("B", "a"), 2**64)))
    messages = [d.message for d in validate(kb)]
    assert any("duplicate" in m for m in messages)
    assert any("64-bit" in m for m in messages)


def test_fragment_examples(visa):
    r_and = Inclusion(And(A, Exists("R", B)), Bot)
    assert fragment_of([r_and]) is Fragment.EL_BOT
    assert fragment_of(visa) is Fragment.ALCO
    assert fragment_of([]) is Fragment.EL_BOT
    assert fragment_of([Inclusion(A, Not(B))]) is Fragment.ALCO


def test_subconcepts_small():
    assert set(subconcepts([Inclusion(A, Exists("R", B))])) == {A, Exists("R", B), B}
    assert subconcepts([]) == []


def _subtree_strings(text: str) -> set[str]:
    """Independent count: every parenthesised token group of a fully
    bracketed rendering is a subtree."""
    out = set()
    stack = []
    for i, ch in enumerate(text):
        if ch == "(":
            stack.append(i)
        elif ch == ")":
            out.add(text[stack.pop() : i + 1])
    return out


def _bracketed(c) -> str:
    if isinstance(c, And):
        return f"(and {_bracketed(c.left)} {_bracketed(c.right)})"
    if isinstance(c, Not):
        return f"(not {_bracketed(c.operand)})"
    if isinstance(c, (Exists, Forall)):
        op = "some" if isinstance(c, Exists) else "only"
        return f"({op} {c.role} {_bracketed(c.filler)})"
    return f"({format_concept(c)})"


def test_subconcepts_of_visa_tbox():
    kb = visa_fixture()
    subs = subconcepts(kb)
    expected = set()
    for tau in kb.inclusions:
        expected |= _subtree_strings(_bracketed(tau.lhs)) | _subtree_strings(_bracketed(tau.rhs))
    assert len(subs) == len(expected) == 11
    assert Forall("hasNat", Not(Nominal("c"))) in subs
    assert Not(Nominal("c")) in subs and Nominal("c") in subs and Name("Visa") in subs


def test_violation_concept():
    assert violation_concept(Inclusion(A, B)) == And(A, Not(B))
    assert violation_concept(Inclusion(Top, Top)) == And(Top, Not(Top))
    assert violation_concept(TAU3) == And(Forall("hasNat", Not(Nominal("c"))), Not(Name("Visa")))


def test_k_infty(visa):
    assert k_infty(visa) == WeightedKB(((TAU1, INF), (TAU2, INF)), ())
    finite = WeightedKB(((TAU3, 1),), ((ConceptAssertion("A", "a"), 2),))
    assert k_infty(finite) == WeightedKB()
    hard = WeightedKB(((TAU1, INF),), ((ConceptAssertion("A", "a"), INF),))
    assert k_infty(hard) == hard


def test_cost_examples():
    assert cost_scale(INF, 0) == 0
    assert cost_scale(INF, 2) is INF
    assert cost_add(1, 2) == 3
    assert cost_sum([1, INF, 3]) is INF
    assert cost_sum([]) == 0


@given(costs, costs, costs)
def test_cost_add_is_a_commutative_monoid(a, b, c):
    assert cost_add(a, b) == cost_add(b, a)
    assert cost_add(cost_add(a, b), c) == cost_add(a, cost_add(b, c))
    assert cost_add(a, 0) == a


@given(st.one_of(st.integers(min_value=1, max_value=2**64 - 1), st.just(INF)), st.integers(0, 50))
def test_cost_scale_matches_repeated_addition(w, n):
    assert cost_scale(w, n) == cost_sum([w] * n)


def test_cost_is_unbounded_precision():
    w = 2**64 - 1
    assert cost_scale(w, 3) == 3 * w


def test_infinity_ordering():
    assert 10**40 < INF and not INF < INF and INF <= INF
    assert INF + 1 is INF and 1 + INF is INF


def test_query_invariants():
    q = Query((RoleAtom("R", Var("x"), Var("y")),), ("x",))
    assert q.existential_vars() == ["y"] and not q.is_boolean
    assert Query((ConceptAtom("A", "a"),)).is_instance_query
    with pytest.raises(WKBError):
        Query((ConceptAtom("A", "a"),), ("x",))


def test_substitute_grounds_answer_variables():
    q = Query((RoleAtom("R", Var("x"), Var("y")), ConceptAtom("A", Var("y"))), ("x",))
    g = q.substitute({"x": "a"})
    assert g.is_boolean and g.atoms[0].first == "a" and g.existential_vars() == ["y"]


def test_with_assertions_keeps_the_larger_weight():
    alpha = ConceptAssertion("A", "a")
    kb = WeightedKB(abox=((alpha, 1),))
    assert kb.with_assertions([(alpha, INF)]).abox == ((alpha, INF),)
    assert kb.with_assertions([(ConceptAssertion("B", "b"), 2)]).individuals() == ["a", "b"]


def test_individuals_include_nominals(visa):
    assert visa.individuals() == ["p", "b", "c"]
