import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import concepts, interpretations, weighted_kbs
from wkb.bench.fixtures import ALPHA1, ALPHA2, TAU2, TAU3, visa_fixture
from wkb.core import (
    INF,
    And,
    Bot,
    ConceptAtom,
    Exists,
    Forall,
    Inclusion,
    Name,
    Nominal,
    Not,
    Query,
    RoleAtom,
    Top,
    UnknownIndividual,
    UnknownNominalIndividual,
    Var,
    violation_concept,
)
from wkb.interp import (
    Interpretation,
    concept_extension,
    cost_of,
    find_match,
    is_model,
    satisfies_assertion,
    satisfies_bcq,
    satisfies_inclusion,
    violations_of_abox,
    violations_of_inclusion,
)

NAMED = ("p", "b", "c")
P, B_, C_ = 0, 1, 2


def J_b():
    return Interpretation(NAMED, 0, {"Visa": frozenset({1, 2}), "NoVisa": frozenset({0})}, {"hasNat": frozenset({(0, 1)})})


def I_bc():
    return Interpretation(NAMED, 0, {"Visa": frozenset({1, 2}), "NoVisa": frozenset({0})}, {"hasNat": frozenset({(0, 1), (0, 2)})})


def I_c():
    return Interpretation(NAMED, 0, {"Visa": frozenset({1, 2}), "NoVisa": frozenset({0})}, {"hasNat": frozenset({(0, 2)})})


def test_top_is_the_domain():
    I = Interpretation(("a",), 2)
    assert concept_extension(I, Top) == {0, 1, 2}


def test_forall_is_vacuous_on_elements_without_successors():
    assert concept_extension(J_b(), Forall("hasNat", Not(Nominal("c")))) == {P, B_, C_}


def test_violation_extension_of_tau3():
    assert concept_extension(J_b(), violation_concept(TAU3)) == {P}
    assert violations_of_inclusion(J_b(), TAU3) == {P}
    assert not satisfies_inclusion(J_b(), TAU3)


def test_unknown_nominal():
    with pytest.raises(UnknownNominalIndividual):
        concept_extension(J_b(), Nominal("zz"))


def test_unknown_names_are_empty():
    assert concept_extension(J_b(), Name("Nope")) == frozenset()
    assert concept_extension(J_b(), Exists("nope", Top)) == frozenset()


def test_assertions():
    assert satisfies_assertion(J_b(), ALPHA2)
    assert satisfies_inclusion(J_b(), Inclusion(Bot, Name("X")))
    with pytest.raises(UnknownIndividual):
        satisfies_assertion(Interpretation(("p",)), ALPHA1)


def test_violations_of_tau2():
    assert violations_of_inclusion(I_bc(), TAU2) == {P}
    assert violations_of_inclusion(J_b(), Inclusion(Name("A"), Name("A"))) == frozenset()


def test_violations_of_abox():
    abox = [ALPHA1, ALPHA2]
    assert violations_of_abox(J_b(), abox) == []
    assert violations_of_abox(Interpretation(NAMED), abox) == abox
    assert violations_of_abox(I_c(), abox) == [ALPHA1]


def test_costs():
    kb = visa_fixture()
    assert cost_of(I_bc(), kb) is INF
    assert cost_of(J_b(), kb) == 1
    assert cost_of(I_c(), kb) == 1


def test_cost_requires_embedding():
    with pytest.raises(UnknownIndividual):
        cost_of(Interpretation(("p", "b")), visa_fixture())


def test_literal_example_extensions_cost_three():
    # Visa left empty: b and c vacuously fall under the universal restriction
    I = Interpretation(NAMED, 0, {"NoVisa": frozenset({0})}, {"hasNat": frozenset({(0, 1)})})
    assert cost_of(I, visa_fixture()) == 3


def test_find_match_examples():
    assert satisfies_bcq(J_b(), Query((ConceptAtom("NoVisa", "p"),)))
    assert not satisfies_bcq(Interpretation(("a",)), Query((ConceptAtom("A", Var("x")),)))
    q = Query((RoleAtom("hasNat", "p", Var("x")), ConceptAtom("Visa", Var("x"))))
    m = find_match(J_b(), q)
    assert m[Var("x")] == B_


def test_find_match_prefers_low_ids():
    I = Interpretation(("a",), 2, {"A": frozenset({2, 1})})
    assert find_match(I, Query((ConceptAtom("A", Var("x")),)))[Var("x")] == 1


def test_find_match_respects_binding():
    I = Interpretation(("a",), 2, {"A": frozenset({1, 2})})
    q = Query((ConceptAtom("A", Var("x")),))
    assert find_match(I, q, {Var("x"): 2})[Var("x")] == 2
    assert find_match(I, q, {Var("x"): 0}) is None


def test_json_round_trip():
    I = J_b()
    assert Interpretation.from_json(I.to_json()) == I
    assert I.to_json() == {
        "domain": 3,
        "named": ["p", "b", "c"],
        "concepts": {"NoVisa": [0], "Visa": [1, 2]},
        "roles": {"hasNat": [[0, 1]]},
    }


# ----------------------------------------------------------------- properties


@given(interpretations(), concepts())
def test_forall_is_dual_of_exists(I, c):
    for r in ("R", "S"):
        full = set(range(I.size))
        assert concept_extension(I, Forall(r, c)) == full - concept_extension(I, Exists(r, Not(c)))


@given(interpretations(), concepts(), concepts())
def test_violations_are_the_violation_concept(I, lhs, rhs):
    tau = Inclusion(lhs, rhs)
    assert violations_of_inclusion(I, tau) == concept_extension(I, violation_concept(tau))


def _naive(I, c):
    """Membership straight from the semantics, element by element."""
    n = I.size
    if isinstance(c, Name):
        return {d for d in range(n) if d in I.concepts.get(c.name, ())}
    if c == Top:
        return set(range(n))
    if c == Bot:
        return set()
    if isinstance(c, Nominal):
        return {I.named.index(c.individual)}
    if isinstance(c, And):
        return _naive(I, c.left) & _naive(I, c.right)
    if isinstance(c, Not):
        return set(range(n)) - _naive(I, c.operand)
    if isinstance(c, Exists):
        f = _naive(I, c.filler)
        return {d for d in range(n) if any((d, e) in I.roles.get(c.role, ()) and e in f for e in range(n))}
    if isinstance(c, Forall):
        f = _naive(I, c.filler)
        return {d for d in range(n) if all(e in f for e in range(n) if (d, e) in I.roles.get(c.role, ()))}
    return _naive(I, c.left) | _naive(I, c.right)


@given(interpretations(), concepts())
def test_extension_matches_elementwise_semantics(I, c):
    assert concept_extension(I, c) == _naive(I, c)


@given(interpretations(max_anon=2), weighted_kbs())
def test_zero_cost_iff_model(I, kb):
    assert (cost_of(I, kb) == 0) == is_model(I, kb)


@given(interpretations(max_anon=2), concepts(el_only=True), st.data())
def test_el_concepts_are_monotone(I, c, data):
    n = I.size
    extra_c = data.draw(st.sets(st.integers(0, n), max_size=3))
    extra_r = data.draw(st.sets(st.tuples(st.integers(0, n), st.integers(0, n)), max_size=3))
    bigger = Interpretation(
        I.named,
        I.anon_count + 1,
        {k: v | extra_c for k, v in I.concepts.items()},
        {k: v | extra_r for k, v in I.roles.items()},
    )
    assert concept_extension(I, c) <= concept_extension(bigger, c)


atoms_strategy = st.one_of(
    st.builds(ConceptAtom, st.sampled_from(["A", "B"]), st.sampled_from([Var("x"), Var("y"), Var("z"), Var("w"), "a"])),
    st.builds(
        RoleAtom,
        st.sampled_from(["R", "S"]),
        st.sampled_from([Var("x"), Var("y"), Var("z"), Var("w"), "b"]),
        st.sampled_from([Var("x"), Var("y"), Var("z"), Var("w"), "a"]),
    ),
)


@given(interpretations(max_anon=2), st.lists(atoms_strategy, min_size=1, max_size=4))
def test_bcq_matches_exhaustive_assignment(I, atoms):
    q = Query(tuple(atoms))
    vars_ = q.variables()

    def holds(env):
        def pos(t):
            return env[t.name] if isinstance(t, Var) else I.element(t)

        for a in q.atoms:
            if isinstance(a, ConceptAtom):
                if pos(a.term) not in I.concepts.get(a.concept, ()):
                    return False
            elif (pos(a.first), pos(a.second)) not in I.roles.get(a.role, ()):
                return False
        return True

    expected = any(holds(dict(zip(vars_, combo))) for combo in itertools.product(range(I.size), repeat=len(vars_)))
    assert satisfies_bcq(I, q) == expected
