"""Hypothesis strategies shared by the property tests."""

from hypothesis import strategies as st

from wkb.core import (
    INF,
    And,
    Bot,
    ConceptAssertion,
    Exists,
    Forall,
    Inclusion,
    Name,
    Nominal,
    Not,
    Or,
    RoleAssertion,
    Top,
    WeightedKB,
)
from wkb.interp import Interpretation

CONCEPTS = ("A", "B", "C")
ROLES = ("R", "S")
INDS = ("a", "b")


def concepts(el_only: bool = False, individuals=INDS):
    leaves = [st.sampled_from([Name(c) for c in CONCEPTS]), st.sampled_from([Top, Bot])]
    if not el_only and individuals:
        leaves.append(st.sampled_from([Nominal(i) for i in individuals]))
    leaf = st.one_of(*leaves)

    def extend(inner):
        opts = [
            st.builds(And, inner, inner),
            st.builds(Exists, st.sampled_from(ROLES), inner),
        ]
        if not el_only:
            opts += [
                st.builds(Or, inner, inner),
                st.builds(Not, inner),
                st.builds(Forall, st.sampled_from(ROLES), inner),
            ]
        return st.one_of(*opts)

    return st.recursive(leaf, extend, max_leaves=5)


@st.composite
def interpretations(draw, named=INDS, max_anon=3):
    anon = draw(st.integers(0, max_anon))
    n = len(named) + anon
    elems = st.integers(0, n - 1) if n else st.nothing()
    ce = {c: frozenset(draw(st.sets(elems, max_size=n))) for c in CONCEPTS}
    re_ = {r: frozenset(draw(st.sets(st.tuples(elems, elems), max_size=2 * n))) for r in ROLES}
    return Interpretation(tuple(named), anon, ce, re_)


weights = st.sampled_from([1, 2, 3, INF])


@st.composite
def weighted_kbs(draw, max_tbox=3, max_abox=4, el_only=False, finite_only=False):
    w = st.sampled_from([1, 2, 3]) if finite_only else weights
    tbox = draw(st.lists(st.tuples(st.builds(Inclusion, concepts(el_only), concepts(el_only)), w), max_size=max_tbox))
    assertion = st.one_of(
        st.builds(ConceptAssertion, st.sampled_from(CONCEPTS), st.sampled_from(INDS)),
        st.builds(RoleAssertion, st.sampled_from(ROLES), st.sampled_from(INDS), st.sampled_from(INDS)),
    )
    abox = draw(st.lists(st.tuples(assertion, w), max_size=max_abox))
    return WeightedKB(tuple(dict(tbox).items()), tuple(dict(abox).items()))
