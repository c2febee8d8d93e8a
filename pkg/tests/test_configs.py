import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from strategies import interpretations, weighted_kbs
from test_interp import I_c, J_b
from wkb.bench.fixtures import ALPHA1, ALPHA2, TAU1, TAU2, TAU3, visa_fixture
from wkb.configs import (
    KConfiguration,
    MissingEntry,
    config_kb,
    enumerate_configurations,
    interpretation_satisfies_config,
    is_valid_configuration,
    minimal_configuration_of,
    satisfies_configured_kb,
)
from wkb.core import INF, InfiniteCost, WeightedKB
from wkb.interp import Interpretation, cost_of, is_model


def gamma(**kw):
    tb = {TAU1: 0, TAU2: 0, TAU3: kw.get("t3", 0)}
    ab = {ALPHA1: kw.get("a1", 0), ALPHA2: kw.get("a2", 0)}
    return KConfiguration(tb, ab, kw.get("k", 1))


def test_validity_examples():
    kb = visa_fixture()
    assert is_valid_configuration(kb, gamma(t3=1), 1)
    assert is_valid_configuration(kb, gamma(), 0)
    assert not is_valid_configuration(kb, gamma(a2=1), 1)
    infinite = KConfiguration({TAU1: 1, TAU2: 0, TAU3: 0}, {ALPHA1: 0, ALPHA2: 0}, 100)
    assert not is_valid_configuration(kb, infinite, 100)


def test_partial_configuration_is_rejected():
    with pytest.raises(MissingEntry):
        is_valid_configuration(visa_fixture(), KConfiguration({TAU3: 0}, {}, 0), 0)


def test_enumeration_examples():
    kb = visa_fixture()
    got = list(enumerate_configurations(kb, 1))
    assert got == [gamma(), gamma(a1=1), gamma(t3=1)]
    assert list(enumerate_configurations(kb, 0)) == [gamma(k=0)]
    assert len(list(enumerate_configurations(WeightedKB(), 5))) == 1


def test_enumeration_counts_for_visa():
    # tau3 takes 0..k, alpha1 one of two, alpha2 needs budget 2
    kb = visa_fixture()
    for k in range(6):
        expected = sum(1 for t in range(k + 1) for a1 in (0, 1) for a2 in (0, 1) if t + a1 + 2 * a2 <= k)
        assert len(list(enumerate_configurations(kb, k))) == expected


def test_config_kb_keeps_capped_inclusion_out_of_hard_part():
    ckb = config_kb(visa_fixture(), gamma(a1=1))
    assert ckb.hard.inclusions == (TAU1, TAU2)
    assert ckb.hard.abox == ((ALPHA2, INF),)
    assert dict(ckb.caps) == {TAU3: 0}


def test_interpretation_satisfies_config_examples():
    kb = visa_fixture()
    assert interpretation_satisfies_config(J_b(), kb, gamma(t3=1))
    assert not interpretation_satisfies_config(J_b(), kb, gamma())
    assert satisfies_configured_kb(J_b(), config_kb(kb, gamma(t3=1)))


def test_minimal_configuration_examples():
    kb = visa_fixture()
    g, c = minimal_configuration_of(J_b(), kb)
    assert g == gamma(t3=1) and c == 1
    g, c = minimal_configuration_of(I_c(), kb)
    assert g == gamma(a1=1) and c == 1


def test_minimal_configuration_rejects_infinite_cost():
    I = Interpretation(("p", "b", "c"), 0, {"Visa": frozenset({0}), "NoVisa": frozenset({0})})
    with pytest.raises(InfiniteCost):
        minimal_configuration_of(I, visa_fixture())


def least_configured_k(I, kb, limit):
    for k in range(limit + 1):
        if any(interpretation_satisfies_config(I, kb, g) for g in enumerate_configurations(kb, k)):
            return k
    return None


@settings(max_examples=40)
@given(interpretations(max_anon=1), weighted_kbs(max_tbox=2, max_abox=3))
def test_cost_is_least_satisfied_budget(I, kb):
    c = cost_of(I, kb)
    assume(c is not INF and c <= 8)
    assert least_configured_k(I, kb, 8) == c


@given(interpretations(max_anon=2), weighted_kbs(max_tbox=2, max_abox=3), st.integers(0, 3), st.data())
def test_config_reading_matches_configured_kb(I, kb, k, data):
    gammas = list(enumerate_configurations(kb, k))
    g = data.draw(st.sampled_from(gammas))
    assert interpretation_satisfies_config(I, kb, g) == satisfies_configured_kb(I, config_kb(kb, g))


@given(weighted_kbs(max_tbox=2, max_abox=3))
def test_enumeration_is_valid_distinct_and_monotone(kb):
    prev = 0
    for k in range(4):
        gammas = list(enumerate_configurations(kb, k))
        assert len(set(gammas)) == len(gammas)
        assert all(is_valid_configuration(kb, g, k) for g in gammas)
        assert len(gammas) >= prev
        prev = len(gammas)


@given(interpretations(max_anon=2), weighted_kbs(finite_only=True))
def test_all_zero_configuration_is_modelhood(I, kb):
    (zero,) = enumerate_configurations(kb, 0)
    assert interpretation_satisfies_config(I, kb, zero) == is_model(I, kb)
