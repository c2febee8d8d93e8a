"""Hand-written fixtures: the visa example and a few small KBs."""

from __future__ import annotations

from ..core import (
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
    RoleAssertion,
    WeightedKB,
)

VISA = Name("Visa")
NO_VISA = Name("NoVisa")

TAU1 = Inclusion(And(VISA, NO_VISA), Bot)
TAU2 = Inclusion(And(Exists("hasNat", Nominal("c")), Exists("hasNat", Nominal("b"))), Bot)
TAU3 = Inclusion(Forall("hasNat", Not(Nominal("c"))), VISA)
ALPHA1 = RoleAssertion("hasNat", "p", "b")
ALPHA2 = ConceptAssertion("NoVisa", "p")


def visa_fixture() -> WeightedKB:
    """Visa requirements: someone holding nationality b but recorded as not needing a visa."""
    return WeightedKB(
        tbox=((TAU1, INF), (TAU2, INF), (TAU3, 1)),
        abox=((ALPHA1, 1), (ALPHA2, 2)),
    )
