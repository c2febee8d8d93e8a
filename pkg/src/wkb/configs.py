"""k-configurations and the configured KB K_gamma.

A configuration distributes a budget ``k`` over the KB: each finite-weight
inclusion may be violated up to ``gamma(tau)`` times and each finite-weight
assertion may be dropped (``gamma(alpha) = 1``). On finite domains the
number restriction bounding the violations of ``tau`` is just a cardinality
cap, which is how :class:`ConfiguredKB` represents it.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterator, Mapping

from .core import (
    INF,
    Assertion,
    Cost,
    Inclusion,
    InfiniteCost,
    WeightedKB,
    WKBError,
    cost_add,
    cost_scale,
    k_infty,
)
from .interp import Interpretation, cost_of, is_model, satisfies_assertion, violations_of_inclusion


class MissingEntry(WKBError):
    pass


@dataclass(frozen=True, eq=False)
class KConfiguration:
    tbox_allowance: Mapping[Inclusion, int]
    abox_flags: Mapping[Assertion, int]
    budget: Cost

    def __post_init__(self) -> None:
        object.__setattr__(self, "tbox_allowance", MappingProxyType(dict(self.tbox_allowance)))
        object.__setattr__(self, "abox_flags", MappingProxyType(dict(self.abox_flags)))

    def key(self) -> tuple:
        return (tuple(self.tbox_allowance.items()), tuple(self.abox_flags.items()), self.budget)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KConfiguration):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __getitem__(self, item) -> int:
        if item in self.tbox_allowance:
            return self.tbox_allowance[item]
        return self.abox_flags[item]

    def weighted_sum(self, kb: WeightedKB) -> Cost:
        total: Cost = 0
        for tau, w in kb.tbox:
            total = cost_add(total, cost_scale(w, self.tbox_allowance.get(tau, 0)))
        for alpha, w in kb.abox:
            total = cost_add(total, cost_scale(w, self.abox_flags.get(alpha, 0)))
        return total

    def dropped(self) -> frozenset[Assertion]:
        return frozenset(a for a, f in self.abox_flags.items() if f)


@dataclass(frozen=True)
class ConfiguredKB:
    """``hard`` holds K_inf plus the kept assertions, all with infinite weight;
    ``caps`` bounds the violations of each finite-weight inclusion."""

    hard: WeightedKB
    caps: Mapping[Inclusion, int]


def is_valid_configuration(kb: WeightedKB, gamma: KConfiguration, k: Cost) -> bool:
    for tau in kb.inclusions:
        if tau not in gamma.tbox_allowance:
            raise MissingEntry(f"no allowance for inclusion {tau}")
    for alpha in kb.assertions:
        if alpha not in gamma.abox_flags:
            raise MissingEntry(f"no flag for assertion {alpha}")
    if any(v < 0 for v in gamma.tbox_allowance.values()):
        return False
    if any(v not in (0, 1) for v in gamma.abox_flags.values()):
        return False
    return gamma.weighted_sum(kb) <= k


def enumerate_configurations(kb: WeightedKB, k: int) -> Iterator[KConfiguration]:
    """Every valid k-configuration once, lexicographically over the KB order
    (TBox first, then ABox), smaller values first."""
    if k is INF:
        raise WKBError("configurations are enumerated for finite budgets only")
    items: list[tuple[object, object, int]] = []
    for tau, w in kb.tbox:
        items.append(("t", tau, w))
    for alpha, w in kb.abox:
        items.append(("a", alpha, w))
    values = [0] * len(items)

    def rec(i: int, left: int) -> Iterator[KConfiguration]:
        if i == len(items):
            tb = {items[j][1]: values[j] for j in range(len(items)) if items[j][0] == "t"}
            ab = {items[j][1]: values[j] for j in range(len(items)) if items[j][0] == "a"}
            yield KConfiguration(tb, ab, k)
            return
        kind, _, w = items[i]
        if w is INF:
            top = 0
        elif kind == "t":
            top = left // w
        else:
            top = 1 if w <= left else 0
        for v in range(top + 1):
            values[i] = v
            yield from rec(i + 1, left - (0 if w is INF else v * w))
        values[i] = 0

    yield from rec(0, k)


def config_kb(kb: WeightedKB, gamma: KConfiguration) -> ConfiguredKB:
    kinf = k_infty(kb)
    kept = tuple((a, INF) for a, w in kb.abox if w is not INF and gamma.abox_flags.get(a, 0) == 0)
    hard = WeightedKB(kinf.tbox, kinf.abox + kept)
    caps = {tau: gamma.tbox_allowance.get(tau, 0) for tau, w in kb.tbox if w is not INF}
    return ConfiguredKB(hard, caps)


def satisfies_configured_kb(I: Interpretation, ckb: ConfiguredKB) -> bool:
    if not is_model(I, ckb.hard):
        return False
    return all(len(violations_of_inclusion(I, tau)) <= cap for tau, cap in ckb.caps.items())


def interpretation_satisfies_config(I: Interpretation, kb: WeightedKB, gamma: KConfiguration) -> bool:
    for tau, w in kb.tbox:
        allowed = 0 if w is INF else gamma.tbox_allowance.get(tau, 0)
        if len(violations_of_inclusion(I, tau)) > allowed:
            return False
    for alpha, w in kb.abox:
        flag = 0 if w is INF else gamma.abox_flags.get(alpha, 0)
        if flag == 0 and not satisfies_assertion(I, alpha):
            return False
    return True


def minimal_configuration_of(I: Interpretation, kb: WeightedKB) -> tuple[KConfiguration, Cost]:
    """The configuration recording exactly the violations of ``I``."""
    cost = cost_of(I, kb)
    if cost is INF:
        raise InfiniteCost("interpretation has infinite cost")
    tb = {tau: len(violations_of_inclusion(I, tau)) for tau in kb.inclusions}
    ab = {alpha: 0 if satisfies_assertion(I, alpha) else 1 for alpha in kb.assertions}
    return KConfiguration(tb, ab, cost), cost
