"""Reasoning over weighted description-logic knowledge bases."""

from .configs import (
    ConfiguredKB,
    KConfiguration,
    config_kb,
    enumerate_configurations,
    interpretation_satisfies_config,
    is_valid_configuration,
    minimal_configuration_of,
)
from .core import (
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
    Or,
    Query,
    RoleAssertion,
    RoleAtom,
    Top,
    Var,
    WeightedKB,
    WKBError,
    cost_add,
    cost_scale,
    fragment_of,
    k_infty,
    subconcepts,
    validate,
    violation_concept,
)
from .interp import (
    Interpretation,
    concept_extension,
    cost_of,
    find_match,
    satisfies_assertion,
    satisfies_bcq,
    satisfies_inclusion,
    violations_of_abox,
    violations_of_inclusion,
)
from .kernel import compiled_available, default_backend
from .reason import (
    CertainBounded,
    CertainOpt,
    PossibleBounded,
    PossibleOpt,
    Verdict,
    answers,
    bcs,
    entails,
    entails_via_configurations,
    optimal_cost,
)
from .search import (
    DomainBound,
    Found,
    MustAvoid,
    MustSatisfy,
    NoneWithinBound,
    completeness_bound,
    extend_with_query,
    filtrate,
    find_interpretation,
)
from .syntax import ParseError, format_query, parse_query, parse_wkb, serialize_wkb

__all__ = [
    "And",
    "Bot",
    "CertainBounded",
    "CertainOpt",
    "ConceptAssertion",
    "ConceptAtom",
    "ConfiguredKB",
    "DomainBound",
    "Exists",
    "Forall",
    "Found",
    "Fragment",
    "INF",
    "Inclusion",
    "Interpretation",
    "KConfiguration",
    "MustAvoid",
    "MustSatisfy",
    "Name",
    "Nominal",
    "NoneWithinBound",
    "Not",
    "Or",
    "ParseError",
    "PossibleBounded",
    "PossibleOpt",
    "Query",
    "RoleAssertion",
    "RoleAtom",
    "Top",
    "Var",
    "Verdict",
    "WKBError",
    "WeightedKB",
    "answers",
    "bcs",
    "compiled_available",
    "completeness_bound",
    "concept_extension",
    "config_kb",
    "cost_add",
    "cost_of",
    "cost_scale",
    "default_backend",
    "entails",
    "entails_via_configurations",
    "enumerate_configurations",
    "extend_with_query",
    "filtrate",
    "find_interpretation",
    "find_match",
    "format_query",
    "fragment_of",
    "interpretation_satisfies_config",
    "is_valid_configuration",
    "k_infty",
    "minimal_configuration_of",
    "optimal_cost",
    "parse_query",
    "parse_wkb",
    "satisfies_assertion",
    "satisfies_bcq",
    "satisfies_inclusion",
    "serialize_wkb",
    "subconcepts",
    "validate",
    "violation_concept",
    "violations_of_abox",
    "violations_of_inclusion",
]

__version__ = "0.1.0"
