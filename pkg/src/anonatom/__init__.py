"""Anonymity atoms over teams: checkers, entailment, countermodels, audit."""

__version__ = "0.1.0"

from .atoms import (
    UNBOUNDED,
    Atom,
    DependenceAtom,
    InclusionAtom,
    IndependenceAtom,
    anonymity_degree,
    check_anonymity,
    check_anonymity_via_inclusion,
    check_dependence,
    check_inclusion,
    check_independence,
    check_k_anonymity,
    check_k_anonymity_existential,
    check_k_counting_variant,
    group_distinct_counts,
    satisfies,
)
from .countermodel import (
    CountermodelReport,
    build_anonymity_countermodel,
    build_full_grid_countermodel,
    build_k_anonymity_countermodel,
    verify_countermodel,
    witness_report,
)
from .errors import (
    AnonatomError,
    ArityError,
    ConfigError,
    DomainError,
    FragmentError,
    ParseError,
    ResourceError,
    SchemaError,
    VerificationError,
)
from .inference import (
    AtomSet,
    Derivation,
    Entailment,
    NormalAtom,
    Rule,
    Verdict,
    entails_anonymity,
    entails_k_simple,
    entails_k_saturate,
    is_inconsistent,
    normalize,
    verify_derivation,
)
from .oracle import OracleConfig, OracleResult, OracleStatus, random_team, semantic_entails
from .syntax import format_atom, format_formula, format_sigma, parse_atom, parse_formula, parse_sigma
from .team import Schema, Team, group_by, project
from .teamio import LoadedTeam, load_sigma_file, read_team_csv, write_team_csv
from .teamlogic import (
    AndNode,
    AtomNode,
    ExistsNode,
    Formula,
    ImplNode,
    LiteralNode,
    evaluate,
    extend,
    subteam,
)

__all__ = [
    "__version__",
    "UNBOUNDED",
    "Atom",
    "DependenceAtom",
    "InclusionAtom",
    "IndependenceAtom",
    "anonymity_degree",
    "check_anonymity",
    "check_anonymity_via_inclusion",
    "check_dependence",
    "check_inclusion",
    "check_independence",
    "check_k_anonymity",
    "check_k_anonymity_existential",
    "check_k_counting_variant",
    "group_distinct_counts",
    "satisfies",
    "CountermodelReport",
    "build_anonymity_countermodel",
    "build_full_grid_countermodel",
    "build_k_anonymity_countermodel",
    "verify_countermodel",
    "witness_report",
    "AnonatomError",
    "ArityError",
    "ConfigError",
    "DomainError",
    "FragmentError",
    "ParseError",
    "ResourceError",
    "SchemaError",
    "VerificationError",
    "AtomSet",
    "Derivation",
    "Entailment",
    "NormalAtom",
    "Rule",
    "Verdict",
    "entails_anonymity",
    "entails_k_simple",
    "entails_k_saturate",
    "is_inconsistent",
    "normalize",
    "verify_derivation",
    "OracleConfig",
    "OracleResult",
    "OracleStatus",
    "random_team",
    "semantic_entails",
    "format_atom",
    "format_formula",
    "format_sigma",
    "parse_atom",
    "parse_formula",
    "parse_sigma",
    "Schema",
    "Team",
    "group_by",
    "project",
    "LoadedTeam",
    "load_sigma_file",
    "read_team_csv",
    "write_team_csv",
    "AndNode",
    "AtomNode",
    "ExistsNode",
    "Formula",
    "ImplNode",
    "LiteralNode",
    "evaluate",
    "extend",
    "subteam",
]
