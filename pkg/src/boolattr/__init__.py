"""Attractor enumeration for Boolean gene regulatory networks with DNF update functions."""

from importlib import resources

from .attractors import COMPLEX, FIXED_POINT, STABLE_CYCLE, Attractor, canonical_rotation, cycle_is_stable
from .engine import AttractorSet, EngineConfig, ExclusionSet, PathAssignment, find_all_attractors
from .errors import (
    BoolNetError,
    CapacityError,
    DomainError,
    ParseError,
    ResourceError,
    SemanticError,
    StructuralError,
)
from .model import (
    BooleanNetwork,
    Dnf,
    Literal,
    Term,
    UpdateMode,
    async_successors,
    derive_interaction_graph,
    eval_dnf,
    format_state,
    negate_dnf,
    parse_state,
    successors,
    sync_step,
    validate_network,
)
from .oracle import build_transition_graph, classify_attractors, terminal_sccs
from .parser import format_network, load_network, parse_network
from .report import RunReport

__version__ = "0.1.0"


def bundled_path(name: str = "two_gene.bnet"):
    """Path of a network file shipped with the package."""
    return resources.files(__package__) / "data" / name


__all__ = [
    "COMPLEX", "FIXED_POINT", "STABLE_CYCLE", "Attractor", "AttractorSet", "BoolNetError",
    "BooleanNetwork", "CapacityError", "Dnf", "DomainError", "EngineConfig", "ExclusionSet",
    "Literal", "ParseError", "PathAssignment", "ResourceError", "RunReport", "SemanticError",
    "StructuralError", "Term", "UpdateMode", "async_successors", "build_transition_graph",
    "bundled_path", "canonical_rotation", "classify_attractors", "cycle_is_stable",
    "derive_interaction_graph", "eval_dnf", "find_all_attractors", "format_network",
    "format_state", "load_network", "negate_dnf", "parse_network", "parse_state",
    "successors", "sync_step", "terminal_sccs", "validate_network",
]
