"""Exact inference for discrete belief networks via clique-forest propagation."""

from .compiler import compile_network, forest_stats
from .engine import InferenceSession, count_update_operations, query
from .errors import (
    BeliefNetError,
    EvidenceError,
    ImpossibleEvidenceError,
    NetworkFormatError,
    NetworkValidationError,
    StateSpaceCapError,
)
from .network import (
    BeliefNetwork,
    Cpt,
    EvidenceSet,
    Variable,
    merge_networks,
    parse_network,
    serialize_network,
    to_dot,
    topological_order,
    validate,
)
from .oracle import joint, oracle_posterior

__version__ = "0.1.0"

__all__ = [
    "BeliefNetwork",
    "BeliefNetError",
    "Cpt",
    "EvidenceSet",
    "EvidenceError",
    "ImpossibleEvidenceError",
    "InferenceSession",
    "NetworkFormatError",
    "NetworkValidationError",
    "StateSpaceCapError",
    "Variable",
    "compile_network",
    "count_update_operations",
    "forest_stats",
    "joint",
    "merge_networks",
    "oracle_posterior",
    "parse_network",
    "query",
    "serialize_network",
    "to_dot",
    "topological_order",
    "validate",
]
