"""Biconnectivity augmentation of outerplanar graphs with bounded pathwidth growth."""
from .decomposition import PathDecomposition, TreeDecomposition, validate_path_decomposition, validate_tree_decomposition
from .embed import check_outerplanar, is_outerplanar, rooted_block_tree
from .errors import (
    ConstructionError,
    DecompositionError,
    DisconnectedGraphError,
    GraphParseError,
    GraphValidationError,
    NotOuterplanarError,
    OpaugError,
    SizeGuardError,
)
from .generate import GenSpec, generate
from .graph import Graph, format_graph, parse_graph
from .oracles import exact_pathwidth, forbidden_subdivision_search
from .pipeline import AugmentResult, augment, format_trace
from .verify import verify_pipeline, verify_result

__all__ = [
    "AugmentResult",
    "ConstructionError",
    "DecompositionError",
    "DisconnectedGraphError",
    "GenSpec",
    "Graph",
    "GraphParseError",
    "GraphValidationError",
    "NotOuterplanarError",
    "OpaugError",
    "PathDecomposition",
    "SizeGuardError",
    "TreeDecomposition",
    "augment",
    "check_outerplanar",
    "exact_pathwidth",
    "forbidden_subdivision_search",
    "format_graph",
    "format_trace",
    "generate",
    "is_outerplanar",
    "parse_graph",
    "rooted_block_tree",
    "validate_path_decomposition",
    "validate_tree_decomposition",
    "verify_pipeline",
    "verify_result",
]
