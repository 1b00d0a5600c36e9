"""Model checking toolkit for first-order logic on colored graphs:
formula parsing and metrics, flips and generators, a relational
evaluator, pebble-game equivalence, bounded-depth tree kernels,
interpretation pipelines, and the graph-to-path reduction."""

from .evaluator import evaluate_free, evaluate_free_with_stats, model_check
from .formulas import Formula, ParseError, Var, parse_formula, render_formula
from .graphs import ColoredGraph, PartitionFlip, apply_flip, gen_path
from .hardness import cross_validate, distance_formula, reduce_to_path
from .interpret import (
    InterpretationScheme,
    apply_interpretation,
    backwards_translate,
    mc_tree,
    mc_treedepth,
    mc_treemodel,
)
from .kernel import KernelResult, kernel_size_bound, reduce_tree, verify_kernel
from .pebble import (
    ResourceLimitError,
    fo_s_equivalent,
    spoiler_distance,
    type_census,
)
from .trees import (
    EliminationForest,
    RootedColoredTree,
    TreeModel,
    compute_elimination_forest,
    validate_elimination_forest,
    validate_tree_model,
)

__all__ = [
    "ColoredGraph",
    "EliminationForest",
    "Formula",
    "InterpretationScheme",
    "KernelResult",
    "ParseError",
    "PartitionFlip",
    "ResourceLimitError",
    "RootedColoredTree",
    "TreeModel",
    "Var",
    "apply_flip",
    "apply_interpretation",
    "backwards_translate",
    "compute_elimination_forest",
    "cross_validate",
    "distance_formula",
    "evaluate_free",
    "evaluate_free_with_stats",
    "fo_s_equivalent",
    "gen_path",
    "kernel_size_bound",
    "mc_tree",
    "mc_treedepth",
    "mc_treemodel",
    "model_check",
    "parse_formula",
    "reduce_to_path",
    "reduce_tree",
    "render_formula",
    "spoiler_distance",
    "type_census",
    "validate_elimination_forest",
    "validate_tree_model",
    "verify_kernel",
]
