"""Contiguous-tile Boolean matrix factorization.

Factors a binary matrix into a union of rank-1 tiles whose row and column
sets can be ordered so every tile is contiguous (optionally wrapping, and
optionally sharing one node order for symmetric matrices), then renders the
result as circular or linear edge-bundle layouts.
"""

from .bitmat import (
    BinaryMatrix,
    FormatError,
    IndexSet,
    boolean_product,
    boolean_sum,
    dump_dense,
    dump_sparse,
    hamming_error,
    is_cyclic_under,
    is_unimodal_under,
    load_dense,
    load_sparse,
    reconstruct,
    relative_error,
)
from .factorizer import (
    AlternateResult,
    Factorization,
    StepState,
    alternate,
    factorize,
    format_report,
    obmf_step,
    parse_report,
    seeds_all,
    seeds_sample,
    step_weights,
    symmetric_step_weights,
)
from .optset import Counters, best_compatible_set, best_cyclic_set, compute_counters
from .pqtree import PQTree
from .render import RenderSpec, render_circular, render_heatmap, render_linear
from .synth import BlockSpec, flip_noise, gen_blocks, gen_random

__version__ = "0.1.0"

__all__ = [
    "AlternateResult",
    "BinaryMatrix",
    "BlockSpec",
    "Counters",
    "Factorization",
    "FormatError",
    "IndexSet",
    "PQTree",
    "RenderSpec",
    "StepState",
    "alternate",
    "best_compatible_set",
    "best_cyclic_set",
    "boolean_product",
    "boolean_sum",
    "compute_counters",
    "dump_dense",
    "dump_sparse",
    "factorize",
    "flip_noise",
    "format_report",
    "gen_blocks",
    "gen_random",
    "hamming_error",
    "is_cyclic_under",
    "is_unimodal_under",
    "load_dense",
    "load_sparse",
    "obmf_step",
    "parse_report",
    "reconstruct",
    "relative_error",
    "render_circular",
    "render_heatmap",
    "render_linear",
    "seeds_all",
    "seeds_sample",
    "step_weights",
    "symmetric_step_weights",
]
