"""Covering approximation spaces over bit-packed characteristic matrices.

Build the type-1 and type-2 characteristic matrices of a block family,
evaluate six rough approximation operators in matrix and set-theoretic form,
compress through consistent quotient maps, and maintain everything
incrementally under block/object additions, deletions and attribute changes.
"""

from .core import (
    Block,
    BlockFamily,
    CoverReport,
    CovroughError,
    InternalCheckError,
    ObjectSet,
    ParseError,
    PreconditionError,
    Universe,
    parse_family,
    serialize_family,
    validate,
)
from .matrix import (
    BoolMatrix,
    TritMatrix,
    bool_product,
    entrywise_join,
    entrywise_meet,
    leq,
    sharp_product,
    transpose,
)
from .charmat import (
    CharCache,
    block_gamma,
    block_pi,
    build_cache,
    definitional_gamma,
    definitional_pi,
    load_state,
    membership_matrix,
    state_json,
)
from .approx import (
    ApproxSextuple,
    EquivalenceReport,
    approx_matrix,
    approx_oracle,
    equivalence_report,
    gram_equals_pi,
    indiscernible,
    neighborhood,
)
from .dynamic import (
    AddBlocks,
    AddObjects,
    DeleteBlocks,
    DeleteObjects,
    Delta,
    IsolateObject,
    MoveObject,
    apply_ae,
    apply_ao,
    apply_ca_isolate,
    apply_ca_move,
    apply_de,
    apply_delta,
    apply_do,
    run_script,
)
from .compress import (
    ConsistentMap,
    approx_via_compression,
    check_consistent,
    induced_family,
    parse_map,
    suggest_consistent_map,
)

__version__ = "0.1.0"

__all__ = [
    "AddBlocks",
    "AddObjects",
    "ApproxSextuple",
    "Block",
    "BlockFamily",
    "BoolMatrix",
    "CharCache",
    "ConsistentMap",
    "CoverReport",
    "CovroughError",
    "DeleteBlocks",
    "DeleteObjects",
    "Delta",
    "EquivalenceReport",
    "InternalCheckError",
    "IsolateObject",
    "MoveObject",
    "ObjectSet",
    "ParseError",
    "PreconditionError",
    "TritMatrix",
    "Universe",
    "apply_ae",
    "apply_ao",
    "apply_ca_isolate",
    "apply_ca_move",
    "apply_de",
    "apply_delta",
    "apply_do",
    "approx_matrix",
    "approx_oracle",
    "approx_via_compression",
    "block_gamma",
    "block_pi",
    "bool_product",
    "build_cache",
    "check_consistent",
    "definitional_gamma",
    "definitional_pi",
    "entrywise_join",
    "entrywise_meet",
    "equivalence_report",
    "gram_equals_pi",
    "indiscernible",
    "induced_family",
    "leq",
    "load_state",
    "membership_matrix",
    "neighborhood",
    "parse_family",
    "parse_map",
    "run_script",
    "serialize_family",
    "sharp_product",
    "state_json",
    "suggest_consistent_map",
    "transpose",
    "validate",
    "__version__",
]
