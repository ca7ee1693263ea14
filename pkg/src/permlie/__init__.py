"""Exact Lie-algebra engine for permutation-equivariant qubit operators.

Operators invariant under every qubit permutation expand over symmetrized
Pauli strings P_(kx,ky,kz); this package computes their commutators with
exact integer structure constants, takes Lie closures of generator sets,
verifies the centralizer and class-sum identities, certifies universality
verdicts, and cross-checks everything against an independent word-level
oracle and a numerical spin-coupling decomposition.
"""

from .center import (
    CenterElement,
    CenterReport,
    ClassSumElement,
    central_projection_test,
    make_C,
    make_L,
    make_L_direct,
    verify_center,
)
from .closure import (
    ClosureReport,
    ClosureRun,
    LieBasis,
    Verdicts,
    build_report,
    is_universal_pair,
    lie_closure,
    membership_constraints,
    membership_residual,
    predicted_dim,
    verdicts,
)
from .erratum import (
    ErratumCase,
    ErratumReport,
    build_abc,
    printed_commutators,
    relevant_support,
    to_printed_convention,
    verify_printed_commutators,
)
from .linalg import SparseEchelon
from .oracle import (
    DenseOp,
    class_sum,
    dense_bracket,
    dense_closure,
    densify,
    orbit_words,
    symmetrize,
)
from .schur import (
    IsotypicBlock,
    SchurTransform,
    SubspaceControlReport,
    block_project,
    build_schur_transform,
    certify_subspace_control,
    isotypic_table,
)
from .structure import (
    METHOD_ORBIT,
    METHOD_OVERLAP,
    StructureTable,
    bracket,
    build_table,
    compare_tables,
    load_table,
)
from .symops import (
    AmbientDims,
    ConstraintError,
    DimensionMismatch,
    GeneratorSet,
    PauliTriple,
    ResourceLimitError,
    SymOpVector,
    VerificationError,
    all_triples,
    ambient_dims,
    as_triple,
    check_qubits,
    frac_text,
    orbit_size,
    parse_frac,
    parse_generator_spec,
    preset_generators,
    trace_inner,
    triple_rank,
    triple_sort_key,
)
from .verify import SELECTORS, SuiteReport, run_selector

__version__ = "0.1.0"
