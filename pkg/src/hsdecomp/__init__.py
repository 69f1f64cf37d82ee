"""Superoperator decompositions and inner products on finite-dimensional
Hilbert-Schmidt space.

The d x d complex matrices with the trace inner product model the
Hilbert-Schmidt space over C^d. Superoperators are handled in two
interchangeable representations -- LR-sums eta -> sum_n a_n eta b_n and
dense Liouville matrices -- with constructive routines that expose the
positivity structure of an operator term by term.
"""

from .core import (
    DEFAULT_TOL,
    PositivityClass,
    PositivityReport,
    classify_hermitian,
    fix_phase,
    frob_inner,
    frob_norm,
    hermitian_part,
    hermitian_unit,
    matrix_unit,
    op_norm,
    skew_part,
)
from .exceptions import (
    CertificateInvalidError,
    DegenerateFactorError,
    HsDecompError,
    HypothesisViolatedError,
    InputError,
    NoProgressError,
    NotInnerProductError,
    NotPositiveDefiniteError,
    NotPositiveError,
    NotSelfadjointError,
    NumericalError,
)
from .forms import (
    EquivalenceResult,
    Form,
    FormClass,
    FormKind,
    build_inner_product,
    classify_form,
    equivalence_constants,
    eval_form,
    form_norm,
)
from .pencil import PencilExtremes, pencil_eigh, pencil_extremes
from .posdecomp import (
    DecompositionTrace,
    SignedLRSum,
    SignedTerm,
    TraceStep,
    ZetaCertificate,
    ZetaCheckResult,
    counterexample_superop,
    diag_blocks,
    find_zeta_certificate,
    one_sum_positive,
    pd_decompose,
    two_sum_pd,
    zeta_check,
    zeta_transform,
)
from .superop import (
    LRSum,
    LRTerm,
    adjoint,
    apply_superop,
    classify_superop,
    from_liouville,
    identity_superop,
    reduce_terms,
    selfadjoint_decompose,
    to_liouville,
    transpose_dual,
    unvec,
    vec,
)

__version__ = "0.1.0"
