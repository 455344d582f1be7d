"""Exact derivation towers of finite-dimensional Leibniz algebras over Q.

The package computes, with rational arithmetic throughout, the chain

    Inner <= CAID <= RCAID <= AID <= Der

for a Leibniz algebra given by structure constants: the derivation algebra,
the right multiplications, the almost inner derivations (pointwise images of
right multiplications) and their centrally/right-annihilator restricted
variants.  Membership in AID is decided by a three-stage pipeline - linear
candidate, exact sampling refinement, symbolic case-split certification -
so every reported dimension is either certified exact or explicitly marked
as a probabilistic upper bound.
"""

from .exactlin import (
    Q,
    QONE,
    QZERO,
    NotASubspace,
    RationalMatrix,
    RrefResult,
    Subspace,
    as_rational,
    complement_in,
    format_rational,
    nullspace,
    rref,
    solve_linear,
    subspace_intersect,
    subspace_sum,
)
from .algebra import (
    Annihilators,
    IdentityViolation,
    IndexOutOfRange,
    LeibnizAlgebra,
    NotAnIdeal,
    NotNilpotent,
    SeriesReport,
    SingularMatrix,
    annihilators,
    central_series,
    change_basis,
    direct_sum,
    from_json_dict,
    graded,
    product_span,
    quotient,
    to_json_dict,
)
from .derivations import (
    AidConfig,
    AidResult,
    AnalysisReport,
    CertOutcome,
    DEFAULT_SEED,
    Deviation,
    NotBracketClosed,
    NotInCaid,
    aid_basis_candidate,
    aid_certify,
    aid_refine,
    aid_space,
    aid_witness,
    analysis_report,
    bracket,
    caid_restriction_witness,
    derivation_space,
    endo_to_vec,
    inner_space,
    matrix_unit,
    rcaid_caid,
    refinement_grid,
    restriction_witness,
    subalgebra_nilpotency,
    vec_to_endo,
)
from .catalog import (
    ArityMismatch,
    CatalogEntry,
    CatalogRef,
    ExpectedData,
    ParameterInvalid,
    UnknownCatalogRef,
    expected_for,
    list_entries,
    make,
    parse_ref,
)

__version__ = "0.1.0"

__all__ = [
    "Q",
    "QONE",
    "QZERO",
    "NotASubspace",
    "RationalMatrix",
    "RrefResult",
    "Subspace",
    "as_rational",
    "complement_in",
    "format_rational",
    "nullspace",
    "rref",
    "solve_linear",
    "subspace_intersect",
    "subspace_sum",
    "Annihilators",
    "IdentityViolation",
    "IndexOutOfRange",
    "LeibnizAlgebra",
    "NotAnIdeal",
    "NotNilpotent",
    "SeriesReport",
    "SingularMatrix",
    "annihilators",
    "central_series",
    "change_basis",
    "direct_sum",
    "from_json_dict",
    "graded",
    "product_span",
    "quotient",
    "to_json_dict",
    "AidConfig",
    "AidResult",
    "AnalysisReport",
    "CertOutcome",
    "DEFAULT_SEED",
    "Deviation",
    "NotBracketClosed",
    "NotInCaid",
    "aid_basis_candidate",
    "aid_certify",
    "aid_refine",
    "aid_space",
    "aid_witness",
    "analysis_report",
    "bracket",
    "caid_restriction_witness",
    "derivation_space",
    "endo_to_vec",
    "inner_space",
    "matrix_unit",
    "rcaid_caid",
    "refinement_grid",
    "restriction_witness",
    "subalgebra_nilpotency",
    "vec_to_endo",
    "ArityMismatch",
    "CatalogEntry",
    "CatalogRef",
    "ExpectedData",
    "ParameterInvalid",
    "UnknownCatalogRef",
    "expected_for",
    "list_entries",
    "make",
    "parse_ref",
    "__version__",
]
