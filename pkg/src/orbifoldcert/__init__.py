"""Exact certificates for Whittaker modules over cyclic vertex-algebra orbifolds."""

from .kernel import backend_name
from .scalars import (
    CyclotomicPolynomial,
    Rational,
    Scalar,
    cyclotomic_polynomial,
    parse_scalar,
    scalar_invert,
    scalar_is_zero,
    scalar_mul,
)
from .modes import (
    AlgebraSignature,
    Automorphism,
    GeneratorMode,
    OperatorExpr,
    Species,
    Word,
    apply_automorphism,
    average_projector,
    commutator_scalar,
    heisenberg_signature,
    normal_form,
    orthogonal_automorphism,
    parse_operator_expr,
    permutation_automorphism,
    theta_automorphism,
    weyl_cyclic_automorphism,
    weyl_signature,
    word_charge,
)
from .modules import (
    BasisMonomial,
    ConformalData,
    ModuleHandle,
    ModuleVector,
    WhittakerFunction,
    act_expr,
    act_mode,
    act_virasoro,
    build_module,
    conformal_data,
    filtration_basis,
    generalized_eigen_degree,
    heisenberg_whittaker,
    monomial_key,
    parse_module_vector,
    vacuum_whittaker,
    weyl_whittaker,
    whittaker_type,
)
from .orbifold import (
    ChargeDecomposition,
    CyclicAction,
    DeltaLemmaReport,
    DirectSumVector,
    act_mode_on_sum,
    act_on_sum,
    charge_decompose,
    delta_embed,
    delta_extract,
    module_automorphism_image,
    monomial_charge,
    verify_delta_lemma,
)
from .certify import (
    CyclicityCertificate,
    DistinctnessCertificate,
    PipelineReport,
    Scale,
    SeparatorElement,
    SpanBasis,
    VirasoroReport,
    cyclicity_certificate,
    distinctness,
    orbifold_irreducibility_pipeline,
    replay_certificate,
    separator,
    virasoro_check,
)

__all__ = [
    "AlgebraSignature",
    "Automorphism",
    "BasisMonomial",
    "ChargeDecomposition",
    "ConformalData",
    "CyclicAction",
    "CyclicityCertificate",
    "CyclotomicPolynomial",
    "DeltaLemmaReport",
    "DirectSumVector",
    "DistinctnessCertificate",
    "GeneratorMode",
    "ModuleHandle",
    "ModuleVector",
    "OperatorExpr",
    "PipelineReport",
    "Rational",
    "Scalar",
    "Scale",
    "SeparatorElement",
    "SpanBasis",
    "Species",
    "VirasoroReport",
    "WhittakerFunction",
    "Word",
    "act_expr",
    "act_mode",
    "act_mode_on_sum",
    "act_on_sum",
    "act_virasoro",
    "apply_automorphism",
    "average_projector",
    "backend_name",
    "build_module",
    "charge_decompose",
    "commutator_scalar",
    "conformal_data",
    "cyclicity_certificate",
    "cyclotomic_polynomial",
    "delta_embed",
    "delta_extract",
    "distinctness",
    "filtration_basis",
    "generalized_eigen_degree",
    "heisenberg_signature",
    "heisenberg_whittaker",
    "module_automorphism_image",
    "monomial_charge",
    "monomial_key",
    "normal_form",
    "orbifold_irreducibility_pipeline",
    "orthogonal_automorphism",
    "parse_module_vector",
    "parse_operator_expr",
    "parse_scalar",
    "permutation_automorphism",
    "replay_certificate",
    "scalar_invert",
    "scalar_is_zero",
    "scalar_mul",
    "separator",
    "theta_automorphism",
    "vacuum_whittaker",
    "verify_delta_lemma",
    "virasoro_check",
    "weyl_cyclic_automorphism",
    "weyl_signature",
    "weyl_whittaker",
    "whittaker_type",
    "word_charge",
]

__version__ = "0.1.0"
