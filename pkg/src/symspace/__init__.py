"""Verification workbench for point-reflection geometry on SPD matrices.

The package checks, both exactly and in high-precision floats, that the
reflection law P * Q^{-1} * P on positive definite unimodular matrices
behaves like an abstract point-reflection space: the four defining laws
hold, shears factor into reflection points, the halving commutator and
rotation-residual identities come out, and the rank-two space exhibits a
central half-turn invisible on an embedded plane.  The `symspace` command
line fronts the named suites; see the README for the grammar.
"""

from .linalg import (
    DEFAULT_POLICY,
    NoConvergence,
    NotPositiveDefinite,
    NotSymmetric,
    SingularInput,
    SquareMatrix,
    TolerancePolicy,
    frobenius_distance,
    is_special_orthogonal,
    polar_decompose,
    spd_sqrt,
)
from .scalars import QSqrt2, parse_decimal, parse_rational
from .spaces import (
    InvalidPoint,
    RealLineModel,
    SpdModel,
    SpdPoint,
    build_model,
    check_axioms,
    derive_seed,
)
from .words import (
    ReflectionWord,
    TransvectionWord,
    transvection,
    word_act,
    words_equal_as_actions,
)
from .gk import (
    Coset,
    InvolutiveGroupModel,
    basepoint_symmetry_is_involution_map,
    check_rs4_criterion,
    gk_reflect,
    induce_morphism,
    twist,
)
from .hyperbolic import (
    Sl2Factorization,
    build_generator,
    factor_shear_spd,
    factor_sl2_spd_squares,
    minus_identity_word,
    shear_factors,
    verify_commutator_identity,
    verify_rotation_residuals,
    verify_shear_identities,
    verify_sqrt_consistency,
)
from .embedding import (
    CoconeDiagram,
    DiagramUnsupported,
    PointFactorization,
    check_central_kernel,
    check_perfectness,
    cocone_check,
    demo_sl3_central_extension,
    embed_hyperbolic_plane,
    point_factorization,
)
from .suites import ConfigError, SuiteConfig, run_suite

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_POLICY",
    "NoConvergence",
    "NotPositiveDefinite",
    "NotSymmetric",
    "SingularInput",
    "SquareMatrix",
    "TolerancePolicy",
    "frobenius_distance",
    "is_special_orthogonal",
    "polar_decompose",
    "spd_sqrt",
    "QSqrt2",
    "parse_decimal",
    "parse_rational",
    "InvalidPoint",
    "RealLineModel",
    "SpdModel",
    "SpdPoint",
    "build_model",
    "check_axioms",
    "derive_seed",
    "ReflectionWord",
    "TransvectionWord",
    "transvection",
    "word_act",
    "words_equal_as_actions",
    "Coset",
    "InvolutiveGroupModel",
    "basepoint_symmetry_is_involution_map",
    "check_rs4_criterion",
    "gk_reflect",
    "induce_morphism",
    "twist",
    "Sl2Factorization",
    "build_generator",
    "factor_shear_spd",
    "factor_sl2_spd_squares",
    "minus_identity_word",
    "shear_factors",
    "verify_commutator_identity",
    "verify_rotation_residuals",
    "verify_shear_identities",
    "verify_sqrt_consistency",
    "CoconeDiagram",
    "DiagramUnsupported",
    "PointFactorization",
    "check_central_kernel",
    "check_perfectness",
    "cocone_check",
    "demo_sl3_central_extension",
    "embed_hyperbolic_plane",
    "point_factorization",
    "ConfigError",
    "SuiteConfig",
    "run_suite",
    "__version__",
]
