"""Shear factorizations in the plane model and the identities they carry.

A unipotent shear in SL2 factors exactly into three symmetric matrices of
determinant one whose entries live in the quadratic field Q(sqrt 2):

    upper(t) = left(t) * middle(t) * diag      (exact)
    lower(t) = diag * middle(t) * left(t)      (exact)

with left(t) = (1/sqrt2) [[3t, -1], [-1, 1/t]], middle(t) = [[1/t, 1],
[1, 2t]] and diag = diag(1/sqrt2, sqrt2).  Conjugating by diag halves the
parameter, which is the engine behind the commutator identity and the
rotation residuals checked here.  Square roots of the factors leave the
field, so every check involving them runs in high-precision floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .linalg import (
    DEFAULT_POLICY,
    NotPositiveDefinite,
    OrthogonalityCheck,
    SquareMatrix,
    TolerancePolicy,
    frobenius_distance,
    is_special_orthogonal,
    spd_sqrt,
)
from .scalars import QSqrt2
from .spaces import SpdModel, SpdPoint
from .words import TransvectionWord, transvection, words_equal_as_actions


class ZeroParameter(Exception):
    """Shear parameter must be nonzero."""


class NotUnimodular(Exception):
    """Matrix determinant is not one."""


class FactorizationFailed(Exception):
    """Factorization did not reproduce its input; diagnostic attached."""


def upper_shear(t: Fraction) -> SquareMatrix:
    return SquareMatrix([[Fraction(1), Fraction(t)], [Fraction(0), Fraction(1)]])


def lower_shear(t: Fraction) -> SquareMatrix:
    return SquareMatrix([[Fraction(1), Fraction(0)], [Fraction(t), Fraction(1)]])


HALVING_DIAGONAL = SquareMatrix(
    [
        [QSqrt2(0, Fraction(1, 2)), QSqrt2(0)],
        [QSqrt2(0), QSqrt2(0, 1)],
    ]
)


@dataclass(frozen=True)
class ShearFactors:
    """The three exact symmetric factors of the shears with parameter t.

    ``left`` and ``diag`` have entries in Q(sqrt 2); ``middle`` is
    rational.  All three are symmetric with determinant one exactly;
    ``positive_definite`` records whether left and middle are positive
    (they are exactly when t > 0, and the negative case is reported
    rather than hidden).
    """

    t: Fraction
    left: SquareMatrix
    middle: SquareMatrix
    diag: SquareMatrix

    @property
    def positive_definite(self) -> bool:
        return self.t > 0


def shear_factors(t: Fraction) -> ShearFactors:
    t = Fraction(t)
    if t == 0:
        raise ZeroParameter("shear parameter must be nonzero")
    left = SquareMatrix(
        [
            [QSqrt2(0, Fraction(3, 2) * t), QSqrt2(0, Fraction(-1, 2))],
            [QSqrt2(0, Fraction(-1, 2)), QSqrt2(0, Fraction(1, 2) / t)],
        ]
    )
    middle = SquareMatrix([[1 / t, Fraction(1)], [Fraction(1), 2 * t]])
    factors = ShearFactors(t, left, middle, HALVING_DIAGONAL)
    for m in (factors.left, factors.middle, factors.diag):
        assert m.is_symmetric_exact() and m.det() == 1
    return factors


@dataclass(frozen=True)
class ShearIdentityReport:
    """Exact verdicts for the four factor identities at one parameter.

    ``max_deviation`` is the largest entry of any difference matrix, an
    exact field element; it is zero precisely when all identities hold.
    """

    t: Fraction
    upper_product: bool
    lower_product: bool
    left_halving: bool
    middle_halving: bool
    positive_definite: bool
    max_deviation: QSqrt2

    @property
    def all_identities_hold(self) -> bool:
        return (
            self.upper_product
            and self.lower_product
            and self.left_halving
            and self.middle_halving
        )


def verify_shear_identities(t: Fraction) -> ShearIdentityReport:
    """Check the two product and two halving identities, exactly.

    All four are polynomial identities in the field Q(sqrt 2) and hold for
    every nonzero rational t (positivity of the factors is a separate,
    sign-dependent fact recorded in the report).
    """
    f = shear_factors(t)
    half = shear_factors(t / 2)
    diag_inv = f.diag.inverse()
    deviations = [
        ((f.left @ f.middle @ f.diag) - upper_shear(t).lift_qsqrt2()).max_abs_entry(),
        ((f.diag @ f.middle @ f.left) - lower_shear(t).lift_qsqrt2()).max_abs_entry(),
        ((f.diag @ f.left @ f.diag) - half.left).max_abs_entry(),
        (
            (diag_inv @ f.middle @ diag_inv) - half.middle.lift_qsqrt2()
        ).max_abs_entry(),
    ]
    return ShearIdentityReport(
        t=Fraction(t),
        upper_product=not deviations[0],
        lower_product=not deviations[1],
        left_halving=not deviations[2],
        middle_halving=not deviations[3],
        positive_definite=f.positive_definite,
        max_deviation=max(deviations),
    )


def default_parameter_sweep() -> tuple[Fraction, ...]:
    """Eighths from 1/8 to 8 and their reciprocals, deduplicated."""
    values = {Fraction(k, 8) for k in range(1, 65)}
    values |= {Fraction(8, k) for k in range(1, 65)}
    return tuple(sorted(values))


def factor_shear_spd(t: Fraction, side: str) -> tuple[SquareMatrix, ...]:
    """Exact three-factor SPD decomposition of one shear.

    Returns the factors in product order: (left, middle, diag) multiplies
    to upper(t), (diag, middle, left) to lower(t).  Factors are positive
    definite only for t > 0; negative parameters are rejected here (use
    inverse factorizations instead, see factor_sl2_spd_squares).
    """
    if side not in ("upper", "lower"):
        raise ValueError(f"side must be 'upper' or 'lower', got {side!r}")
    f = shear_factors(t)
    if not f.positive_definite:
        minors = f.left.leading_principal_minors()
        raise NotPositiveDefinite(1, minors[0])
    triple = (
        (f.left, f.middle.lift_qsqrt2(), f.diag)
        if side == "upper"
        else (f.diag, f.middle.lift_qsqrt2(), f.left)
    )
    shear = upper_shear(t) if side == "upper" else lower_shear(t)
    product = triple[0] @ triple[1] @ triple[2]
    assert product == shear.lift_qsqrt2()
    return triple


@dataclass(frozen=True)
class GeneratorWord:
    """Transvection word realizing a shear as a point-reflection motion.

    ``kind`` selects which shear the word acts by: "upper" words act by
    upper(t), "lower" words by lower(t) (congruence Q -> M Q M^T).  The
    transvection points are the exact shear factors, expressed in the
    scalar kind of ``model``.
    """

    kind: str
    t: Fraction
    model: SpdModel
    word: TransvectionWord
    action: SquareMatrix

    def inverse_word(self) -> TransvectionWord:
        return self.word.inverse(self.model)


def build_generator(
    model: SpdModel, kind: str, t: Fraction, policy: TolerancePolicy = DEFAULT_POLICY
) -> GeneratorWord:
    """Build the three-point transvection word acting by a shear.

    The construction is validated eagerly and exactly: the product of the
    three factor matrices must equal the target shear in Q(sqrt 2).  The
    sampled action check (the word moves points the same way the shear
    congruence does) lives in the verification suites.
    """
    if kind not in ("upper", "lower"):
        raise ValueError(f"kind must be 'upper' or 'lower', got {kind!r}")
    if model.n != 2 or model.kind == "rational":
        raise ValueError("generator words need a 2x2 model carrying sqrt 2")
    t = Fraction(t)
    if t == 0:
        raise ZeroParameter("generator parameter must be nonzero")
    if t < 0:
        raise NotPositiveDefinite(1, QSqrt2(0, Fraction(3, 2) * t))
    triple = factor_shear_spd(t, kind)
    points = tuple(SpdPoint._wrap(model._convert(m)) for m in triple)
    action = upper_shear(t) if kind == "upper" else lower_shear(t)
    return GeneratorWord(kind, t, model, TransvectionWord(points), action)


def base_transvection(model: SpdModel) -> TransvectionWord:
    """The transvection at the diagonal halving point."""
    return transvection(SpdPoint._wrap(model._convert(HALVING_DIAGONAL)))


@dataclass(frozen=True)
class CommutatorReport:
    """Sampled and exact evidence for the halving commutator identity."""

    t: Fraction
    samples: int
    commutator_matches: bool
    conjugation_matches: bool
    mirror_matches: bool
    exact_action_identity: bool
    max_residual: object

    @property
    def passed(self) -> bool:
        return (
            self.commutator_matches
            and self.conjugation_matches
            and self.mirror_matches
            and self.exact_action_identity
        )


def verify_commutator_identity(
    model: SpdModel,
    t: Fraction,
    seed: int,
    count: int,
    policy: TolerancePolicy = DEFAULT_POLICY,
) -> CommutatorReport:
    """Check [tr_diag, upper(t)-word] acts like upper(t/2)-word * inverse.

    Three word-level checks run on sampled points: the full commutator
    against the half-minus-full word, the conjugation form (conjugating
    the upper word by tr_diag halves the parameter), and the mirrored
    lower-shear identity.  Independently, the action matrices are
    compared exactly in Q(sqrt 2).
    """
    t = Fraction(t)
    x_full = build_generator(model, "upper", t, policy)
    x_half = build_generator(model, "upper", t / 2, policy)
    y_full = build_generator(model, "lower", t, policy)
    y_half = build_generator(model, "lower", t / 2, policy)
    tr_diag = base_transvection(model)
    tr_diag_inv = tr_diag.inverse(model)

    commutator = tr_diag * x_full.word * tr_diag_inv * x_full.inverse_word()
    rhs = x_half.word * x_full.inverse_word()
    ok_comm, r1 = words_equal_as_actions(model, commutator, rhs, seed, count, policy)

    conjugated = tr_diag * x_full.word * tr_diag_inv
    ok_conj, r2 = words_equal_as_actions(
        model, conjugated, x_half.word, seed, count, policy
    )

    mirror = y_full.word * tr_diag_inv * y_full.inverse_word() * tr_diag
    mirror_rhs = y_full.word * y_half.inverse_word()
    ok_mirror, r3 = words_equal_as_actions(
        model, mirror, mirror_rhs, seed, count, policy
    )

    # Exact route, independent of sampling: multiply the action matrices
    # out in Q(sqrt 2) and compare with the halved shear.
    diag = HALVING_DIAGONAL
    u_full = upper_shear(t).lift_qsqrt2()
    lhs_action = diag @ u_full @ diag.inverse() @ u_full.inverse()
    exact_identity = lhs_action == upper_shear(-t / 2).lift_qsqrt2()

    worst = max(r1, r2, r3)
    return CommutatorReport(
        t, count, ok_comm, ok_conj, ok_mirror, exact_identity, worst
    )


@dataclass(frozen=True)
class RotationResidualReport:
    """Orthogonality defects of the two square-root conjugation products."""

    t: Fraction
    left_check: OrthogonalityCheck
    middle_check: OrthogonalityCheck
    left_certificate: bool
    middle_certificate: bool

    @property
    def passed(self) -> bool:
        return (
            self.left_check.is_special_orthogonal
            and self.middle_check.is_special_orthogonal
            and self.left_certificate
            and self.middle_certificate
        )


def verify_rotation_residuals(
    t: Fraction, policy: TolerancePolicy = DEFAULT_POLICY
) -> RotationResidualReport:
    """Check the square-root mismatch products are special orthogonal.

    With a(t), b(t), c the SPD square roots of left(t), middle(t), diag,
    the products a(t/2)^{-1} c^2 a(t) and b(t/2)^{-1} c^{-2} b(t) must be
    rotations.  The float route measures their orthogonality defect; the
    exact route replays the certificate behind it, namely the halving
    identities diag*left(t)*diag = left(t/2) and its middle-factor twin,
    which make each product equal to its own inverse transpose.
    """
    t = Fraction(t)
    if t <= 0:
        raise ZeroParameter("rotation residuals need a positive parameter")
    f = shear_factors(t)
    half = shear_factors(t / 2)
    with policy.precision():
        bits = policy.precision_bits
        a_full = spd_sqrt(f.left.to_real(bits), policy)
        a_half = spd_sqrt(half.left.to_real(bits), policy)
        b_full = spd_sqrt(f.middle.to_real(bits), policy)
        b_half = spd_sqrt(half.middle.to_real(bits), policy)
        c_squared = f.diag.to_real(bits)
        left_product = a_half.inverse() @ c_squared @ a_full
        middle_product = b_half.inverse() @ c_squared.inverse() @ b_full
        left_check = is_special_orthogonal(left_product, policy)
        middle_check = is_special_orthogonal(middle_product, policy)
    diag_inv = f.diag.inverse()
    left_certificate = (f.diag @ f.left @ f.diag) == half.left
    middle_certificate = (
        diag_inv @ f.middle.lift_qsqrt2() @ diag_inv
    ) == half.middle.lift_qsqrt2()
    return RotationResidualReport(
        t, left_check, middle_check, left_certificate, middle_certificate
    )


@dataclass(frozen=True)
class SqrtConsistencyReport:
    """Residuals of re-squared square roots of the three shear factors."""

    t: Fraction
    left_residual: mpmath.mpf
    middle_residual: mpmath.mpf
    diag_residual: mpmath.mpf

    def passed(self, policy: TolerancePolicy = DEFAULT_POLICY) -> bool:
        with policy.precision():
            tol = policy.tol()
            return (
                self.left_residual <= tol
                and self.middle_residual <= tol
                and self.diag_residual <= tol
            )


def verify_sqrt_consistency(
    t: Fraction, policy: TolerancePolicy = DEFAULT_POLICY
) -> SqrtConsistencyReport:
    """Square the float square roots of the factors and measure the gap."""
    t = Fraction(t)
    if t <= 0:
        raise ZeroParameter("square roots need a positive parameter")
    f = shear_factors(t)
    with policy.precision():
        bits = policy.precision_bits
        residuals = []
        for m in (f.left, f.middle, f.diag):
            target = m.to_real(bits)
            root = spd_sqrt(target, policy)
            residuals.append(frobenius_distance(root @ root, target))
    return SqrtConsistencyReport(t, *residuals)


def _shear_sequence(g: SquareMatrix) -> list[tuple[str, Fraction]]:
    """Exact decomposition of an SL2 rational matrix into shears.

    Uses the pivot entry: when the lower-left entry c is nonzero,
    g = upper((a-1)/c) lower(c) upper((d-1)/c); otherwise multiply by
    lower(1) on the right to create a pivot and append the compensating
    lower(-1).  At most four shears result, zero-parameter ones dropped.
    """
    a, b = g[0, 0], g[0, 1]
    c, d = g[1, 0], g[1, 1]
    if c != 0:
        candidates = [
            ("upper", (a - 1) / c),
            ("lower", Fraction(c)),
            ("upper", (d - 1) / c),
        ]
        return [(side, t) for side, t in candidates if t != 0]
    if a == 1 and d == 1:
        return [("upper", Fraction(b))] if b != 0 else []
    shears = _shear_sequence(g @ lower_shear(Fraction(1)))
    shears.append(("lower", Fraction(-1)))
    return shears


def _spd_factors_of_shear(side: str, t: Fraction) -> tuple[SquareMatrix, ...]:
    """SPD factor triple for one shear of either sign of parameter.

    Positive parameters factor directly; negative ones use that the
    inverse of a shear is the shear with negated parameter, so the
    reversed inverses of the positive factorization work (inverses of SPD
    matrices are SPD).
    """
    if t > 0:
        return factor_shear_spd(t, side)
    triple = factor_shear_spd(-t, side)
    return tuple(m.inverse() for m in reversed(triple))


@dataclass(frozen=True)
class Sl2Factorization:
    """A product of squares of SPD matrices reproducing an SL2 element.

    ``spd_factors`` multiply exactly to ``sign * target`` in Q(sqrt 2);
    each ``square_roots`` entry is the float SPD square root of the
    matching factor, so the product of their squares reproduces the
    target within tolerance.
    """

    target: SquareMatrix
    spd_factors: tuple[SquareMatrix, ...]
    square_roots: tuple[SquareMatrix, ...]
    sign: int
    residual: mpmath.mpf


def factor_sl2_spd_squares(
    g: SquareMatrix, policy: TolerancePolicy = DEFAULT_POLICY
) -> Sl2Factorization:
    """Write an SL2 matrix as a product of squares of SPD matrices.

    The shear route keeps everything constructive: decompose into at most
    four shears, factor each shear into three SPD matrices exactly, take
    square roots.  The factor product is asserted exactly; the re-squared
    float product is measured against the input and must stay within the
    policy tolerance.  The sign is always +1 on this route; the field
    exists because consumers of the factorization only need the product
    up to a central sign and record it.
    """
    if g.n != 2:
        raise ValueError("factorization is specific to 2x2 input")
    if not g.is_exact:
        raise ValueError("factorization needs exact rational entries")
    if g.det() != 1:
        raise NotUnimodular(f"determinant is {g.det()}, expected 1")
    factors: list[SquareMatrix] = []
    for side, t in _shear_sequence(g):
        factors.extend(_spd_factors_of_shear(side, t))
    if len(factors) > 12:
        raise FactorizationFailed(
            f"factor budget exceeded: {len(factors)} > 12"
        )
    product = SquareMatrix.identity(2).lift_qsqrt2()
    for m in factors:
        product = product @ m
    if product != g.lift_qsqrt2():
        raise FactorizationFailed(
            f"exact factor product mismatch: {product!r} vs {g!r}"
        )
    with policy.precision():
        bits = policy.precision_bits
        roots = tuple(spd_sqrt(m.to_real(bits), policy) for m in factors)
        recombined = SquareMatrix.identity(2).to_real(bits)
        for h in roots:
            recombined = recombined @ h @ h
        residual = frobenius_distance(recombined, g.to_real(bits))
        if residual > policy.tol():
            raise FactorizationFailed(
                f"re-squared product off by {mpmath.nstr(residual, 8)}"
            )
    return Sl2Factorization(g, tuple(factors), roots, 1, residual)


def minus_identity_word(model: SpdModel, policy: TolerancePolicy = DEFAULT_POLICY) -> TransvectionWord:
    """Transvection word acting by -I (trivially on every SPD point).

    Built as the square of (upper(1)-word, inverse lower(1)-word,
    upper(1)-word), whose action matrix is the square of the quarter-turn
    rotation.  The middle factor encodes the lower shear with parameter
    -1 as an inverse word, keeping every stored point positive definite.
    Eighteen transvections long (each of the six generator words
    contributes three points).
    """
    x_plus = build_generator(model, "upper", Fraction(1), policy)
    y_minus = build_generator(model, "lower", Fraction(1), policy).inverse_word()
    once = x_plus.word * y_minus * x_plus.word
    return once * once
