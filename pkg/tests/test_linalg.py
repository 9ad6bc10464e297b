import random
from fractions import Fraction

import mpmath
import pytest

from symspace.linalg import (
    DEFAULT_POLICY,
    NotPositiveDefinite,
    NotSymmetric,
    SquareMatrix,
    TolerancePolicy,
    frobenius_distance,
    is_special_orthogonal,
    polar_decompose,
    spd_sqrt,
)
from symspace.scalars import QSqrt2
from symspace.spaces import random_unimodular


def mat(rows):
    return SquareMatrix([[Fraction(x) for x in row] for row in rows])


def to_real(m, bits=128):
    return m.to_real(bits)


def test_identity_and_diagonal_constructors():
    eye = SquareMatrix.identity(3)
    assert eye.entries[0] == (Fraction(1), Fraction(0), Fraction(0))
    d = SquareMatrix.diagonal([Fraction(2), Fraction(1, 2)])
    assert d.det() == 1


def test_exact_determinant_and_inverse():
    g = mat([[1, 1], [0, 1]])
    assert g.det() == 1
    assert g.inverse() == mat([[1, -1], [0, 1]])
    h = mat([[2, 1], [1, 1]])
    assert h.inverse() == mat([[1, -1], [-1, 2]])
    assert h @ h.inverse() == SquareMatrix.identity(2)


def test_three_by_three_inverse():
    g = mat([[1, 2, 3], [0, 1, 4], [0, 0, 1]])
    assert g.det() == 1
    assert g @ g.inverse() == SquareMatrix.identity(3)


def test_singular_inverse_rejected():
    with pytest.raises(Exception):
        mat([[1, 2], [2, 4]]).inverse()


def test_kind_normalization():
    lifted = SquareMatrix([[QSqrt2(1), Fraction(2)], [Fraction(0), QSqrt2(1)]])
    assert isinstance(lifted.entries[0][1], QSqrt2)
    with pytest.raises(TypeError):
        SquareMatrix([[QSqrt2(1), 0.5], [0, 1]])


def test_qsqrt2_matmul_exact():
    c = SquareMatrix(
        [[QSqrt2(0, Fraction(1, 2)), QSqrt2(0)], [QSqrt2(0), QSqrt2(0, 1)]]
    )
    # diag(1/sqrt2, sqrt2) squared is diag(1/2, 2).
    square = c @ c
    assert square.entries[0][0] == QSqrt2(Fraction(1, 2))
    assert square.entries[1][1] == QSqrt2(2)
    assert c.det() == QSqrt2(1)


def test_frobenius_norm_oracle():
    m = to_real(mat([[3, 4], [0, 0]]))
    with DEFAULT_POLICY.precision():
        assert abs(m.frobenius_norm() - 5) < mpmath.mpf(2) ** -100


def test_leading_principal_minors():
    assert mat([[2, 1], [1, 1]]).leading_principal_minors() == [
        Fraction(2),
        Fraction(1),
    ]
    assert mat([[2, 1], [1, 1]]).is_positive_definite()
    assert not mat([[1, 2], [2, 1]]).is_positive_definite()


def test_tolerance_policy_validation():
    with pytest.raises(ValueError):
        TolerancePolicy(abs_tol=Fraction(0))


def test_spd_sqrt_closed_form_2x2():
    # sqrt([[1,1],[1,2]]) = ([[1,1],[1,2]] + I)/sqrt(5) = [[2,1],[1,3]]/sqrt5
    m = to_real(mat([[1, 1], [1, 2]]))
    root = spd_sqrt(m)
    with DEFAULT_POLICY.precision():
        expected = mat([[2, 1], [1, 3]]).to_real(128).scale(1 / mpmath.sqrt(5))
        assert frobenius_distance(root, expected) < mpmath.mpf(2) ** -100
        assert frobenius_distance(root @ root, m) < mpmath.mpf(2) ** -100


def test_spd_sqrt_diagonal():
    m = to_real(mat([[4, 0], [0, Fraction(1, 4)]]))
    root = spd_sqrt(m)
    with DEFAULT_POLICY.precision():
        expected = to_real(mat([[2, 0], [0, Fraction(1, 2)]]))
        assert frobenius_distance(root, expected) < mpmath.mpf(2) ** -100


def test_spd_sqrt_identity():
    eye = to_real(SquareMatrix.identity(2))
    with DEFAULT_POLICY.precision():
        assert frobenius_distance(spd_sqrt(eye), eye) < mpmath.mpf(2) ** -120


def test_spd_sqrt_3x3_iteration():
    m = to_real(mat([[1, 0, 0], [0, 4, 0], [0, 0, 9]]))
    root = spd_sqrt(m)
    with DEFAULT_POLICY.precision():
        expected = to_real(mat([[1, 0, 0], [0, 2, 0], [0, 0, 3]]))
        assert frobenius_distance(root, expected) < mpmath.mpf("1e-30")


def test_spd_sqrt_random_round_trips():
    rng = random.Random(7)
    with DEFAULT_POLICY.precision():
        tol = DEFAULT_POLICY.tol()
        for n in (2, 3):
            for _ in range(25):
                g = random_unimodular(rng, n)
                m = to_real(g @ g.transpose())
                root = spd_sqrt(m)
                assert root.symmetry_defect() <= tol
                assert frobenius_distance(root @ root, m) <= tol


def test_spd_sqrt_rejects_bad_input():
    with pytest.raises(NotSymmetric):
        spd_sqrt(to_real(mat([[1, 2], [0, 1]])))
    with pytest.raises(NotPositiveDefinite):
        spd_sqrt(to_real(mat([[1, 2], [2, 1]])))


def test_is_special_orthogonal():
    rotation = to_real(mat([[0, 1], [-1, 0]]))
    check = is_special_orthogonal(rotation)
    assert check.is_special_orthogonal
    shear = to_real(mat([[1, 1], [0, 1]]))
    assert not is_special_orthogonal(shear).is_special_orthogonal
    swap = to_real(mat([[0, 1], [1, 0]]))  # orthogonal but det -1
    swap_check = is_special_orthogonal(swap)
    assert not swap_check.is_special_orthogonal
    with DEFAULT_POLICY.precision():
        assert swap_check.det_residual > 1


def test_polar_decompose():
    g = to_real(mat([[1, 1], [0, 1]]))
    spd_part, orth_part = polar_decompose(g)
    with DEFAULT_POLICY.precision():
        tol = DEFAULT_POLICY.tol()
        assert frobenius_distance(spd_part @ orth_part, g) <= tol
        assert is_special_orthogonal(orth_part).is_special_orthogonal
        assert spd_part.symmetry_defect() <= tol


def test_max_abs_entry_exact():
    m = mat([[1, -5], [3, 2]])
    assert m.max_abs_entry() == Fraction(5)
    assert (m - m).max_abs_entry() == Fraction(0)
