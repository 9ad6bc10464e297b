"""Small dense square matrices over one scalar kind, and SPD factorizations.

Matrices are immutable and generic over the three scalar kinds from
:mod:`symspace.scalars`.  Exact matrices (rational, Q(sqrt2)) support exact
determinants, inverses and equality; float matrices carry 128-bit (by
default) mpmath entries and are always compared through a
:class:`TolerancePolicy`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import mpmath

from .scalars import QSqrt2, fraction_to_mpf, qsqrt2_to_real


class NotSymmetric(Exception):
    """Input matrix is not symmetric (within the active policy)."""


class NotPositiveDefinite(Exception):
    """Input matrix has a non-positive leading principal minor."""

    def __init__(self, order: int, minor: object) -> None:
        super().__init__(f"leading {order}x{order} minor is not positive: {minor}")
        self.order = order
        self.minor = minor


class NoConvergence(Exception):
    """Iterative factorization failed to reach the requested tolerance."""


class SingularInput(Exception):
    """Matrix is singular or has non-positive determinant."""


@dataclass(frozen=True)
class TolerancePolicy:
    """Comparison policy for float computations.

    ``abs_tol`` bounds Frobenius-norm residuals of every approximate check;
    ``precision_bits`` fixes the mpmath working precision for one
    computation context.  Exact comparisons never consult this policy.
    """

    abs_tol: Fraction = Fraction(1, 10**9)
    precision_bits: int = 128
    norm: str = field(default="frobenius", compare=False)

    def __post_init__(self) -> None:
        if self.abs_tol <= 0:
            raise ValueError("abs_tol must be positive")
        if self.precision_bits < 8:
            raise ValueError("precision_bits must be at least 8")

    def precision(self):
        """Context manager pinning the mpmath working precision."""
        return mpmath.workprec(self.precision_bits)

    def tol(self) -> mpmath.mpf:
        with self.precision():
            return fraction_to_mpf(self.abs_tol)


DEFAULT_POLICY = TolerancePolicy()

Scalar = object  # Fraction | QSqrt2 | mpmath.mpf


def _is_exact(x: object) -> bool:
    return isinstance(x, (int, Fraction, QSqrt2))


class SquareMatrix:
    """Immutable n-by-n matrix whose entries share one scalar kind."""

    __slots__ = ("entries",)

    def __init__(self, rows: Iterable[Sequence[Scalar]]) -> None:
        normalized = tuple(tuple(row) for row in rows)
        n = len(normalized)
        if n < 1 or any(len(row) != n for row in normalized):
            raise ValueError("entries must form a non-empty square array")
        has_float = any(isinstance(x, mpmath.mpf) for row in normalized for x in row)
        has_root = any(isinstance(x, QSqrt2) for row in normalized for x in row)
        if has_float:
            if has_root or any(
                not isinstance(x, mpmath.mpf) and not isinstance(x, (int, Fraction))
                for row in normalized
                for x in row
            ):
                raise TypeError("cannot mix float entries with exact kinds")
            normalized = tuple(
                tuple(x if isinstance(x, mpmath.mpf) else fraction_to_mpf(x) for x in row)
                for row in normalized
            )
        elif has_root:
            normalized = tuple(
                tuple(QSqrt2.coerce(x) for x in row) for row in normalized
            )
        else:
            normalized = tuple(tuple(Fraction(x) for x in row) for row in normalized)
        object.__setattr__(self, "entries", normalized)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("SquareMatrix is immutable")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "SquareMatrix":
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, values: Sequence[Scalar]) -> "SquareMatrix":
        n = len(values)
        zero: Scalar = 0
        return cls(
            [[values[i] if i == j else zero for j in range(n)] for i in range(n)]
        )

    # -- basic queries ---------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, idx: tuple) -> Scalar:
        i, j = idx
        return self.entries[i][j]

    @property
    def is_exact(self) -> bool:
        return _is_exact(self.entries[0][0])

    def __repr__(self) -> str:
        rows = "; ".join(
            ", ".join(str(x) for x in row) for row in self.entries
        )
        return f"SquareMatrix[{rows}]"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self.n == other.n and all(
            self.entries[i][j] == other.entries[i][j]
            for i in range(self.n)
            for j in range(self.n)
        )

    def __hash__(self) -> int:
        return hash(self.entries)

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "SquareMatrix") -> "SquareMatrix":
        self._check_same_size(other)
        return SquareMatrix(
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.n)]
                for i in range(self.n)
            ]
        )

    def __sub__(self, other: "SquareMatrix") -> "SquareMatrix":
        self._check_same_size(other)
        return SquareMatrix(
            [
                [self.entries[i][j] - other.entries[i][j] for j in range(self.n)]
                for i in range(self.n)
            ]
        )

    def __neg__(self) -> "SquareMatrix":
        return SquareMatrix([[-x for x in row] for row in self.entries])

    def scale(self, factor: Scalar) -> "SquareMatrix":
        return SquareMatrix([[x * factor for x in row] for row in self.entries])

    def __matmul__(self, other: "SquareMatrix") -> "SquareMatrix":
        self._check_same_size(other)
        n = self.n
        a, b = self.entries, other.entries
        return SquareMatrix(
            [
                [sum((a[i][k] * b[k][j] for k in range(n)), start=a[i][0] * 0) for j in range(n)]
                for i in range(n)
            ]
        )

    def transpose(self) -> "SquareMatrix":
        return SquareMatrix(
            [[self.entries[j][i] for j in range(self.n)] for i in range(self.n)]
        )

    def trace(self) -> Scalar:
        total = self.entries[0][0]
        for i in range(1, self.n):
            total = total + self.entries[i][i]
        return total

    def _check_same_size(self, other: "SquareMatrix") -> None:
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    # -- elimination-based operations -------------------------------------------

    def det(self) -> Scalar:
        """Determinant by Gaussian elimination (exact for exact kinds)."""
        n = self.n
        rows = [list(row) for row in self.entries]
        sign = 1
        det = None
        for col in range(n):
            pivot = self._pick_pivot(rows, col)
            if pivot is None:
                zero = self.entries[0][0] * 0
                return zero
            if pivot != col:
                rows[col], rows[pivot] = rows[pivot], rows[col]
                sign = -sign
            pivot_value = rows[col][col]
            det = pivot_value if det is None else det * pivot_value
            for r in range(col + 1, n):
                if _entry_is_zero(rows[r][col]):
                    continue
                factor = rows[r][col] / pivot_value
                rows[r] = [rows[r][j] - factor * rows[col][j] for j in range(n)]
        return det if sign == 1 else -det

    def inverse(self) -> "SquareMatrix":
        """Inverse by Gauss-Jordan elimination; raises SingularInput."""
        n = self.n
        rows = [list(row) for row in self.entries]
        one = rows[0][0] * 0 + 1
        zero = rows[0][0] * 0
        aug = [rows[i] + [one if i == j else zero for j in range(n)] for i in range(n)]
        for col in range(n):
            pivot = self._pick_pivot(aug, col)
            if pivot is None:
                raise SingularInput("matrix is singular")
            if pivot != col:
                aug[col], aug[pivot] = aug[pivot], aug[col]
            pv = aug[col][col]
            aug[col] = [x / pv for x in aug[col]]
            for r in range(n):
                if r == col or _entry_is_zero(aug[r][col]):
                    continue
                factor = aug[r][col]
                aug[r] = [aug[r][j] - factor * aug[col][j] for j in range(2 * n)]
        return SquareMatrix([row[n:] for row in aug])

    @staticmethod
    def _pick_pivot(rows: list, col: int) -> int | None:
        n = len(rows)
        if _is_exact(rows[col][col]) or not isinstance(rows[col][col], mpmath.mpf):
            for r in range(col, n):
                if not _entry_is_zero(rows[r][col]):
                    return r
            return None
        best, best_mag = None, None
        for r in range(col, n):
            mag = abs(rows[r][col])
            if mag > 0 and (best_mag is None or mag > best_mag):
                best, best_mag = r, mag
        return best

    # -- conversions -------------------------------------------------------------

    def map_entries(self, func: Callable[[Scalar], Scalar]) -> "SquareMatrix":
        return SquareMatrix([[func(x) for x in row] for row in self.entries])

    def lift_qsqrt2(self) -> "SquareMatrix":
        return self.map_entries(QSqrt2.coerce)

    def to_real(self, precision_bits: int = 128) -> "SquareMatrix":
        """Convert exact entries to mpf at the given precision."""

        def conv(x: Scalar) -> mpmath.mpf:
            if isinstance(x, mpmath.mpf):
                return x
            if isinstance(x, QSqrt2):
                return qsqrt2_to_real(x, precision_bits)
            with mpmath.workprec(precision_bits):
                return fraction_to_mpf(x)

        return self.map_entries(conv)

    # -- norms and structure checks ------------------------------------------------

    def max_abs_entry(self) -> Scalar:
        best = abs(self.entries[0][0])
        for row in self.entries:
            for x in row:
                mag = abs(x)
                if mag > best:
                    best = mag
        return best

    def frobenius_norm(self) -> mpmath.mpf:
        """Frobenius norm as an mpf (exact entries are converted first)."""
        total = mpmath.mpf(0)
        for row in self.entries:
            for x in row:
                v = _to_mpf(x)
                total += v * v
        return mpmath.sqrt(total)

    def is_symmetric_exact(self) -> bool:
        return all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.n)
            for j in range(i + 1, self.n)
        )

    def symmetry_defect(self) -> Scalar:
        diff = self - self.transpose()
        return diff.max_abs_entry()

    def leading_principal_minors(self) -> list:
        """Determinants of the upper-left k-by-k blocks, k = 1..n."""
        minors = []
        for k in range(1, self.n + 1):
            block = SquareMatrix([row[:k] for row in self.entries[:k]])
            minors.append(block.det())
        return minors

    def is_positive_definite(self) -> bool:
        """Sylvester test on leading minors; exact for exact kinds."""
        for minor in self.leading_principal_minors():
            if isinstance(minor, QSqrt2):
                if not minor.is_positive():
                    return False
            elif not minor > 0:
                return False
        return True


def _entry_is_zero(x: Scalar) -> bool:
    if isinstance(x, QSqrt2):
        return not bool(x)
    return x == 0


def _to_mpf(x: Scalar) -> mpmath.mpf:
    if isinstance(x, mpmath.mpf):
        return x
    if isinstance(x, QSqrt2):
        return qsqrt2_to_real(x, mpmath.mp.prec)
    return fraction_to_mpf(x)


def frobenius_distance(a: SquareMatrix, b: SquareMatrix) -> mpmath.mpf:
    return (a - b).frobenius_norm()


def _require_spd(m: SquareMatrix, policy: TolerancePolicy) -> None:
    if m.is_exact:
        if not m.is_symmetric_exact():
            raise NotSymmetric("matrix is not symmetric")
        minors = m.leading_principal_minors()
    else:
        if m.symmetry_defect() > policy.tol():
            raise NotSymmetric("matrix is not symmetric within tolerance")
        minors = m.leading_principal_minors()
    for k, minor in enumerate(minors, start=1):
        positive = minor.is_positive() if isinstance(minor, QSqrt2) else minor > 0
        if not positive:
            raise NotPositiveDefinite(k, minor)


def spd_sqrt(
    m: SquareMatrix, policy: TolerancePolicy = DEFAULT_POLICY
) -> SquareMatrix:
    """Symmetric positive definite square root of an SPD matrix.

    Uses the closed form ``(M + sqrt(det) I) / sqrt(tr M + 2 sqrt(det))``
    for 2x2 inputs and a Denman-Beavers iteration for larger sizes,
    converged to ``abs_tol / 10``.  The result S satisfies
    ``||S*S - M|| <= abs_tol`` and is symmetric positive definite.
    """
    with policy.precision():
        work = m if not m.is_exact else m.to_real(policy.precision_bits)
        _require_spd(work, policy)
        n = work.n
        if n == 1:
            root = SquareMatrix([[mpmath.sqrt(work[0, 0])]])
        elif n == 2:
            d = mpmath.sqrt(work.det())
            shifted = work + SquareMatrix.identity(2).to_real(policy.precision_bits).scale(d)
            root = shifted.scale(1 / mpmath.sqrt(work.trace() + 2 * d))
        else:
            root = _denman_beavers(work, policy)
        root = (root + root.transpose()).scale(mpmath.mpf(1) / 2)
        residual = frobenius_distance(root @ root, work)
        if residual > policy.tol():
            raise NoConvergence(
                f"square-root residual {mpmath.nstr(residual, 8)} exceeds tolerance"
            )
        return root


def _denman_beavers(
    m: SquareMatrix, policy: TolerancePolicy, max_iterations: int = 200
) -> SquareMatrix:
    threshold = policy.tol() / 10
    y = m
    z = SquareMatrix.identity(m.n).to_real(policy.precision_bits)
    half = mpmath.mpf(1) / 2
    for _ in range(max_iterations):
        y_next = (y + z.inverse()).scale(half)
        z_next = (z + y.inverse()).scale(half)
        step = frobenius_distance(y_next, y)
        y, z = y_next, z_next
        if step <= threshold:
            return y
    raise NoConvergence("Denman-Beavers iteration did not converge")


@dataclass(frozen=True)
class OrthogonalityCheck:
    """Result of a special-orthogonality test; residuals are always reported."""

    is_special_orthogonal: bool
    orthogonality_residual: mpmath.mpf
    det_residual: mpmath.mpf


def is_special_orthogonal(
    g: SquareMatrix, policy: TolerancePolicy = DEFAULT_POLICY
) -> OrthogonalityCheck:
    """Check ``g g^T = I`` and ``det g = 1`` within the policy tolerance."""
    with policy.precision():
        work = g if not g.is_exact else g.to_real(policy.precision_bits)
        identity = SquareMatrix.identity(work.n).to_real(policy.precision_bits)
        orth_residual = frobenius_distance(work @ work.transpose(), identity)
        det_residual = abs(work.det() - 1)
        tol = policy.tol()
        return OrthogonalityCheck(
            orth_residual <= tol and det_residual <= tol,
            orth_residual,
            det_residual,
        )


def polar_decompose(
    g: SquareMatrix, policy: TolerancePolicy = DEFAULT_POLICY
) -> tuple[SquareMatrix, SquareMatrix]:
    """Split ``g = S * O`` with S symmetric positive definite, O orthogonal.

    S is the SPD square root of ``g g^T``, so the decomposition is the
    canonical coset representative under the transpose-inverse involution.
    """
    with policy.precision():
        work = g if not g.is_exact else g.to_real(policy.precision_bits)
        if not work.det() > 0:
            raise SingularInput("polar decomposition needs positive determinant")
        spd_part = spd_sqrt(work @ work.transpose(), policy)
        orth_part = spd_part.inverse() @ work
        return spd_part, orth_part
