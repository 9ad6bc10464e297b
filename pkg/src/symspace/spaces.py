"""Point-reflection structures and their sampled axiom batteries.

A space model bundles a point kind, a basepoint, a binary reflection map
``x.y``, and a deterministic point sampler.  Two models ship: the rational
line with ``x.y = 2x - y``, and the unimodular SPD cone in dimension n with
``x.y = X Y^{-1} X``.  A deliberately broken variant (reflection without the
inverse) is kept as a negative control so the batteries are known to be
able to fail.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import DEFAULT_POLICY, SquareMatrix, TolerancePolicy


class InvalidPoint(Exception):
    """Value is not a valid point of the model it was handed to."""


def derive_seed(seed: int, label: str) -> int:
    """Stable 64-bit stream seed for a named sampling context."""
    digest = hashlib.sha256(f"{seed}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


SHEAR_PARAMETERS: tuple[Fraction, ...] = tuple(
    Fraction(k, 8) for k in range(-16, 17) if k != 0
)


def random_unimodular(rng: random.Random, n: int, max_shears: int = 6) -> SquareMatrix:
    """Random product of elementary shears; exact rational entries, det 1.

    Parameters are eighths in [-2, 2], so every entry of the product (and
    of its SPD twist) is a dyadic rational that round-trips losslessly
    through 128-bit floats.
    """
    g = SquareMatrix.identity(n)
    for _ in range(rng.randint(1, max_shears)):
        i = rng.randrange(n)
        j = rng.randrange(n - 1)
        if j >= i:
            j += 1
        t = rng.choice(SHEAR_PARAMETERS)
        g = g @ elementary_shear(n, i, j, t)
    return g


def elementary_shear(n: int, i: int, j: int, t: Fraction) -> SquareMatrix:
    """Identity plus t in the (i, j) slot, i != j."""
    if i == j:
        raise ValueError("shear position must be off-diagonal")
    rows = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
    rows[i][j] = Fraction(t)
    return SquareMatrix(rows)


class SpdPoint:
    """Symmetric positive definite matrix of determinant one.

    Symmetry and the determinant are re-checked on construction (exactly
    for exact scalar kinds, within the policy for float entries), and
    positive definiteness is certified through leading principal minors.
    """

    __slots__ = ("matrix",)

    def __init__(
        self, matrix: SquareMatrix, policy: TolerancePolicy = DEFAULT_POLICY
    ) -> None:
        if matrix.is_exact:
            if not matrix.is_symmetric_exact():
                raise InvalidPoint("point matrix is not symmetric")
            det = matrix.det()
            if det != 1:
                raise InvalidPoint(f"point determinant is {det}, expected 1")
        else:
            with policy.precision():
                if matrix.symmetry_defect() > policy.tol():
                    raise InvalidPoint("point matrix is not symmetric")
                if abs(matrix.det() - 1) > policy.tol():
                    raise InvalidPoint("point determinant is not 1 within tolerance")
        if not matrix.is_positive_definite():
            raise InvalidPoint("point matrix is not positive definite")
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def _wrap(cls, matrix: SquareMatrix) -> "SpdPoint":
        """Wrap without re-validation; callers must guarantee validity."""
        point = object.__new__(cls)
        object.__setattr__(point, "matrix", matrix)
        return point

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("SpdPoint is immutable")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SpdPoint):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"SpdPoint({self.matrix!r})"


class SpaceModel:
    """Shared interface: basepoint, reflection map, sampler, comparison."""

    name: str
    is_exact: bool

    @property
    def base_point(self):
        raise NotImplementedError

    def reflect(self, x, y):
        raise NotImplementedError

    def sample_points(self, seed: int, count: int) -> list:
        raise NotImplementedError

    def validate_point(self, p) -> None:
        raise NotImplementedError

    def point_residual(self, x, y):
        """Distance between two points: exact difference or Frobenius norm."""
        raise NotImplementedError

    def approx_equal(self, x, y, policy: TolerancePolicy = DEFAULT_POLICY) -> bool:
        if self.is_exact:
            return self.point_residual(x, y) == 0
        with policy.precision():
            return self.point_residual(x, y) <= policy.tol()

    def describe_point(self, p) -> str:
        raise NotImplementedError


class RealLineModel(SpaceModel):
    """The rational line with reflection ``x.y = 2x - y`` (exact)."""

    name = "geodesic"
    is_exact = True

    @property
    def base_point(self) -> Fraction:
        return Fraction(0)

    def reflect(self, x: Fraction, y: Fraction) -> Fraction:
        return 2 * x - y

    def sample_points(self, seed: int, count: int) -> list[Fraction]:
        rng = random.Random(derive_seed(seed, "real-line-points"))
        points = []
        for _ in range(count):
            numerator = rng.randint(-512, 512)
            denominator = rng.choice((1, 2, 4, 8))
            points.append(Fraction(numerator, denominator))
        return points

    def validate_point(self, p) -> None:
        if not isinstance(p, (int, Fraction)):
            raise InvalidPoint(f"expected a rational, got {type(p).__name__}")

    def point_residual(self, x: Fraction, y: Fraction) -> Fraction:
        return abs(x - y)

    def describe_point(self, p: Fraction) -> str:
        return str(Fraction(p))


class SpdModel(SpaceModel):
    """Unimodular SPD matrices with reflection ``x.y = X Y^{-1} X``.

    ``kind`` selects the scalar carrier: "rational" and "qsqrt2" compute
    exactly, "real" uses mpf entries at the policy precision.  Samples are
    twists g g^T of random shear products, so rational-kind and real-kind
    samplers replay the identical point set for a given seed.
    """

    def __init__(
        self,
        n: int,
        kind: str = "real",
        name: str | None = None,
        policy: TolerancePolicy = DEFAULT_POLICY,
    ) -> None:
        if kind not in ("rational", "qsqrt2", "real"):
            raise ValueError(f"unknown scalar kind {kind!r}")
        self.n = n
        self.kind = kind
        self.policy = policy
        self.name = name if name is not None else f"sl{n}"
        self.is_exact = kind != "real"

    @property
    def base_point(self) -> SpdPoint:
        return SpdPoint._wrap(self._convert(SquareMatrix.identity(self.n)))

    def _convert(self, matrix: SquareMatrix) -> SquareMatrix:
        if self.kind == "rational":
            return matrix
        if self.kind == "qsqrt2":
            return matrix.lift_qsqrt2()
        return matrix.to_real(self.policy.precision_bits)

    def reflect(self, x: SpdPoint, y: SpdPoint) -> SpdPoint:
        with self.policy.precision():
            return SpdPoint._wrap(x.matrix @ y.matrix.inverse() @ x.matrix)

    def sample_points(self, seed: int, count: int) -> list[SpdPoint]:
        rng = random.Random(derive_seed(seed, f"spd-points-{self.n}"))
        points = []
        for _ in range(count):
            g = random_unimodular(rng, self.n)
            points.append(SpdPoint._wrap(self._convert(g @ g.transpose())))
        return points

    def validate_point(self, p) -> None:
        if not isinstance(p, SpdPoint):
            raise InvalidPoint(f"expected SpdPoint, got {type(p).__name__}")
        if p.matrix.n != self.n:
            raise InvalidPoint(f"expected {self.n}x{self.n} point, got {p.matrix.n}")
        SpdPoint(p.matrix, self.policy)

    def point_from_matrix(self, matrix: SquareMatrix) -> SpdPoint:
        """Validating constructor in this model's scalar kind."""
        return SpdPoint(self._convert(matrix), self.policy)

    def point_residual(self, x: SpdPoint, y: SpdPoint):
        diff = x.matrix - y.matrix
        if self.is_exact:
            return diff.max_abs_entry()
        with self.policy.precision():
            return diff.frobenius_norm()

    def describe_point(self, p: SpdPoint) -> str:
        rows = "; ".join(
            ", ".join(str(x) for x in row) for row in p.matrix.entries
        )
        return f"[{rows}]"


class BrokenSpdModel(SpdModel):
    """Negative control: "reflection" ``x.y = X Y X`` with no inverse.

    Violates the involution axiom (x.(x.y) = X^2 Y X^2 != y generically),
    so batteries run against it must report failures.
    """

    def __init__(self, n: int = 2, kind: str = "real") -> None:
        super().__init__(n, kind, name=f"broken-sl{n}")

    def reflect(self, x: SpdPoint, y: SpdPoint) -> SpdPoint:
        with self.policy.precision():
            return SpdPoint._wrap(x.matrix @ y.matrix @ x.matrix)


MODEL_BUILDERS = {
    "geodesic": lambda: RealLineModel(),
    "sl2": lambda: SpdModel(2, "real"),
    "sl3": lambda: SpdModel(3, "real"),
    "broken-sl2": lambda: BrokenSpdModel(2, "real"),
}


def build_model(name: str) -> SpaceModel:
    try:
        return MODEL_BUILDERS[name]()
    except KeyError:
        raise ValueError(f"unknown model {name!r}") from None


@dataclass(frozen=True)
class AxiomCheck:
    """Outcome of one axiom over a sample batch."""

    axiom: str
    checked: int
    violations: int
    max_residual: object
    witness: str | None = None

    @property
    def passed(self) -> bool:
        return self.violations == 0


@dataclass(frozen=True)
class AxiomReport:
    """Battery outcome for one model; failures are entries, not exceptions."""

    model: str
    sample_count: int
    checks: tuple[AxiomCheck, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def check(self, axiom: str) -> AxiomCheck:
        for entry in self.checks:
            if entry.axiom == axiom:
                return entry
        raise KeyError(axiom)


def _extreme(current, candidate, keep_larger: bool):
    if current is None:
        return candidate
    if keep_larger:
        return candidate if candidate > current else current
    return candidate if candidate < current else current


def check_axioms(
    model: SpaceModel,
    seed: int,
    count: int,
    policy: TolerancePolicy = DEFAULT_POLICY,
) -> AxiomReport:
    """Sampled battery for the four point-reflection axioms.

    The idempotence, involution and distributivity laws are checked on
    `count` sampled triples with the max residual recorded per law.  The
    separation law is checked contrapositively: a violation is a sampled
    pair with x.y matching y while x and y differ (its recorded residual
    is the closest approach, i.e. the minimum of dist(x.y, y)).  A sampled
    pass cannot prove separation; it reports "no violation found".
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    xs = model.sample_points(derive_seed(seed, "axiom-x"), count)
    ys = model.sample_points(derive_seed(seed, "axiom-y"), count)
    zs = model.sample_points(derive_seed(seed, "axiom-z"), count)

    def tol_holds(residual) -> bool:
        if model.is_exact:
            return residual == 0
        return residual <= tol

    with policy.precision():
        tol = policy.tol()
        stats = {name: [0, None, None] for name in ("RS1", "RS2", "RS3", "RS4")}

        def record(name: str, violated: bool, residual, x, y) -> None:
            if violated:
                stats[name][0] += 1
                if stats[name][2] is None:
                    stats[name][2] = (
                        f"x={model.describe_point(x)}, y={model.describe_point(y)}"
                    )
            keep_larger = name != "RS4"
            stats[name][1] = _extreme(stats[name][1], residual, keep_larger)

        for x, y, z in zip(xs, ys, zs):
            r1 = model.point_residual(model.reflect(x, x), x)
            record("RS1", not tol_holds(r1), r1, x, x)
            r2 = model.point_residual(model.reflect(x, model.reflect(x, y)), y)
            record("RS2", not tol_holds(r2), r2, x, y)
            left = model.reflect(x, model.reflect(y, z))
            right = model.reflect(model.reflect(x, y), model.reflect(x, z))
            r3 = model.point_residual(left, right)
            record("RS3", not tol_holds(r3), r3, x, y)
            # Separation, contrapositively: x.y = y must force x = y.
            if not model.approx_equal(x, y, policy):
                r4 = model.point_residual(model.reflect(x, y), y)
                record("RS4", tol_holds(r4), r4, x, y)
    checks = tuple(
        AxiomCheck(name, count, stats[name][0], stats[name][1], stats[name][2])
        for name in ("RS1", "RS2", "RS3", "RS4")
    )
    return AxiomReport(model.name, count, checks)
