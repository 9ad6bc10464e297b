"""From a matrix group with involution to a pointed reflection space.

The quotient of a group G by the fixed subgroup K of an involution theta
carries the reflection map mu(gK, hK) = twist(g) theta(h) K.  Only the
transpose-inverse involution ships (every model in scope uses it); the
interface keeps theta pluggable so the restriction is visible, not wired
in.  Cosets are compared through their canonical SPD coordinate
twist(g) = g g^T, which identifies G/K with unimodular SPD matrices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .linalg import (
    DEFAULT_POLICY,
    SquareMatrix,
    TolerancePolicy,
    frobenius_distance,
    is_special_orthogonal,
)
from .spaces import SpdModel, SpdPoint, derive_seed, random_unimodular


class NotInGroup(Exception):
    """Matrix fails the group membership predicate."""


class InvolutionNotRespected(Exception):
    """Candidate map breaks a homomorphism or equivariance precondition."""

    def __init__(self, message: str, witness: SquareMatrix) -> None:
        super().__init__(f"{message}; witness = {witness!r}")
        self.witness = witness


def transpose_inverse(g: SquareMatrix) -> SquareMatrix:
    return g.transpose().inverse()


class InvolutiveGroupModel:
    """Special linear group of a fixed dimension with a group involution.

    Membership is det = 1 (exact for exact scalar kinds, within the policy
    for float entries).  The fixed subgroup of the transpose-inverse
    involution is the special orthogonal group, tested through g g^T = I.
    """

    def __init__(
        self,
        n: int,
        name: str | None = None,
        involution: Callable[[SquareMatrix], SquareMatrix] = transpose_inverse,
        policy: TolerancePolicy = DEFAULT_POLICY,
    ) -> None:
        self.n = n
        self.name = name if name is not None else f"sl{n}-group"
        self.involution = involution
        self.policy = policy

    def contains(self, g: SquareMatrix) -> bool:
        if g.n != self.n:
            return False
        if g.is_exact:
            return g.det() == 1
        with self.policy.precision():
            return abs(g.det() - 1) <= self.policy.tol()

    def require_member(self, g: SquareMatrix) -> None:
        if not self.contains(g):
            raise NotInGroup(f"matrix is not in {self.name}: {g!r}")

    def theta(self, g: SquareMatrix) -> SquareMatrix:
        return self.involution(g)

    def in_fixed_subgroup(self, g: SquareMatrix) -> bool:
        """Fixed points of theta; for transpose-inverse, g g^T = I."""
        product = g @ g.transpose()
        identity = SquareMatrix.identity(self.n)
        if g.is_exact:
            return product == identity
        with self.policy.precision():
            return frobenius_distance(
                product, identity.to_real(self.policy.precision_bits)
            ) <= self.policy.tol()

    def sample_elements(self, seed: int, count: int) -> list[SquareMatrix]:
        """Random shear products with exact rational entries, det 1."""
        rng = random.Random(derive_seed(seed, f"group-elements-{self.n}"))
        return [random_unimodular(rng, self.n) for _ in range(count)]

    def check_involution_laws(self, seed: int, count: int = 20) -> bool:
        """Sampled sanity: theta is involutive and a homomorphism."""
        gs = self.sample_elements(derive_seed(seed, "involution-a"), count)
        hs = self.sample_elements(derive_seed(seed, "involution-b"), count)
        for g, h in zip(gs, hs):
            if self.theta(self.theta(g)) != g:
                return False
            if self.theta(g @ h) != self.theta(g) @ self.theta(h):
                return False
        return True


def twist(model: InvolutiveGroupModel, g: SquareMatrix) -> SquareMatrix:
    """The map g -> g theta(g)^{-1}; g g^T for the transpose-inverse case."""
    model.require_member(g)
    return g @ model.theta(g).inverse()


@dataclass(frozen=True)
class Coset:
    """Group element modulo the fixed subgroup, with canonical coordinate.

    Two cosets are equal exactly when their canonical SPD coordinates
    agree; the representative is retained for group-side computations.
    """

    representative: SquareMatrix
    canonical: SquareMatrix

    @classmethod
    def of(cls, model: InvolutiveGroupModel, g: SquareMatrix) -> "Coset":
        return cls(g, twist(model, g))

    def canonical_point(self) -> SpdPoint:
        return SpdPoint._wrap(self.canonical)


def coset_residual(
    x: Coset, y: Coset, policy: TolerancePolicy = DEFAULT_POLICY
):
    """Distance between canonical coordinates (exact or Frobenius)."""
    diff = x.canonical - y.canonical
    if diff.is_exact:
        return diff.max_abs_entry()
    with policy.precision():
        return diff.frobenius_norm()


def gk_reflect(
    model: InvolutiveGroupModel,
    gk: Coset,
    hk: Coset,
    policy: TolerancePolicy = DEFAULT_POLICY,
) -> Coset:
    """Reflection on cosets: (gK, hK) -> twist(g) theta(h) K.

    Computes the result in representative coordinates, then asserts the
    canonical coordinate agrees with the SPD-side formula P Q^{-1} P.
    """
    rep = gk.canonical @ model.theta(hk.representative)
    result = Coset.of(model, rep)
    p, q = gk.canonical, hk.canonical
    spd_route = p @ q.inverse() @ p
    diff = result.canonical - spd_route
    if diff.is_exact:
        agree = diff.max_abs_entry() == 0
    else:
        with policy.precision():
            agree = diff.frobenius_norm() <= policy.tol()
    if not agree:
        raise AssertionError(
            "coset-route and SPD-route reflections disagree; "
            f"difference {diff!r}"
        )
    return result


@dataclass(frozen=True)
class Rs4CriterionReport:
    """Sampled and analytic evidence for twist(G) meeting K only at e."""

    samples: int
    orthogonal_twists: int
    violations: int
    analytic_certificate: bool

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.analytic_certificate


def check_rs4_criterion(
    model: InvolutiveGroupModel,
    seed: int,
    count: int,
    policy: TolerancePolicy = DEFAULT_POLICY,
) -> Rs4CriterionReport:
    """Sample g and confirm: twist(g) orthogonal forces twist(g) = I.

    For transpose-inverse models the statement is that the only special
    orthogonal SPD matrix is the identity, which holds analytically (a
    positive definite orthogonal matrix has all eigenvalues 1); the flag
    records that certified fact alongside the sampled search.
    """
    identity = SquareMatrix.identity(model.n)
    orthogonal_found = 0
    violations = 0
    for g in model.sample_elements(derive_seed(seed, "rs4-criterion"), count):
        tau = twist(model, g)
        with policy.precision():
            check = is_special_orthogonal(tau, policy)
        if check.is_special_orthogonal:
            orthogonal_found += 1
            if tau.is_exact:
                equal = tau == identity
            else:
                with policy.precision():
                    equal = frobenius_distance(
                        tau, identity.to_real(policy.precision_bits)
                    ) <= policy.tol()
            if not equal:
                violations += 1
    analytic = model.involution is transpose_inverse
    return Rs4CriterionReport(count, orthogonal_found, violations, analytic)


@dataclass(frozen=True)
class CosetMap:
    """Map of quotients induced by a group map respecting the involutions."""

    source: InvolutiveGroupModel
    target: InvolutiveGroupModel
    group_map: Callable[[SquareMatrix], SquareMatrix]

    def __call__(self, coset: Coset) -> Coset:
        return Coset.of(self.target, self.group_map(coset.representative))

    def check_reflection_morphism(
        self,
        seed: int,
        count: int,
        policy: TolerancePolicy = DEFAULT_POLICY,
    ) -> tuple[bool, object]:
        """Image of a reflection equals reflection of images, on samples."""
        gs = self.source.sample_elements(derive_seed(seed, "morphism-g"), count)
        hs = self.source.sample_elements(derive_seed(seed, "morphism-h"), count)
        worst = None
        for g, h in zip(gs, hs):
            x, y = Coset.of(self.source, g), Coset.of(self.source, h)
            via_source = self(gk_reflect(self.source, x, y, policy))
            via_target = gk_reflect(self.target, self(x), self(y), policy)
            residual = coset_residual(via_source, via_target, policy)
            if worst is None or residual > worst:
                worst = residual
        if gs and gs[0].is_exact:
            return worst == 0, worst
        with policy.precision():
            return worst <= policy.tol(), worst


def induce_morphism(
    source: InvolutiveGroupModel,
    target: InvolutiveGroupModel,
    group_map: Callable[[SquareMatrix], SquareMatrix],
    seed: int = 0,
    pair_count: int = 20,
) -> CosetMap:
    """Build the coset map gK -> phi(g)K after sample-checking phi.

    The preconditions (phi is a homomorphism; phi intertwines the two
    involutions) are checked on `pair_count` random pairs, not proved;
    violations are hard errors carrying a witness matrix.
    """
    gs = source.sample_elements(derive_seed(seed, "induce-a"), pair_count)
    hs = source.sample_elements(derive_seed(seed, "induce-b"), pair_count)
    for g, h in zip(gs, hs):
        if group_map(g @ h) != group_map(g) @ group_map(h):
            raise InvolutionNotRespected(
                "map is not a homomorphism on samples", g
            )
        if group_map(source.theta(g)) != target.theta(group_map(g)):
            raise InvolutionNotRespected(
                "map does not intertwine the involutions", g
            )
    return CosetMap(source, target, group_map)


@dataclass(frozen=True)
class BasepointSymmetryReport:
    samples: int
    max_residual: object
    passed: bool


def basepoint_symmetry_is_involution_map(
    model: InvolutiveGroupModel,
    seed: int,
    count: int,
    policy: TolerancePolicy = DEFAULT_POLICY,
) -> BasepointSymmetryReport:
    """Check the basepoint reflection realizes theta on the quotient.

    Reflecting gK through the basepoint must land on theta(g)K; in
    canonical coordinates both sides invert the SPD coordinate.
    """
    base = Coset.of(model, SquareMatrix.identity(model.n))
    worst = None
    exact = True
    for g in model.sample_elements(derive_seed(seed, "base-symmetry"), count):
        coset = Coset.of(model, g)
        reflected = gk_reflect(model, base, coset, policy)
        via_theta = Coset.of(model, model.theta(g))
        residual = coset_residual(reflected, via_theta, policy)
        exact = exact and reflected.canonical.is_exact
        if worst is None or residual > worst:
            worst = residual
    if exact:
        passed = worst == 0
    else:
        with policy.precision():
            passed = worst <= policy.tol()
    return BasepointSymmetryReport(count, worst, passed)


def spd_space_of(
    model: InvolutiveGroupModel, kind: str = "real"
) -> SpdModel:
    """The reflection-space model carried by this group's quotient."""
    return SpdModel(model.n, kind, policy=model.policy)
