"""Embedded plane subspaces of higher-rank SPD spaces and what they carry.

A root embedding plants SL2 into SL_n on a chosen row/column pair; the
induced map of quotients embeds the plane model into the bigger SPD
space.  On top of that sit the desk-scale phenomena this package exists
to check: words that die on the subspace but survive in the ambient space
(the central-extension witness), commutator realizations of the halved
generators (perfectness), factorization of arbitrary coset points through
rank-one subspaces, and the two-root cocone for the rank-two space.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .gk import Coset, CosetMap, InvolutiveGroupModel, induce_morphism
from .hyperbolic import (
    FactorizationFailed,
    base_transvection,
    build_generator,
    factor_shear_spd,
    factor_sl2_spd_squares,
    minus_identity_word,
)
from .linalg import (
    DEFAULT_POLICY,
    SquareMatrix,
    TolerancePolicy,
    frobenius_distance,
    spd_sqrt,
)
from .scalars import QSqrt2
from .spaces import SpdModel, SpdPoint, derive_seed, random_unimodular
from .words import TransvectionWord, transvection, word_act, words_equal_as_actions


class DiagramUnsupported(Exception):
    """Only the two-root rank-two diagram ships."""


@dataclass(frozen=True)
class RootEmbedding:
    """SL2 into SL_n on the row/column pair (i, j), identity elsewhere.

    The block placement commutes with transposition and with inversion,
    so it intertwines the transpose-inverse involutions on both sides;
    its image meets the orthogonal subgroup exactly in the embedded
    rotations.
    """

    n: int
    i: int
    j: int

    def __post_init__(self) -> None:
        if not (0 <= self.i < self.j < self.n):
            raise ValueError("need 0 <= i < j < n")

    def embed(self, g: SquareMatrix) -> SquareMatrix:
        if g.n != 2:
            raise ValueError("root embeddings take 2x2 input")
        zero = g[0, 0] * 0
        one = zero + 1
        rows = [
            [one if r == c else zero for c in range(self.n)] for r in range(self.n)
        ]
        pair = (self.i, self.j)
        for r in range(2):
            for c in range(2):
                rows[pair[r]][pair[c]] = g[r, c]
        return SquareMatrix(rows)

    def block_of(self, m: SquareMatrix) -> SquareMatrix:
        pair = (self.i, self.j)
        return SquareMatrix(
            [[m[pair[r], pair[c]] for c in range(2)] for r in range(2)]
        )

    def is_embedded(self, m: SquareMatrix) -> bool:
        """True when m is the embedding of its own (i, j) block."""
        return self.embed(self.block_of(m)) == m


@dataclass(frozen=True)
class EmbeddedSubspace:
    """A plane subspace of an SPD model, with its validated coset map."""

    ambient: SpdModel
    base: SpdModel
    root: RootEmbedding
    coset_map: CosetMap

    def include_point(self, p: SpdPoint) -> SpdPoint:
        return SpdPoint._wrap(self.ambient._convert(self.root.embed(p.matrix)))

    def sample_subspace_points(self, seed: int, count: int) -> list[SpdPoint]:
        return [
            self.include_point(p)
            for p in self.base.sample_points(derive_seed(seed, "subspace"), count)
        ]


def embed_hyperbolic_plane(
    ambient: SpdModel, i: int = 0, j: int = 1, seed: int = 0
) -> EmbeddedSubspace:
    """Embed the plane model into an SPD model on the (i, j) pair.

    The underlying group map is sample-checked for the homomorphism and
    involution-compatibility preconditions before the subspace is handed
    out.
    """
    root = RootEmbedding(ambient.n, i, j)
    source = InvolutiveGroupModel(2, policy=ambient.policy)
    target = InvolutiveGroupModel(ambient.n, policy=ambient.policy)
    coset_map = induce_morphism(source, target, root.embed, seed=seed)
    base = SpdModel(2, ambient.kind, policy=ambient.policy)
    return EmbeddedSubspace(ambient, base, root, coset_map)


def restricted_transvection_sampler(
    sub: EmbeddedSubspace, seed: int, length: int
) -> TransvectionWord:
    """Random word in transvections at embedded subspace points."""
    if length < 1:
        raise ValueError("length must be at least 1")
    return TransvectionWord(tuple(sub.sample_subspace_points(seed, length)))


@dataclass(frozen=True)
class CentralKernelReport:
    """Is the word trivial on the subspace, and if so, is it central?"""

    trivial_on_subspace: bool
    triviality_residual: object
    generators_tested: int
    central: bool
    centrality_residual: object

    @property
    def in_central_kernel(self) -> bool:
        return self.trivial_on_subspace and self.central


def check_central_kernel(
    sub: EmbeddedSubspace,
    word: TransvectionWord,
    seed: int,
    count: int,
    policy: TolerancePolicy = DEFAULT_POLICY,
    eval_points: int = 4,
) -> CentralKernelReport:
    """Triviality on the subspace, then centrality against generators.

    A word that fixes every sampled subspace point is tested for
    commutation (as sampled ambient actions) with `count` random
    restricted transvection generators.  Nontrivial words skip the
    centrality phase; nothing is claimed for them.
    """
    model = sub.ambient
    worst_fix = None
    with policy.precision():
        for p in sub.sample_subspace_points(derive_seed(seed, "kernel-trivial"), count):
            residual = model.point_residual(word_act(model, word, p), p)
            if worst_fix is None or residual > worst_fix:
                worst_fix = residual
        if model.is_exact:
            trivial = worst_fix == 0
        else:
            trivial = worst_fix <= policy.tol()
    if not trivial:
        return CentralKernelReport(False, worst_fix, 0, False, None)
    central = True
    worst_comm = None
    generators = sub.sample_subspace_points(derive_seed(seed, "kernel-generators"), count)
    for index, y in enumerate(generators):
        gen = transvection(y)
        ok, residual = words_equal_as_actions(
            model,
            word * gen,
            gen * word,
            derive_seed(seed, f"kernel-centrality-{index}"),
            eval_points,
            policy,
        )
        central = central and ok
        if worst_comm is None or residual > worst_comm:
            worst_comm = residual
    return CentralKernelReport(True, worst_fix, len(generators), central, worst_comm)


@dataclass(frozen=True)
class CentralExtensionDemo:
    """One witness word certified trivial-on-subspace, moving, and central.

    The float fields come from the 128-bit route on the real model; the
    two ``exact_*`` fields replay the decisive facts in exact arithmetic
    (the action matrix is the embedded half turn, and the witness point
    moves by squared distance exactly eight).
    """

    action_matrix: SquareMatrix
    trivial_on_subspace: bool
    triviality_residual: object
    witness_point: SquareMatrix
    witness_image: SquareMatrix
    witness_displacement: mpmath.mpf
    displacement_target_residual: mpmath.mpf
    moved_sampled_point: bool
    central: bool
    centrality_residual: object
    generators_tested: int
    exact_action_is_half_turn: bool
    exact_displacement_squared_is_eight: bool

    @property
    def passed(self) -> bool:
        return (
            self.trivial_on_subspace
            and self.moved_sampled_point
            and self.central
            and self.exact_action_is_half_turn
            and self.exact_displacement_squared_is_eight
        )


def sl3_witness_point() -> SquareMatrix:
    """Twist of the unit upper-corner shear: [[2,0,1],[0,1,0],[1,0,1]]."""
    shear = SquareMatrix(
        [
            [Fraction(1), Fraction(0), Fraction(1)],
            [Fraction(0), Fraction(1), Fraction(0)],
            [Fraction(0), Fraction(0), Fraction(1)],
        ]
    )
    return shear @ shear.transpose()


def demo_sl3_central_extension(
    seed: int = 0,
    count: int = 50,
    policy: TolerancePolicy = DEFAULT_POLICY,
) -> CentralExtensionDemo:
    """The half-turn word on the embedded plane inside the rank-two space.

    The word acts by diag(-1, -1, 1): every embedded plane point is fixed
    (the signs cancel in the block), yet the corner witness point
    [[2,0,1],[0,1,0],[1,0,1]] moves by Frobenius distance sqrt 8, and the
    word commutes with every sampled restricted generator.  Together this
    exhibits a nontrivial central element acting trivially downstairs.
    The sampled checks run on the float model; the action matrix and the
    squared witness displacement are certified exactly on the side.
    """
    model = SpdModel(3, "real", policy=policy)
    sub = embed_hyperbolic_plane(model, 0, 1, seed=seed)
    plane = SpdModel(2, model.kind, policy=policy)
    word_2x2 = minus_identity_word(plane, policy)
    word = TransvectionWord(
        tuple(
            SpdPoint._wrap(model._convert(sub.root.embed(p.matrix)))
            for p in word_2x2.points
        )
    )

    kernel = check_central_kernel(sub, word, seed, count, policy)

    witness_rational = sl3_witness_point()
    with policy.precision():
        bits = policy.precision_bits
        witness = witness_rational.to_real(bits)
        image = word_act(model, word, SpdPoint._wrap(witness)).matrix
        displacement = (image - witness).frobenius_norm()
        target_residual = abs(displacement - mpmath.sqrt(mpmath.mpf(8)))
        moved = False
        threshold = mpmath.mpf(1) / 10
        for p in model.sample_points(derive_seed(seed, "demo-ambient"), 20):
            moved_by = (
                word_act(model, word, p).matrix - p.matrix
            ).frobenius_norm()
            if moved_by >= threshold:
                moved = True
                break

    # Exact certificates, independent of the float route.
    exact_model = SpdModel(3, "qsqrt2", policy=policy)
    exact_plane = SpdModel(2, "qsqrt2", policy=policy)
    exact_word = TransvectionWord(
        tuple(
            SpdPoint._wrap(sub.root.embed(p.matrix))
            for p in minus_identity_word(exact_plane, policy).points
        )
    )
    action = exact_word.action_matrix(exact_model)
    half_turn = SquareMatrix.diagonal(
        [Fraction(-1), Fraction(-1), Fraction(1)]
    ).lift_qsqrt2()
    exact_witness = witness_rational.lift_qsqrt2()
    exact_image = word_act(
        exact_model, exact_word, SpdPoint._wrap(exact_witness)
    ).matrix
    diff = exact_image - exact_witness
    displacement_squared = sum(
        (x * x for row in diff.entries for x in row), start=QSqrt2(0)
    )
    return CentralExtensionDemo(
        action_matrix=action,
        trivial_on_subspace=kernel.trivial_on_subspace,
        triviality_residual=kernel.triviality_residual,
        witness_point=witness_rational,
        witness_image=image,
        witness_displacement=displacement,
        displacement_target_residual=target_residual,
        moved_sampled_point=moved,
        central=kernel.central,
        centrality_residual=kernel.centrality_residual,
        generators_tested=kernel.generators_tested,
        exact_action_is_half_turn=(action == half_turn),
        exact_displacement_squared_is_eight=(displacement_squared == 8),
    )


def _embedded_generator(
    sub: EmbeddedSubspace, kind: str, t: Fraction, policy: TolerancePolicy
) -> TransvectionWord:
    plane = SpdModel(2, sub.ambient.kind, policy=sub.ambient.policy)
    gen = build_generator(plane, kind, t, policy)
    return TransvectionWord(
        tuple(
            SpdPoint._wrap(sub.ambient._convert(sub.root.embed(p.matrix)))
            for p in gen.word.points
        )
    )


def _embedded_base_transvection(
    sub: EmbeddedSubspace, policy: TolerancePolicy
) -> TransvectionWord:
    plane = SpdModel(2, sub.ambient.kind, policy=sub.ambient.policy)
    tr = base_transvection(plane)
    return TransvectionWord(
        tuple(
            SpdPoint._wrap(sub.ambient._convert(sub.root.embed(p.matrix)))
            for p in tr.points
        )
    )


@dataclass(frozen=True)
class PerfectnessReport:
    """Commutator realizations of the halved generators, ambient-evaluated."""

    t_values: tuple[Fraction, ...]
    upper_realized: bool
    lower_realized: bool
    conjugation_closure: bool
    generation_checked: int
    generation_ok: bool
    max_residual: object

    @property
    def passed(self) -> bool:
        return (
            self.upper_realized
            and self.lower_realized
            and self.conjugation_closure
            and self.generation_ok
        )


def check_perfectness(
    sub: EmbeddedSubspace,
    t_values: tuple[Fraction, ...],
    seed: int,
    count: int = 20,
    policy: TolerancePolicy = DEFAULT_POLICY,
) -> PerfectnessReport:
    """Every halved generator is a commutator of restricted words.

    For each parameter, the upper generator ratio (half times inverse
    full) must match the commutator of the diagonal transvection with the
    full generator word, and mirrored for the lower side; both evaluated
    as sampled actions in the ambient space.  Words over the subspace are
    additionally checked to be closed under basepoint conjugation, and
    sampled ambient transvections are re-derived as words over the root
    subspaces (the generation half of the argument).
    """
    model = sub.ambient
    upper_ok = True
    lower_ok = True
    closure_ok = True
    worst = None
    for t in t_values:
        t = Fraction(t)
        x_full = _embedded_generator(sub, "upper", t, policy)
        x_half = _embedded_generator(sub, "upper", t / 2, policy)
        y_full = _embedded_generator(sub, "lower", t, policy)
        y_half = _embedded_generator(sub, "lower", t / 2, policy)
        tr_diag = _embedded_base_transvection(sub, policy)
        tr_diag_inv = tr_diag.inverse(model)

        commutator = tr_diag * x_full * tr_diag_inv * x_full.inverse(model)
        ratio = x_half * x_full.inverse(model)
        ok, r1 = words_equal_as_actions(
            model, commutator, ratio, derive_seed(seed, f"perfect-upper-{t}"), count, policy
        )
        upper_ok = upper_ok and ok

        mirror = y_full * tr_diag_inv * y_full.inverse(model) * tr_diag
        mirror_ratio = y_full * y_half.inverse(model)
        ok, r2 = words_equal_as_actions(
            model, mirror, mirror_ratio, derive_seed(seed, f"perfect-lower-{t}"), count, policy
        )
        lower_ok = lower_ok and ok

        # Conjugating the upper word by the basepoint reflection must give
        # the inverse lower word, both as stored points and as actions.
        conjugated = x_full.conjugate_by_base_symmetry(model)
        lower_inverse = y_full.inverse(model)
        same_points = conjugated.points == lower_inverse.points
        ok, r3 = words_equal_as_actions(
            model, conjugated, lower_inverse, derive_seed(seed, f"perfect-conj-{t}"), count, policy
        )
        closure_ok = closure_ok and ok and same_points

        for residual in (r1, r2, r3):
            if worst is None or residual > worst:
                worst = residual

    generation_checked = 0
    generation_ok = True
    if model.n > 2:
        rng = random.Random(derive_seed(seed, "perfect-generation"))
        for index in range(5):
            g = random_unimodular(rng, model.n)
            word = ambient_transvection_as_root_words(model, g)
            direct = transvection(
                SpdPoint._wrap(model._convert(g @ g.transpose()))
            )
            ok, r4 = words_equal_as_actions(
                model, word, direct, derive_seed(seed, f"perfect-gen-{index}"), count, policy
            )
            generation_ok = generation_ok and ok
            generation_checked += 1
            if worst is None or r4 > worst:
                worst = r4
    return PerfectnessReport(
        tuple(Fraction(t) for t in t_values),
        upper_ok,
        lower_ok,
        closure_ok,
        generation_checked,
        generation_ok,
        worst,
    )


@dataclass(frozen=True)
class RootShear:
    """Elementary matrix I + t e_{ij}; a shear inside root (min, max)."""

    i: int
    j: int
    t: Fraction

    def matrix(self, n: int) -> SquareMatrix:
        rows = [
            [Fraction(int(r == c)) for c in range(n)] for r in range(n)
        ]
        rows[self.i][self.j] = Fraction(self.t)
        return SquareMatrix(rows)

    @property
    def root_pair(self) -> tuple[int, int]:
        return (min(self.i, self.j), max(self.i, self.j))

    @property
    def side(self) -> str:
        return "upper" if self.i < self.j else "lower"


def elementary_shear_factorization(g: SquareMatrix) -> list[RootShear]:
    """Write an exact unimodular matrix as a product of elementary shears.

    Row-reduces to the identity with add-multiple-of-row operations
    (recorded), then emits the inverses in reverse order.  The pivot is
    nudged to exactly one before each column is cleared, so no diagonal
    leftovers appear.  The product of the returned shears is asserted to
    reproduce the input exactly.
    """
    if not g.is_exact:
        raise ValueError("shear factorization needs exact entries")
    if g.det() != 1:
        raise FactorizationFailed(f"determinant is {g.det()}, expected 1")
    n = g.n
    work = [list(row) for row in g.entries]
    ops: list[RootShear] = []

    def add_row(i: int, j: int, t: Fraction) -> None:
        # row_i += t * row_j, i.e. left multiplication by I + t e_ij.
        if t == 0:
            return
        work[i] = [work[i][c] + t * work[j][c] for c in range(n)]
        ops.append(RootShear(i, j, Fraction(t)))

    for col in range(n - 1):
        if work[col][col] != 1:
            donor = next(
                (r for r in range(col + 1, n) if work[r][col] != 0), None
            )
            if donor is None:
                add_row(col + 1, col, Fraction(1))
                donor = col + 1
            add_row(col, donor, (1 - work[col][col]) / work[donor][col])
        for r in range(col + 1, n):
            add_row(r, col, -work[r][col])
    # Unimodularity forces the last pivot to one; clear above the diagonal.
    assert work[n - 1][n - 1] == 1
    for col in range(n - 1, 0, -1):
        for r in range(col - 1, -1, -1):
            add_row(r, col, -work[r][col])
    assert all(
        work[r][c] == (1 if r == c else 0) for r in range(n) for c in range(n)
    )
    # The recorded ops satisfy O_s ... O_1 g = I, so g is the product of
    # their inverses in recording order.
    shears = [RootShear(op.i, op.j, -op.t) for op in ops]
    product = SquareMatrix.identity(n)
    for shear in shears:
        product = product @ shear.matrix(n)
    if product != g:
        raise FactorizationFailed("shear product does not reproduce input")
    return shears


def ambient_transvection_as_root_words(
    model: SpdModel, g: SquareMatrix
) -> TransvectionWord:
    """Rewrite the transvection at twist(g) as a word over root subspaces.

    With g = s_1 ... s_k a shear product, the twist g g^T is the product
    of the shears and their transposes, and every shear carries an exact
    three-point SPD factorization inside its root plane.  Concatenating
    those factor points (then the same list reversed, for the transpose
    half) gives a word whose action matrix is exactly twist(g).
    """
    forward: list[SpdPoint] = []
    for shear in elementary_shear_factorization(g):
        i, j = shear.root_pair
        root = RootEmbedding(model.n, i, j)
        triple = factor_shear_spd(abs(shear.t), shear.side)
        if shear.t < 0:
            triple = tuple(m.inverse() for m in reversed(triple))
        forward.extend(
            SpdPoint._wrap(model._convert(root.embed(m))) for m in triple
        )
    backward = list(reversed(forward))
    return TransvectionWord(tuple(forward + backward))


@dataclass(frozen=True)
class PointFactorization:
    """Nested-reflection expression reproducing a coset point.

    The expression h1.(o.(h2.(o. ... (hm.o) ...))) evaluates, through the
    reflection map alone, to the canonical point of the input; the
    ``square_roots`` are the float square roots of the exact SPD factors
    whose product is (sign times) the input group element.
    """

    target: SquareMatrix
    canonical_target: SquareMatrix
    spd_factors: tuple[SquareMatrix, ...]
    square_roots: tuple[SquareMatrix, ...]
    sign: int
    expression: str
    exact_match: bool
    float_residual: mpmath.mpf

    @property
    def passed(self) -> bool:
        return self.exact_match and self.float_residual is not None


def _nested_expression(count: int) -> str:
    if count == 0:
        return "o"
    parts = [f"h{k}.(o.(" for k in range(1, count)]
    inner = f"h{count}.o"
    return "".join(parts) + inner + ")" * (2 * (count - 1))


def _evaluate_nested(factors: list[SquareMatrix], identity: SquareMatrix) -> SquareMatrix:
    """Evaluate h1.(o.(h2.( ... (hm.o)))) via P Q^{-1} P reflections."""
    if not factors:
        return identity
    current = factors[-1] @ factors[-1]
    for p in reversed(factors[:-1]):
        current = p @ current @ p
    return current


def point_factorization(
    g: SquareMatrix, policy: TolerancePolicy = DEFAULT_POLICY
) -> PointFactorization:
    """Reproduce the coset point of g by reflections through factor points.

    For 2x2 input the SPD factors come from the shear factorization; for
    3x3 input each elementary shear factor is lifted through its root
    embedding.  The nested reflection expression is evaluated exactly in
    Q(sqrt 2) and compared with twist(g); the float route re-evaluates it
    through the squares of the float square roots.
    """
    if not g.is_exact:
        raise ValueError("point factorization needs exact rational entries")
    if g.det() != 1:
        raise FactorizationFailed(f"determinant is {g.det()}, expected 1")
    if g.n == 2:
        fac = factor_sl2_spd_squares(g, policy)
        factors = list(fac.spd_factors)
        roots = list(fac.square_roots)
        sign = fac.sign
    elif g.n == 3:
        factors = []
        roots = []
        with policy.precision():
            bits = policy.precision_bits
            for shear in elementary_shear_factorization(g):
                i, j = shear.root_pair
                root = RootEmbedding(g.n, i, j)
                triple = factor_shear_spd(abs(shear.t), shear.side)
                if shear.t < 0:
                    triple = tuple(m.inverse() for m in reversed(triple))
                for m in triple:
                    factors.append(root.embed(m))
                    # Square roots respect block embedding, so the cheap
                    # 2x2 closed form suffices for the lifted factors.
                    roots.append(root.embed(spd_sqrt(m.to_real(bits), policy)))
        sign = 1
    else:
        raise ValueError("only 2x2 and 3x3 inputs are supported")

    canonical = (g @ g.transpose()).lift_qsqrt2()
    identity = SquareMatrix.identity(g.n).lift_qsqrt2()
    exact_value = _evaluate_nested([m for m in factors], identity)
    exact_match = exact_value == canonical

    with policy.precision():
        bits = policy.precision_bits
        squared = [h @ h for h in roots]
        float_value = _evaluate_nested(
            squared, SquareMatrix.identity(g.n).to_real(bits)
        )
        float_residual = frobenius_distance(
            float_value, canonical.to_real(bits)
        )
        if float_residual > policy.tol():
            raise FactorizationFailed(
                f"nested float evaluation off by {mpmath.nstr(float_residual, 8)}"
            )
    if not exact_match:
        raise FactorizationFailed("nested exact evaluation missed the target")
    return PointFactorization(
        target=g,
        canonical_target=canonical,
        spd_factors=tuple(factors),
        square_roots=tuple(roots),
        sign=sign,
        expression=_nested_expression(len(factors)),
        exact_match=exact_match,
        float_residual=float_residual,
    )


@dataclass(frozen=True)
class CoconeDiagram:
    """Two rank-one roots inside one rank-two ambient space."""

    name: str = "a2"
    ambient_dimension: int = 3
    rank_one_roots: tuple[tuple[int, int], ...] = ((0, 1), (1, 2))


@dataclass(frozen=True)
class CoconeReport:
    """Commutativity and generation evidence for the two-root diagram."""

    diagram: CoconeDiagram
    basepoints_preserved: bool
    inclusions_commute: bool
    inclusion_residual: object
    morphism_ok: bool
    points_factored: int
    factors_stay_in_roots: bool
    generation_ok: bool
    max_factorization_residual: object

    @property
    def passed(self) -> bool:
        return (
            self.basepoints_preserved
            and self.inclusions_commute
            and self.morphism_ok
            and self.factors_stay_in_roots
            and self.generation_ok
        )


def cocone_check(
    diagram: CoconeDiagram,
    seed: int,
    count: int,
    policy: TolerancePolicy = DEFAULT_POLICY,
) -> CoconeReport:
    """Check the two-root diagram commutes and generates the big space.

    Each rank-one space includes into the rank-two space two ways (its
    root embedding composed with the identity of the big space, and
    directly); the sampled canonical coordinates must agree exactly.
    Generation re-derives `count` sampled coset points through nested
    reflections over root-subspace factors.
    """
    if (
        diagram.name != "a2"
        or diagram.ambient_dimension != 3
        or tuple(diagram.rank_one_roots) != ((0, 1), (1, 2))
    ):
        raise DiagramUnsupported(
            "only the two-root diagram over dimension 3 is supported"
        )
    n = diagram.ambient_dimension
    source = InvolutiveGroupModel(2, policy=policy)
    target = InvolutiveGroupModel(n, policy=policy)
    identity_map = induce_morphism(target, target, lambda m: m, seed=seed)

    basepoints_ok = True
    commute_ok = True
    morphism_ok = True
    worst_inclusion = None
    for root_index, (i, j) in enumerate(diagram.rank_one_roots):
        root = RootEmbedding(n, i, j)
        inclusion = induce_morphism(source, target, root.embed, seed=seed)
        base_image = inclusion(Coset.of(source, SquareMatrix.identity(2)))
        basepoints_ok = basepoints_ok and (
            base_image.canonical == SquareMatrix.identity(n)
        )
        ok, residual = inclusion.check_reflection_morphism(
            derive_seed(seed, f"cocone-morphism-{root_index}"), count, policy
        )
        morphism_ok = morphism_ok and ok
        for g in source.sample_elements(
            derive_seed(seed, f"cocone-two-ways-{root_index}"), count
        ):
            direct = inclusion(Coset.of(source, g))
            via_rank_two = identity_map(direct)
            diff = (direct.canonical - via_rank_two.canonical).max_abs_entry()
            commute_ok = commute_ok and diff == 0
            if worst_inclusion is None or diff > worst_inclusion:
                worst_inclusion = diff

    rng = random.Random(derive_seed(seed, "cocone-generation"))
    allowed_roots = set(diagram.rank_one_roots) | {(0, 2)}
    factored = 0
    in_roots = True
    generation_ok = True
    worst_generation = None
    for _ in range(count):
        g = random_unimodular(rng, n)
        result = point_factorization(g, policy)
        factored += 1
        generation_ok = generation_ok and result.exact_match
        for factor in result.spd_factors:
            pair = _root_pair_of_factor(factor)
            in_roots = in_roots and pair in allowed_roots
        if worst_generation is None or result.float_residual > worst_generation:
            worst_generation = result.float_residual
    return CoconeReport(
        diagram=diagram,
        basepoints_preserved=basepoints_ok,
        inclusions_commute=commute_ok,
        inclusion_residual=worst_inclusion,
        morphism_ok=morphism_ok,
        points_factored=factored,
        factors_stay_in_roots=in_roots,
        generation_ok=generation_ok,
        max_factorization_residual=worst_generation,
    )


def _root_pair_of_factor(factor: SquareMatrix) -> tuple[int, int] | None:
    """Which root plane a block-embedded SPD factor lives in, if any."""
    n = factor.n
    for i in range(n):
        for j in range(i + 1, n):
            root = RootEmbedding(n, i, j)
            if root.is_embedded(factor):
                return (i, j)
    return None
