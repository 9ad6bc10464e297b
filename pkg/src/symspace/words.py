"""Words in point reflections and their sampled action-equality oracle.

A reflection word is a finite sequence of points p1..pk denoting the
composite map sigma_{p1} o ... o sigma_{pk}, where sigma_p(y) = p.y.  A
transvection word is the even case grouped in pairs sigma_x o sigma_o.
Because each generator is an involution, word inversion is letter
reversal; no normal form is kept, and the only equality offered is
equality of sampled actions (equality in the automorphism group, not in
any abstract presentation).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .linalg import DEFAULT_POLICY, SquareMatrix, TolerancePolicy
from .spaces import SpaceModel, SpdModel, SpdPoint, derive_seed


class ReflectionWord:
    """Composite of point reflections, leftmost letter applied last."""

    __slots__ = ("letters",)

    def __init__(self, letters: Sequence) -> None:
        object.__setattr__(self, "letters", tuple(letters))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("ReflectionWord is immutable")

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "ReflectionWord") -> "ReflectionWord":
        return ReflectionWord(self.letters + other.letters)

    def inverse(self) -> "ReflectionWord":
        """Letter reversal; valid because every generator is an involution."""
        return ReflectionWord(tuple(reversed(self.letters)))

    def __repr__(self) -> str:
        return f"ReflectionWord(length={len(self.letters)})"


class TransvectionWord:
    """Word in elementary transvections tr_x = sigma_x o sigma_o.

    Stored as the sequence of transvection points x1..xm, meaning
    tr_{x1} o ... o tr_{xm}.  Inversion and basepoint conjugation stay
    inside transvection form by moving points through the basepoint
    reflection: tr_x^{-1} = tr_{o.x} read backwards, and conjugating
    tr_x by sigma_o gives tr_{o.x}.
    """

    __slots__ = ("points",)

    def __init__(self, points: Sequence) -> None:
        object.__setattr__(self, "points", tuple(points))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("TransvectionWord is immutable")

    def __len__(self) -> int:
        return len(self.points)

    def __mul__(self, other: "TransvectionWord") -> "TransvectionWord":
        return TransvectionWord(self.points + other.points)

    def to_reflection_word(self, model: SpaceModel) -> ReflectionWord:
        """Expand each transvection into its two reflection letters."""
        o = model.base_point
        letters = []
        for p in self.points:
            letters.append(p)
            letters.append(o)
        return ReflectionWord(letters)

    def inverse(self, model: SpaceModel) -> "TransvectionWord":
        o = model.base_point
        return TransvectionWord(
            tuple(model.reflect(o, p) for p in reversed(self.points))
        )

    def conjugate_by_base_symmetry(self, model: SpaceModel) -> "TransvectionWord":
        """The word sigma_o o w o sigma_o, rewritten in transvection form."""
        o = model.base_point
        return TransvectionWord(tuple(model.reflect(o, p) for p in self.points))

    def action_matrix(self, model: SpdModel) -> SquareMatrix:
        """Product of the transvection points (SPD models only).

        The composite of tr_{P1}..tr_{Pm} sends Q to M Q M^T with
        M = P1 P2 ... Pm, so this one matrix carries the whole action.
        """
        product = model.base_point.matrix
        for p in self.points:
            product = product @ p.matrix
        return product

    def __repr__(self) -> str:
        return f"TransvectionWord(length={len(self.points)})"


def transvection(point) -> TransvectionWord:
    return TransvectionWord((point,))


def word_act(model: SpaceModel, word, y):
    """Apply a word to a point, rightmost letter first; empty word is id."""
    if isinstance(word, TransvectionWord):
        word = word.to_reflection_word(model)
    result = y
    for p in reversed(word.letters):
        result = model.reflect(p, result)
    return result


def words_equal_as_actions(
    model: SpaceModel,
    w1,
    w2,
    seed: int,
    count: int,
    policy: TolerancePolicy = DEFAULT_POLICY,
) -> tuple[bool, object]:
    """Sampled equality of two words as maps; returns (verdict, max residual).

    This tests equality inside the automorphism group through `count`
    sampled evaluation points.  It says nothing about equality in an
    abstract presentation of the word group.
    """
    samples = model.sample_points(derive_seed(seed, "action-equality"), count)
    worst = None
    with policy.precision():
        tol = policy.tol()
        for y in samples:
            residual = model.point_residual(
                word_act(model, w1, y), word_act(model, w2, y)
            )
            if worst is None or residual > worst:
                worst = residual
        if model.is_exact:
            return worst == 0, worst
        return worst <= tol, worst


def action_matches_congruence(
    model: SpdModel,
    word,
    matrix: SquareMatrix,
    seed: int,
    count: int,
    policy: TolerancePolicy = DEFAULT_POLICY,
) -> tuple[bool, object]:
    """Check a word acts like Q -> M Q M^T for the given M, on samples."""
    samples = model.sample_points(derive_seed(seed, "congruence"), count)
    m_t = matrix.transpose()
    worst = None
    with policy.precision():
        tol = policy.tol()
        for y in samples:
            expected = SpdPoint._wrap(matrix @ y.matrix @ m_t)
            residual = model.point_residual(word_act(model, word, y), expected)
            if worst is None or residual > worst:
                worst = residual
        if model.is_exact:
            return worst == 0, worst
        return worst <= tol, worst


def check_conjugation_formula(
    model: SpaceModel,
    alpha: ReflectionWord,
    y,
    seed: int,
    count: int,
    policy: TolerancePolicy = DEFAULT_POLICY,
) -> tuple[bool, object]:
    """Verify alpha o sigma_y o alpha^{-1} = sigma_{alpha(y)} on samples."""
    image = word_act(model, alpha, y)
    lhs = alpha * ReflectionWord((y,)) * alpha.inverse()
    rhs = ReflectionWord((image,))
    return words_equal_as_actions(model, lhs, rhs, seed, count, policy)


@dataclass(frozen=True)
class StabilizerReport:
    """Both sides of the fixes-basepoint / centralizes-sigma_o equivalence."""

    fixes_base_point: bool
    centralizes_base_symmetry: bool
    fix_residual: object
    centralize_residual: object

    @property
    def sides_agree(self) -> bool:
        return self.fixes_base_point == self.centralizes_base_symmetry


def check_stabilizer_centralizer(
    model: SpaceModel,
    word: TransvectionWord,
    seed: int,
    count: int,
    policy: TolerancePolicy = DEFAULT_POLICY,
) -> StabilizerReport:
    """Test whether fixing o coincides with commuting with sigma_o.

    The two conditions agree on separative models; the report shows which
    sides hold on this particular word.
    """
    o = model.base_point
    with policy.precision():
        fix_residual = model.point_residual(word_act(model, word, o), o)
        fixes = (
            fix_residual == 0
            if model.is_exact
            else fix_residual <= policy.tol()
        )
    sigma_o = ReflectionWord((o,))
    as_letters = word.to_reflection_word(model)
    centralizes, cent_residual = words_equal_as_actions(
        model, as_letters * sigma_o, sigma_o * as_letters, seed, count, policy
    )
    return StabilizerReport(fixes, centralizes, fix_residual, cent_residual)
