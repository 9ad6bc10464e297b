"""End-to-end acceptance checks, one verdict line per requirement.

Each test exercises one headline guarantee at its stated tolerance and
prints a single PASS/FAIL line on the real stdout (outside pytest's
capture) so the verdicts are visible in any run mode.
"""

import random
import subprocess
import sys
import time
from fractions import Fraction

import mpmath
import pytest

from symspace.embedding import (
    CoconeDiagram,
    cocone_check,
    demo_sl3_central_extension,
    point_factorization,
)
from symspace.hyperbolic import (
    default_parameter_sweep,
    verify_commutator_identity,
    verify_rotation_residuals,
    verify_shear_identities,
    verify_sqrt_consistency,
)
from symspace.linalg import DEFAULT_POLICY
from symspace.spaces import (
    RealLineModel,
    SpdModel,
    build_model,
    check_axioms,
    derive_seed,
    random_unimodular,
)
from symspace.words import transvection, words_equal_as_actions

ABS_TOL = Fraction(1, 10**9)


@pytest.fixture
def verdict(capfd):
    def emit(name: str, ok: bool, detail: str = "") -> None:
        line = f"{'PASS' if ok else 'FAIL'}  {name}"
        if detail:
            line += f"  [{detail}]"
        with capfd.disabled():
            print("\n" + line, flush=True)
        assert ok, line

    return emit


def test_axiom_battery_with_negative_control(verdict):
    start = time.perf_counter()
    ok = True
    details = []
    for name in ("geodesic", "sl2", "sl3"):
        report = check_axioms(build_model(name), seed=0, count=1000)
        ok = ok and report.passed
        details.append(f"{name}:{'ok' if report.passed else 'FAIL'}")
    control = check_axioms(build_model("broken-sl2"), seed=0, count=1000)
    control_ok = control.check("RS2").violations > 0
    ok = ok and control_ok
    details.append(f"control-detects-rs2:{'ok' if control_ok else 'FAIL'}")
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 10.0
    verdict(
        "axiom battery, 1000 triples per model, tolerance 1e-9, under 10s",
        ok,
        f"{', '.join(details)}, {elapsed:.2f}s",
    )


def test_exact_shear_identities_under_one_second(verdict):
    sweep = default_parameter_sweep()
    assert len(sweep) >= 100
    start = time.perf_counter()
    all_hold = all(verify_shear_identities(t).all_identities_hold for t in sweep)
    elapsed = time.perf_counter() - start
    ok = all_hold and elapsed < 1.0
    verdict(
        "four exact factor identities across the parameter sweep, under 1s",
        ok,
        f"{len(sweep)} parameters, {elapsed:.3f}s",
    )


def test_square_root_consistency(verdict):
    params = [Fraction(k, 8) for k in range(1, 17)]
    params += [Fraction(3), Fraction(4), Fraction(6), Fraction(8)]
    assert len(params) == 20
    worst = None
    with DEFAULT_POLICY.precision():
        tol = DEFAULT_POLICY.tol()
        ok = True
        for t in params:
            report = verify_sqrt_consistency(t)
            ok = ok and report.passed()
            for residual in (
                report.left_residual,
                report.middle_residual,
                report.diag_residual,
            ):
                if worst is None or residual > worst:
                    worst = residual
        detail = f"20 parameters, worst residual {mpmath.nstr(worst, 3)}"
    verdict("square roots of the factors re-square within 1e-9", ok, detail)


def test_commutator_identity_and_rotation_residuals(verdict):
    model = SpdModel(2, "real")
    ok = True
    worst = None
    with DEFAULT_POLICY.precision():
        for t in (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(4)):
            comm = verify_commutator_identity(model, t, seed=0, count=100)
            ok = ok and comm.passed
            if worst is None or comm.max_residual > worst:
                worst = comm.max_residual
            rot = verify_rotation_residuals(t)
            ok = ok and rot.passed
        detail = f"t in {{1/2, 1, 2, 4}}, 100 points, worst {mpmath.nstr(worst, 3)}"
    verdict(
        "halving commutator identity and rotation residuals within 1e-9",
        ok,
        detail,
    )


def test_central_extension_witness(verdict):
    demo = demo_sl3_central_extension(seed=0, count=50)
    with DEFAULT_POLICY.precision():
        displacement_ok = demo.displacement_target_residual <= DEFAULT_POLICY.tol()
    ok = (
        demo.trivial_on_subspace
        and displacement_ok
        and demo.moved_sampled_point
        and demo.central
        and demo.generators_tested == 50
        and demo.exact_action_is_half_turn
        and demo.exact_displacement_squared_is_eight
    )
    verdict(
        "central half-turn: trivial on the plane, moves the witness by sqrt8, "
        "commutes with 50 generators",
        ok,
        f"displacement residual {mpmath.nstr(demo.displacement_target_residual, 3)}",
    )


def test_cocone_commutes_and_factorization_round_trips(verdict):
    cocone = cocone_check(CoconeDiagram(), seed=0, count=100)
    ok = cocone.passed and cocone.points_factored == 100
    worst = None
    with DEFAULT_POLICY.precision():
        tol = DEFAULT_POLICY.tol()
        for n in (2, 3):
            rng = random.Random(derive_seed(0, f"acceptance-factorization-{n}"))
            for _ in range(100):
                g = random_unimodular(rng, n)
                result = point_factorization(g)
                ok = ok and result.exact_match and result.float_residual <= tol
                if worst is None or result.float_residual > worst:
                    worst = result.float_residual
        detail = (
            f"cocone on 100 points, 100+100 round trips, worst "
            f"{mpmath.nstr(worst, 3)}"
        )
    verdict(
        "two-root cocone commutes and reflection factorization round-trips "
        "within 1e-9",
        ok,
        detail,
    )


def test_geodesic_transvection_additivity(verdict):
    line = RealLineModel()
    xs = line.sample_points(derive_seed(0, "acceptance-add-x"), 1000)
    ys = line.sample_points(derive_seed(0, "acceptance-add-y"), 1000)
    ok = True
    for index, (x, y) in enumerate(zip(xs, ys)):
        equal, residual = words_equal_as_actions(
            line,
            transvection(x) * transvection(y),
            transvection(x + y),
            seed=derive_seed(0, f"acceptance-add-{index}"),
            count=3,
        )
        ok = ok and equal and residual == 0
    verdict(
        "line transvections compose additively, exactly, on 1000 rational pairs",
        ok,
    )


def test_verify_all_is_fast_and_byte_deterministic(verdict):
    runs = []
    ok = True
    for _ in range(2):
        start = time.perf_counter()
        proc = subprocess.run(
            [sys.executable, "-m", "symspace.cli", "verify", "all"],
            capture_output=True,
            timeout=120,
        )
        elapsed = time.perf_counter() - start
        ok = ok and proc.returncode == 0 and elapsed < 60.0
        runs.append((proc.stdout, elapsed))
    identical = runs[0][0] == runs[1][0]
    ok = ok and identical and len(runs[0][0]) > 0
    verdict(
        "full verification run exits clean, under 60s, byte-identical reports",
        ok,
        f"{runs[0][1]:.1f}s and {runs[1][1]:.1f}s, {len(runs[0][0])} bytes",
    )
