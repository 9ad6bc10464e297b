"""Named verification suites behind the command line.

Each suite turns one family of checks into a list of report cases.  Suite
runs are deterministic functions of their configuration: sampling always
goes through labeled seed derivation, and every residual lands in the
report as a fixed-width decimal string, so two runs with equal
configurations serialize to identical bytes.

The model flag selects the space for the suites that are generic over it
(axioms, perfectness, factorization).  The remaining suites carry their
space in their subject matter (the shear factor identities and the
commutator live on the 2x2 plane, the central extension and the cocone on
the 3x3 space) and ignore the flag.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass
from fractions import Fraction

from .embedding import (
    CoconeDiagram,
    check_perfectness,
    cocone_check,
    demo_sl3_central_extension,
    embed_hyperbolic_plane,
    point_factorization,
)
from .hyperbolic import (
    default_parameter_sweep,
    verify_commutator_identity,
    verify_rotation_residuals,
    verify_shear_identities,
    verify_sqrt_consistency,
)
from .linalg import TolerancePolicy
from .reporting import CaseResult, Report, assemble_report, case
from .scalars import parse_rational
from .spaces import (
    MODEL_BUILDERS,
    RealLineModel,
    SpdModel,
    build_model,
    check_axioms,
    derive_seed,
    random_unimodular,
)
from .words import transvection, words_equal_as_actions

SUITE_NAMES = (
    "axioms",
    "matrix-lemma",
    "commutator",
    "so2-residuals",
    "central-extension",
    "perfectness",
    "factorization",
    "cocone",
    "all",
)

DEFAULT_T_VALUES = (
    Fraction(1, 2),
    Fraction(1),
    Fraction(2),
    Fraction(4),
)


class ConfigError(Exception):
    """Invalid run configuration (unknown key, bad value, bad combination)."""


def parse_tolerance(text: str) -> Fraction:
    value = parse_rational(str(text))
    if value <= 0:
        raise ConfigError(f"abs_tol must be positive, got {text!r}")
    return value


def parse_t_values(spec) -> tuple[Fraction, ...]:
    """Comma-separated rationals (or a list of them) into exact parameters."""
    if isinstance(spec, str):
        items = [part for part in spec.split(",") if part.strip()]
    elif isinstance(spec, (list, tuple)):
        items = list(spec)
    else:
        raise ConfigError(f"t_values must be a string or list, got {spec!r}")
    if not items:
        raise ConfigError("t_values must name at least one parameter")
    values = []
    for item in items:
        try:
            t = parse_rational(str(item))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if t == 0:
            raise ConfigError("shear parameters must be nonzero")
        values.append(t)
    return tuple(values)


@dataclass(frozen=True)
class SuiteConfig:
    """One suite run: which checks, which space, and how hard to sample."""

    suite: str
    model: str = "sl2"
    seed: int = 0
    samples: int = 1000
    precision_bits: int = 128
    abs_tol: Fraction = Fraction(1, 10**9)
    t_values: tuple[Fraction, ...] | None = None

    def __post_init__(self) -> None:
        if self.suite not in SUITE_NAMES:
            raise ConfigError(
                f"unknown suite {self.suite!r}; expected one of {', '.join(SUITE_NAMES)}"
            )
        if self.model not in MODEL_BUILDERS:
            known = ", ".join(sorted(MODEL_BUILDERS))
            raise ConfigError(f"unknown model {self.model!r}; expected one of {known}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ConfigError(f"seed must be an integer, got {self.seed!r}")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")
        if not isinstance(self.samples, int) or isinstance(self.samples, bool):
            raise ConfigError(f"samples must be an integer, got {self.samples!r}")
        if self.samples < 1:
            raise ConfigError("samples must be at least 1")
        if not isinstance(self.precision_bits, int) or isinstance(
            self.precision_bits, bool
        ):
            raise ConfigError(
                f"precision_bits must be an integer, got {self.precision_bits!r}"
            )
        if self.precision_bits < 53:
            raise ConfigError("precision_bits must be at least 53")
        if not isinstance(self.abs_tol, Fraction) or self.abs_tol <= 0:
            raise ConfigError("abs_tol must be a positive rational")
        if self.t_values is not None:
            if not self.t_values:
                raise ConfigError("t_values must name at least one parameter")
            if any(t == 0 for t in self.t_values):
                raise ConfigError("shear parameters must be nonzero")
            object.__setattr__(
                self, "t_values", tuple(Fraction(t) for t in self.t_values)
            )

    def policy(self) -> TolerancePolicy:
        return TolerancePolicy(
            abs_tol=self.abs_tol, precision_bits=self.precision_bits
        )

    def parameters(self) -> tuple[Fraction, ...]:
        return self.t_values if self.t_values is not None else DEFAULT_T_VALUES

    def echo(self) -> dict:
        return {
            "suite": self.suite,
            "model": self.model,
            "seed": self.seed,
            "samples": self.samples,
            "precision_bits": self.precision_bits,
            "abs_tol": str(self.abs_tol),
            "t_values": "default"
            if self.t_values is None
            else [str(t) for t in self.t_values],
        }


CONFIG_KEYS = ("model", "seed", "samples", "precision_bits", "abs_tol", "t_values")


def parse_config(path: str) -> dict:
    """Read a JSON config file; unknown keys are errors, not warnings."""
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = sorted(set(data) - set(CONFIG_KEYS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return data


def build_config(suite: str, settings: dict) -> SuiteConfig:
    """Merge raw settings (config file plus flag overrides) into a config."""
    kwargs = {"suite": suite}
    for key in CONFIG_KEYS:
        if key not in settings or settings[key] is None:
            continue
        value = settings[key]
        try:
            if key == "abs_tol":
                value = parse_tolerance(value) if isinstance(value, str) else value
                if isinstance(value, int) and not isinstance(value, bool):
                    value = Fraction(value)
                if not isinstance(value, Fraction):
                    raise ConfigError(
                        "abs_tol must be a rational string such as \"1e-9\" or \"1/1000000000\""
                    )
            elif key == "t_values":
                value = parse_t_values(value)
            elif key in ("seed", "samples", "precision_bits"):
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ConfigError(f"{key} must be an integer, got {value!r}")
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        kwargs[key] = value
    return SuiteConfig(**kwargs)


def _tol_text(config: SuiteConfig) -> str:
    return str(config.abs_tol)


def _sampled_count(config: SuiteConfig, divisor: int, floor: int = 1) -> int:
    return max(floor, config.samples // divisor)


def _axiom_cases(config: SuiteConfig, model_name: str) -> list[CaseResult]:
    """The four-law battery on one model, one case per law."""
    model = build_model(model_name)
    policy = config.policy()
    report = check_axioms(
        model, derive_seed(config.seed, f"axioms-{model_name}"), config.samples, policy
    )
    tolerance = "exact" if model.is_exact else _tol_text(config)
    cases = []
    for check in report.checks:
        residual = check.max_residual if check.max_residual is not None else Fraction(0)
        witness = (check.witness,) if check.witness else None
        cases.append(
            case(
                f"axioms.{model_name}.{check.axiom.lower()}",
                check.passed,
                residual,
                tolerance,
                params={"samples": config.samples, "axiom": check.axiom},
                witness=witness,
                precision_bits=config.precision_bits,
            )
        )
    return cases


def _negative_control_case(config: SuiteConfig) -> CaseResult:
    """The battery must catch the deliberately wrong reflection law."""
    model = build_model("broken-sl2")
    count = min(config.samples, 25)
    report = check_axioms(
        model, derive_seed(config.seed, "axioms-negative-control"), count, config.policy()
    )
    rs2 = report.check("RS2")
    detected = rs2.violations > 0
    return case(
        "axioms.negative-control.rs2-violation-detected",
        detected,
        rs2.max_residual if rs2.max_residual is not None else Fraction(0),
        _tol_text(config),
        params={
            "model": "broken-sl2",
            "samples": count,
            "violations": rs2.violations,
            "expected": "violations > 0",
        },
        witness=None if detected else ("broken model passed the involution law",),
        precision_bits=config.precision_bits,
    )


def _additivity_case(config: SuiteConfig) -> CaseResult:
    """Composing line transvections adds their displacements, exactly."""
    model = RealLineModel()
    policy = config.policy()
    xs = model.sample_points(derive_seed(config.seed, "additivity-x"), config.samples)
    ys = model.sample_points(derive_seed(config.seed, "additivity-y"), config.samples)
    worst = Fraction(0)
    failures = 0
    witness = None
    for index, (x, y) in enumerate(zip(xs, ys)):
        composed = transvection(x) * transvection(y)
        direct = transvection(x + y)
        ok, residual = words_equal_as_actions(
            model,
            composed,
            direct,
            derive_seed(config.seed, f"additivity-{index}"),
            3,
            policy,
        )
        worst = max(worst, residual)
        if not ok:
            failures += 1
            if witness is None:
                witness = (f"x={x}, y={y}",)
    return case(
        "axioms.geodesic.transvection-additivity",
        failures == 0,
        worst,
        "exact",
        params={"pairs": config.samples, "points_per_pair": 3},
        witness=witness,
        precision_bits=config.precision_bits,
    )


def _suite_axioms(config: SuiteConfig) -> list[CaseResult]:
    cases = _axiom_cases(config, config.model)
    if config.model == "geodesic":
        cases.append(_additivity_case(config))
    if config.model != "broken-sl2":
        cases.append(_negative_control_case(config))
    return cases


def _suite_matrix_lemma(config: SuiteConfig) -> list[CaseResult]:
    """The four factor identities, exactly, over a parameter sweep."""
    ts = (
        config.t_values
        if config.t_values is not None
        else default_parameter_sweep()
    )
    reports = [verify_shear_identities(t) for t in ts]
    worst = max(report.max_deviation for report in reports)
    identity_flags = (
        ("upper-product", "upper_product"),
        ("lower-product", "lower_product"),
        ("left-halving", "left_halving"),
        ("middle-halving", "middle_halving"),
    )
    cases = []
    for name, attr in identity_flags:
        ok = all(getattr(r, attr) for r in reports)
        bad = [str(r.t) for r in reports if not getattr(r, attr)]
        cases.append(
            case(
                f"matrix-lemma.{name}",
                ok,
                worst,
                "exact",
                params={"parameters": len(ts)},
                witness=(f"failing parameters: {', '.join(bad)}",) if not ok else None,
                precision_bits=config.precision_bits,
            )
        )

    mirrored = sorted({-t for t in ts} - set(ts))
    signed_reports = reports + [verify_shear_identities(t) for t in mirrored]
    positivity_ok = all(r.positive_definite == (r.t > 0) for r in signed_reports)
    mistakes = [str(r.t) for r in signed_reports if r.positive_definite != (r.t > 0)]
    identities_everywhere = all(r.all_identities_hold for r in signed_reports)
    cases.append(
        case(
            "matrix-lemma.positive-definite-iff-positive-parameter",
            positivity_ok and identities_everywhere,
            max(r.max_deviation for r in signed_reports),
            "exact",
            params={"parameters": len(signed_reports)},
            witness=(f"sign mismatches at: {', '.join(mistakes)}",)
            if not positivity_ok
            else None,
            precision_bits=config.precision_bits,
        )
    )
    return cases


def _suite_commutator(config: SuiteConfig) -> list[CaseResult]:
    """Halving commutator identity per parameter, sampled and exact."""
    policy = config.policy()
    model = SpdModel(2, "real", policy=policy)
    count = _sampled_count(config, 10)
    cases = []
    for t in config.parameters():
        report = verify_commutator_identity(
            model, t, derive_seed(config.seed, f"commutator-{t}"), count, policy
        )
        sampled_ok = (
            report.commutator_matches
            and report.conjugation_matches
            and report.mirror_matches
        )
        cases.append(
            case(
                f"commutator.t={t}.word-actions",
                sampled_ok,
                report.max_residual,
                _tol_text(config),
                params={"t": str(t), "points": count},
                precision_bits=config.precision_bits,
            )
        )
        cases.append(
            case(
                f"commutator.t={t}.exact-shear-action",
                report.exact_action_identity,
                Fraction(0) if report.exact_action_identity else None,
                "exact",
                params={"t": str(t)},
                witness=None
                if report.exact_action_identity
                else ("action matrices differ in Q(sqrt 2)",),
                precision_bits=config.precision_bits,
            )
        )
    return cases


def _sqrt_consistency_parameters() -> tuple[Fraction, ...]:
    eighths = tuple(Fraction(k, 8) for k in range(1, 17))
    return eighths + (Fraction(3), Fraction(4), Fraction(6), Fraction(8))


def _suite_so2_residuals(config: SuiteConfig) -> list[CaseResult]:
    """Rotation defects of the square-root mismatch products, per parameter."""
    policy = config.policy()
    cases = []
    for t in config.parameters():
        if t <= 0:
            raise ConfigError("so2-residuals parameters must be positive")
        report = verify_rotation_residuals(t, policy)
        for label, check in (
            ("left-root", report.left_check),
            ("middle-root", report.middle_check),
        ):
            residual = max(check.orthogonality_residual, check.det_residual)
            cases.append(
                case(
                    f"so2-residuals.t={t}.{label}-rotation",
                    check.is_special_orthogonal,
                    residual,
                    _tol_text(config),
                    params={"t": str(t)},
                    precision_bits=config.precision_bits,
                )
            )
        certified = report.left_certificate and report.middle_certificate
        cases.append(
            case(
                f"so2-residuals.t={t}.halving-certificate",
                certified,
                Fraction(0) if certified else None,
                "exact",
                params={"t": str(t)},
                witness=None if certified else ("halving identities failed",),
                precision_bits=config.precision_bits,
            )
        )

    sqrt_params = _sqrt_consistency_parameters()
    worst = None
    all_ok = True
    for t in sqrt_params:
        report = verify_sqrt_consistency(t, policy)
        all_ok = all_ok and report.passed(policy)
        for residual in (
            report.left_residual,
            report.middle_residual,
            report.diag_residual,
        ):
            if worst is None or residual > worst:
                worst = residual
    cases.append(
        case(
            "so2-residuals.sqrt-consistency",
            all_ok,
            worst,
            _tol_text(config),
            params={"parameters": len(sqrt_params), "factors_per_parameter": 3},
            precision_bits=config.precision_bits,
        )
    )
    return cases


def _run_demo(config: SuiteConfig):
    return demo_sl3_central_extension(
        config.seed, min(config.samples, 50), config.policy()
    )


def _central_extension_cases(config: SuiteConfig, demo) -> list[CaseResult]:
    """The half-turn witness: trivial downstairs, moving and central upstairs."""
    policy = config.policy()
    count = min(config.samples, 50)
    tol = _tol_text(config)
    bits = config.precision_bits
    return [
        case(
            "central-extension.trivial-on-embedded-plane",
            demo.trivial_on_subspace,
            demo.triviality_residual,
            tol,
            params={"subspace_samples": count},
            precision_bits=bits,
        ),
        case(
            "central-extension.witness-displacement-sqrt8",
            demo.displacement_target_residual <= policy.tol(),
            demo.displacement_target_residual,
            tol,
            params={"witness": "twist of the unit corner shear"},
            precision_bits=bits,
        ),
        case(
            "central-extension.moves-ambient-point",
            demo.moved_sampled_point,
            demo.witness_displacement,
            tol,
            params={"move_threshold": "1/10", "expected": "displacement >= 1/10"},
            witness=None
            if demo.moved_sampled_point
            else ("no sampled ambient point moved past the threshold",),
            precision_bits=bits,
        ),
        case(
            "central-extension.central-against-generators",
            demo.central,
            demo.centrality_residual,
            tol,
            params={"generators": demo.generators_tested},
            precision_bits=bits,
        ),
        case(
            "central-extension.exact-half-turn-action",
            demo.exact_action_is_half_turn,
            Fraction(0) if demo.exact_action_is_half_turn else None,
            "exact",
            witness=None
            if demo.exact_action_is_half_turn
            else ("exact action matrix is not diag(-1,-1,1)",),
            precision_bits=bits,
        ),
        case(
            "central-extension.exact-displacement-squared-eight",
            demo.exact_displacement_squared_is_eight,
            Fraction(0) if demo.exact_displacement_squared_is_eight else None,
            "exact",
            witness=None
            if demo.exact_displacement_squared_is_eight
            else ("exact squared displacement is not 8",),
            precision_bits=bits,
        ),
    ]


def _suite_central_extension(config: SuiteConfig) -> list[CaseResult]:
    return _central_extension_cases(config, _run_demo(config))


def run_central_extension_demo(config: SuiteConfig):
    """Run the demo once, returning both the report and the raw witness data."""
    start = time.perf_counter()
    demo = _run_demo(config)
    cases = _central_extension_cases(config, demo)
    wall_time_ms = (time.perf_counter() - start) * 1000.0
    report = assemble_report(
        "central-extension", config.echo(), cases, wall_time_ms
    )
    return report, demo


def _suite_perfectness(config: SuiteConfig, model_name: str | None = None) -> list[CaseResult]:
    """Halved generators as commutators; ambient generation when rank two."""
    model_name = model_name or config.model
    if model_name not in ("sl2", "sl3"):
        raise ConfigError("perfectness runs on the sl2 or sl3 model")
    policy = config.policy()
    n = 2 if model_name == "sl2" else 3
    ambient = SpdModel(n, "real", policy=policy)
    sub = embed_hyperbolic_plane(ambient, 0, 1, seed=config.seed)
    count = _sampled_count(config, 50, floor=4)
    report = check_perfectness(
        sub, config.parameters(), derive_seed(config.seed, f"perfectness-{model_name}"),
        count, policy,
    )
    tol = _tol_text(config)
    bits = config.precision_bits
    params = {
        "model": model_name,
        "t_values": ",".join(str(t) for t in report.t_values),
        "points": count,
    }
    cases = [
        case(
            f"perfectness.{model_name}.upper-generators-are-commutators",
            report.upper_realized,
            report.max_residual,
            tol,
            params=params,
            precision_bits=bits,
        ),
        case(
            f"perfectness.{model_name}.lower-generators-are-commutators",
            report.lower_realized,
            report.max_residual,
            tol,
            params=params,
            precision_bits=bits,
        ),
        case(
            f"perfectness.{model_name}.base-symmetry-closure",
            report.conjugation_closure,
            report.max_residual,
            tol,
            params=params,
            precision_bits=bits,
        ),
    ]
    if n > 2:
        cases.append(
            case(
                f"perfectness.{model_name}.ambient-transvections-generated",
                report.generation_ok,
                report.max_residual,
                tol,
                params={"model": model_name, "elements": report.generation_checked},
                precision_bits=bits,
            )
        )
    return cases


def _factorization_cases(config: SuiteConfig, model_name: str) -> list[CaseResult]:
    if model_name not in ("sl2", "sl3"):
        raise ConfigError("factorization runs on the sl2 or sl3 model")
    policy = config.policy()
    n = 2 if model_name == "sl2" else 3
    count = _sampled_count(config, 10)
    rng = random.Random(derive_seed(config.seed, f"factorization-{model_name}"))
    worst = None
    failures = []
    exact_ok = True
    max_factors = 0
    for index in range(count):
        g = random_unimodular(rng, n)
        try:
            result = point_factorization(g, policy)
        except Exception as exc:  # noqa: BLE001 - recorded as a case failure
            failures.append(f"point {index}: {exc}")
            continue
        exact_ok = exact_ok and result.exact_match
        max_factors = max(max_factors, len(result.spd_factors))
        if worst is None or result.float_residual > worst:
            worst = result.float_residual
    ok = exact_ok and not failures
    return [
        case(
            f"factorization.{model_name}.random-round-trip",
            ok,
            worst if worst is not None else Fraction(0),
            _tol_text(config),
            params={"points": count, "max_factors": max_factors},
            witness=tuple(failures[:3]) if failures else None,
            precision_bits=config.precision_bits,
        )
    ]


def _suite_factorization(config: SuiteConfig) -> list[CaseResult]:
    return _factorization_cases(config, config.model)


def _suite_cocone(config: SuiteConfig) -> list[CaseResult]:
    """Two-root diagram: inclusions commute and roots generate the space."""
    policy = config.policy()
    count = _sampled_count(config, 10)
    report = cocone_check(CoconeDiagram(), config.seed, count, policy)
    bits = config.precision_bits
    params = {"diagram": report.diagram.name, "points": count}
    return [
        case(
            "cocone.basepoints-preserved",
            report.basepoints_preserved,
            Fraction(0) if report.basepoints_preserved else None,
            "exact",
            params=params,
            witness=None
            if report.basepoints_preserved
            else ("a root inclusion moved the basepoint",),
            precision_bits=bits,
        ),
        case(
            "cocone.inclusions-commute",
            report.inclusions_commute,
            report.inclusion_residual
            if report.inclusion_residual is not None
            else Fraction(0),
            "exact",
            params=params,
            witness=None
            if report.inclusions_commute
            else ("direct and mediated inclusions disagree",),
            precision_bits=bits,
        ),
        case(
            "cocone.reflection-morphisms",
            report.morphism_ok,
            Fraction(0) if report.morphism_ok else None,
            "exact",
            params=params,
            witness=None
            if report.morphism_ok
            else ("an inclusion failed the reflection-morphism law",),
            precision_bits=bits,
        ),
        case(
            "cocone.generation-in-root-factors",
            report.factors_stay_in_roots and report.generation_ok,
            report.max_factorization_residual
            if report.max_factorization_residual is not None
            else Fraction(0),
            _tol_text(config),
            params={
                "diagram": report.diagram.name,
                "points": report.points_factored,
            },
            witness=None
            if report.factors_stay_in_roots and report.generation_ok
            else ("a factor left the root subspaces",),
            precision_bits=bits,
        ),
    ]


def _suite_all(config: SuiteConfig) -> list[CaseResult]:
    cases: list[CaseResult] = []
    for model_name in ("geodesic", "sl2", "sl3"):
        cases.extend(_axiom_cases(config, model_name))
    cases.append(_additivity_case(config))
    cases.append(_negative_control_case(config))
    cases.extend(_suite_matrix_lemma(config))
    cases.extend(_suite_commutator(config))
    cases.extend(_suite_so2_residuals(config))
    cases.extend(_suite_central_extension(config))
    cases.extend(_suite_perfectness(config, "sl3"))
    cases.extend(_factorization_cases(config, "sl2"))
    cases.extend(_factorization_cases(config, "sl3"))
    cases.extend(_suite_cocone(config))
    return cases


_SUITES = {
    "axioms": _suite_axioms,
    "matrix-lemma": _suite_matrix_lemma,
    "commutator": _suite_commutator,
    "so2-residuals": _suite_so2_residuals,
    "central-extension": _suite_central_extension,
    "perfectness": _suite_perfectness,
    "factorization": _suite_factorization,
    "cocone": _suite_cocone,
    "all": _suite_all,
}


def run_suite(config: SuiteConfig) -> Report:
    """Execute one suite and assemble its sorted, canonical report."""
    start = time.perf_counter()
    cases = _SUITES[config.suite](config)
    wall_time_ms = (time.perf_counter() - start) * 1000.0
    return assemble_report(config.suite, config.echo(), cases, wall_time_ms)
