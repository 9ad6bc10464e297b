"""Machine-readable case reports with reproducible serialization.

Reports double as regression fixtures, so their serialized form must be
byte-identical across runs for a fixed configuration: case lists are
sorted by name, residuals are decimal strings with 20 significant digits
("exact-zero" marks exact-arithmetic passes), and the wall-clock field is
kept off the canonical encoding (it goes to stderr instead).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .linalg import SquareMatrix
from .scalars import QSqrt2, fraction_to_mpf, qsqrt2_to_real

EXACT_ZERO = "exact-zero"


def format_residual(value, precision_bits: int = 128) -> str:
    """Decimal rendering of a residual; exact zeros keep their exactness.

    Exact kinds (int, Fraction, Q(sqrt 2)) serialize as "exact-zero" when
    zero and as a 20-digit decimal otherwise.  Floats always render as
    decimals, including 0.0: a float zero is a measurement, not a proof.
    """
    if value is None:
        return EXACT_ZERO
    if isinstance(value, (int, Fraction)):
        if value == 0:
            return EXACT_ZERO
        with mpmath.workprec(precision_bits):
            return mpmath.nstr(
                fraction_to_mpf(Fraction(value)), 20, strip_zeros=False
            )
    if isinstance(value, QSqrt2):
        if not value:
            return EXACT_ZERO
        return mpmath.nstr(
            qsqrt2_to_real(value, precision_bits), 20, strip_zeros=False
        )
    with mpmath.workprec(precision_bits):
        return mpmath.nstr(+value, 20, strip_zeros=False)


def scalar_text(x) -> str:
    """Exact scalars verbatim, floats with 20 significant digits."""
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, 20)
    if isinstance(x, Fraction):
        return str(x)
    return str(x)


def matrix_rows(m: SquareMatrix) -> tuple[str, ...]:
    """Row-per-line dump used for report witnesses."""
    return tuple(
        ", ".join(scalar_text(x) for x in row) for row in m.entries
    )


@dataclass(frozen=True)
class CaseResult:
    """One named check: pass/fail/skipped, residual, tolerance, witness."""

    name: str
    status: str
    residual: str
    tolerance: str
    params: dict = field(default_factory=dict)
    witness: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.status not in ("pass", "fail", "skipped"):
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == "fail" and self.witness is None:
            raise ValueError("failing cases must carry a witness")

    def to_dict(self) -> dict:
        payload = {
            "name": self.name,
            "status": self.status,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "params": {k: str(v) for k, v in sorted(self.params.items())},
        }
        if self.witness is not None:
            payload["witness"] = list(self.witness)
        return payload


def case(
    name: str,
    ok: bool,
    residual,
    tolerance: str,
    params: dict | None = None,
    witness: tuple[str, ...] | None = None,
    precision_bits: int = 128,
) -> CaseResult:
    """Build a pass/fail case; failures synthesize a witness if none given."""
    status = "pass" if ok else "fail"
    if not ok and witness is None:
        witness = (f"residual {format_residual(residual, precision_bits)}",)
    return CaseResult(
        name=name,
        status=status,
        residual=format_residual(residual, precision_bits),
        tolerance=tolerance,
        params=params or {},
        witness=witness,
    )


@dataclass(frozen=True)
class Report:
    """All cases of one suite run plus the configuration that produced it.

    ``wall_time_ms`` is measured and reported on stderr by the CLI but is
    excluded from the canonical JSON, which must be byte-identical across
    runs of the same configuration.
    """

    suite: str
    config: dict
    cases: tuple[CaseResult, ...]
    wall_time_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.cases)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "skipped": 0}
        for c in self.cases:
            out[c.status] += 1
        return out

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "config": {k: v for k, v in sorted(self.config.items())},
            "counts": self.counts(),
            "cases": [c.to_dict() for c in self.cases],
        }

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def assemble_report(
    suite: str, config: dict, cases: list[CaseResult], wall_time_ms: float
) -> Report:
    ordered = tuple(sorted(cases, key=lambda c: c.name))
    names = [c.name for c in ordered]
    if len(set(names)) != len(names):
        duplicates = sorted({n for n in names if names.count(n) > 1})
        raise ValueError(f"duplicate case names: {duplicates}")
    return Report(suite, config, ordered, wall_time_ms)
