"""Check results and the audit report document."""

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any

from idlab.errors import NumericError

VERIFIED = 'verified'
DEFECT = 'defect'
ERROR = 'error'
RECORDED = 'recorded'

STATUSES = (VERIFIED, DEFECT, ERROR, RECORDED)


def render_value(value) -> str:
    """Canonical text of an exact value, or repr of a float."""
    if hasattr(value, 'render'):
        return value.render()
    if isinstance(value, (int, Fraction)):
        return str(Fraction(value))
    if isinstance(value, (float, complex)):
        return repr(value)
    return str(value)


def _is_exact_zero(value) -> bool:
    if hasattr(value, 'is_zero'):
        return value.is_zero
    return value == 0


@dataclass(frozen=True)
class EvalResult:
    """
    A numeric value, its error estimate and the parameters that produced it.
    Whether the estimate is a bound is up to the producer.
    """
    value: float | complex
    error_estimate: float
    parameters: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            'value': render_value(self.value),
            'error_estimate': self.error_estimate,
            'parameters': {k: v if isinstance(v, (int, float, str)) else render_value(v)
                           for k, v in self.parameters.items()},
        }


@dataclass(frozen=True)
class DefectReport:
    check: str
    params: tuple[tuple[str, str], ...]
    is_zero: bool
    residual: str
    elapsed_ms: float = 0.0
    error_estimate: float | None = None
    details: tuple[tuple[str, str], ...] = ()
    error: str | None = None
    recorded: bool = False
    known: bool = False
    numeric_failure: bool = False

    @classmethod
    def exact(cls, check, params, value, details=()):
        """Report on an exact residual: zero flag and canonical text."""
        return cls(check, tuple(params), _is_exact_zero(value), render_value(value), details=tuple(details))

    @classmethod
    def numeric(cls, check, params, residual, tolerance, error_estimate=0.0, details=(), recorded=False):
        """Report on a numeric residual; zero means within tolerance."""
        return cls(check, tuple(params), abs(residual) <= tolerance, render_value(residual),
                   error_estimate=float(error_estimate), details=tuple(details), recorded=recorded)

    @classmethod
    def failure(cls, check, params, exc):
        return cls(check, tuple(params), False, '', error=f"{type(exc).__name__}: {exc}",
                   numeric_failure=isinstance(exc, NumericError))

    @property
    def status(self) -> str:
        if self.error is not None:
            return ERROR
        if self.recorded:
            return RECORDED
        return VERIFIED if self.is_zero else DEFECT

    @property
    def params_text(self) -> str:
        return ', '.join(f"{k}={v}" for k, v in self.params)

    @property
    def sort_key(self):
        return self.check, self.params_text

    def with_fields(self, **changes):
        return replace(self, **changes)

    def to_dict(self) -> dict:
        doc = {
            'name': self.check,
            'params': {k: v for k, v in self.params},
            'status': self.status,
            'known': self.known,
            'residual': self.residual,
        }
        if self.error_estimate is not None:
            doc['error_estimate'] = self.error_estimate
        if self.error is not None:
            doc['error'] = self.error
        if self.details:
            doc['details'] = [list(pair) for pair in self.details]
        doc['elapsed_ms'] = round(self.elapsed_ms, 3)
        return doc


@dataclass(frozen=True)
class AuditReport:
    version: str
    config: dict
    checks: tuple[DefectReport, ...]

    @property
    def summary(self) -> dict:
        counts = {status: 0 for status in STATUSES}
        for entry in self.checks:
            counts[entry.status] += 1
        counts['known'] = sum(1 for entry in self.checks if entry.known)
        return counts

    def unexpected(self, expect_known) -> list[DefectReport]:
        """Defects and errors that count against the exit code."""
        return [e for e in self.checks
                if e.status == ERROR or (e.status == DEFECT and not (expect_known and e.known))]

    def exit_code(self, expect_known=False) -> int:
        if any(e.numeric_failure for e in self.checks):
            return 3
        return 1 if self.unexpected(expect_known) else 0

    def to_dict(self) -> dict:
        return {
            'version': self.version,
            'config': self.config,
            'checks': [entry.to_dict() for entry in self.checks],
            'summary': self.summary,
        }


def emit_report(report: AuditReport, fmt='json') -> str:
    """Render the report as JSON or as plain text with the same content."""
    if fmt == 'json':
        return json.dumps(report.to_dict(), indent=2) + '\n'
    if fmt != 'text':
        raise ValueError(f"unknown report format {fmt!r}")

    lines = [f"idlab {report.version}"]
    for key, value in report.config.items():
        lines.append(f"  {key}: {value}")
    lines.append('')
    for entry in report.checks:
        mark = ' (known)' if entry.known else ''
        lines.append(f"[{entry.status}{mark}] {entry.check} {entry.params_text}")
        if entry.error is not None:
            lines.append(f"    error: {entry.error}")
        else:
            lines.append(f"    residual: {entry.residual}")
        if entry.error_estimate is not None:
            lines.append(f"    error_estimate: {entry.error_estimate!r}")
        for key, value in entry.details:
            lines.append(f"    {key}: {value}")
        if entry.elapsed_ms:
            lines.append(f"    elapsed_ms: {entry.elapsed_ms:.3f}")
    lines.append('')
    summary = report.summary
    lines.append('summary: ' + ', '.join(f"{k}={summary[k]}" for k in summary))
    return '\n'.join(lines) + '\n'
