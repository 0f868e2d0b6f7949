"""Validity reports returned by the axiom checkers.

A checker never raises on an axiom failure; it returns a report carrying the
worst residual and a bounded sample of offending index tuples so that large
inputs cannot flood the caller.
"""

from __future__ import annotations

from dataclasses import dataclass, field

MAX_LISTED_VIOLATIONS = 20


@dataclass(frozen=True)
class Violation:
    """One failed instance of a law at a specific index tuple."""

    law: str
    where: tuple
    residual: float


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of an axiom check.

    ``violations`` holds at most MAX_LISTED_VIOLATIONS entries even when more
    indices fail; ``max_residual`` is always the true maximum.  ``info``
    carries check-specific extras (plain Python scalars only, so the report
    serializes cleanly).
    """

    passed: bool
    max_residual: float
    violations: tuple = ()
    info: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "max_residual": self.max_residual,
            "violations": [
                {"law": v.law, "where": list(v.where), "residual": v.residual}
                for v in self.violations
            ],
            "info": {k: self.info[k] for k in sorted(self.info)},
        }


def merge_reports(*reports: ValidityReport) -> ValidityReport:
    """Combine several reports into one, keeping the violation cap."""
    violations = []
    for rep in reports:
        violations.extend(rep.violations)
    info: dict = {}
    for rep in reports:
        info.update(rep.info)
    max_residual = max((r.max_residual for r in reports), default=0.0)
    return ValidityReport(
        passed=all(r.passed for r in reports),
        max_residual=float(max_residual),
        violations=tuple(violations[:MAX_LISTED_VIOLATIONS]),
        info=info,
    )
