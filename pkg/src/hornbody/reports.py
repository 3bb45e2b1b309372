"""Inequality records and membership reports shared by every checker.

Multiplicative checks run on the logarithmic scale, where a vanishing
singular value contributes ``-inf``.  The slack conventions below make every
inequality decidable in that extended arithmetic:

* every inequality is stored oriented as ``lhs <= rhs`` with
  ``slack = rhs - lhs``,
* ``(-inf) - (-inf)`` counts as slack ``0`` (the inequality is tight),
* a finite ``lhs`` against ``rhs = -inf`` gives slack ``-inf`` (violated),
* ``lhs = -inf`` against anything else gives slack ``+inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Optional

if TYPE_CHECKING:  # pragma: no cover
    from .combinatorics import HornTriple

NEG_INF = float("-inf")

FORWARD = "forward"
COMPLEMENT = "complement"
DETERMINANT = "determinant"


def log_or_neg_inf(x: float) -> float:
    """Natural logarithm extended by log 0 = -inf.

    Negative input signals a bug upstream (spectra are clamped to be
    nonnegative before they reach any checker), so it raises.
    """
    if x < 0.0:
        raise ValueError(f"expected a nonnegative value, got {x}")
    return NEG_INF if x == 0.0 else math.log(x)


def slack_of(lhs: float, rhs: float) -> float:
    """Slack of the inequality ``lhs <= rhs`` in extended arithmetic."""
    if lhs == NEG_INF and rhs == NEG_INF:
        return 0.0
    return rhs - lhs


def default_log_tol(n: int, *vectors: Iterable[float]) -> float:
    """Default tolerance for log-domain slacks: 1e-9 scaled by the dimension
    and by the spread of the finite logarithms appearing in the data."""
    span = 1.0
    for vec in vectors:
        for x in vec:
            if x > 0.0 and math.isfinite(x):
                span = max(span, abs(math.log(x)))
    return 1e-9 * max(n, 1) * span


@dataclass(frozen=True)
class InequalityRecord:
    """One checked inequality, oriented as ``lhs <= rhs``.

    ``triple`` is the :class:`~hornbody.combinatorics.HornTriple` that
    produced the inequality, or ``None`` for the determinant identity used
    by the invertible-case checker.  ``direction`` tells which member of the
    pair the record belongs to ("forward", "complement" or "determinant").
    """

    triple: Optional["HornTriple"]
    direction: str
    lhs: float
    rhs: float
    slack: float

    def satisfied(self, tol: float) -> bool:
        return self.slack >= -tol

    @property
    def label(self) -> str:
        head = self.triple.label if self.triple is not None else "det"
        return f"{head} [{self.direction}]"


@dataclass(frozen=True)
class MembershipReport:
    """Slack ledger for a family of inequalities with an overall verdict.

    The verdict is ``passed = worst_slack >= -tol`` for the tolerance the
    check was run with.
    """

    passed: bool
    worst_slack: float
    tol: float
    records: tuple[InequalityRecord, ...]
    note: Optional[str] = None

    @classmethod
    def from_records(
        cls,
        records: Iterable[InequalityRecord],
        tol: float,
        note: Optional[str] = None,
    ) -> "MembershipReport":
        recs = tuple(records)
        worst = min((r.slack for r in recs), default=math.inf)
        return cls(
            passed=worst >= -tol,
            worst_slack=worst,
            tol=tol,
            records=recs,
            note=note,
        )

    def violations(self, tol: Optional[float] = None) -> tuple[InequalityRecord, ...]:
        """Records whose slack falls below ``-tol`` (default: the report's tol)."""
        cut = self.tol if tol is None else tol
        return tuple(r for r in self.records if r.slack < -cut)

    @property
    def worst_record(self) -> Optional[InequalityRecord]:
        best = None
        for rec in self.records:
            if best is None or rec.slack < best.slack:
                best = rec
        return best

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"
