"""Three-way verdicts for inequality checks with bracketed epsilon.

Bounds increase in epsilon, so evaluating the right-hand side at the
certified lower and upper ends of the epsilon bracket sandwiches the true
bound: a PASS at the lower end certifies the instance, and only a failure
that persists at the upper end counts as a VIOLATION.  This never reports
a false counterexample to a proven statement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

PASS = "PASS"
INCONCLUSIVE = "INCONCLUSIVE"
VIOLATION = "VIOLATION"

DEFAULT_TOL = 1e-9

CSV_HEADER = "suite,trial,bound_name,lhs,eps_lo,eps_hi,rhs_lo,rhs_hi,outcome"


def classify(lhs: float, rhs_at_lower: float, rhs_at_upper: float, tol: float = DEFAULT_TOL) -> str:
    if lhs <= rhs_at_lower + tol:
        return PASS
    if lhs > rhs_at_upper + tol:
        return VIOLATION
    return INCONCLUSIVE


@dataclass(frozen=True)
class BoundVerdict:
    """Record of one inequality check."""

    suite: str
    trial: int
    bound_name: str
    lhs: float
    eps_lo: float
    eps_hi: float
    rhs_lo: float
    rhs_hi: float
    outcome: str
    certificates: dict = field(default_factory=dict, repr=False)

    @staticmethod
    def check(
        suite: str,
        trial: int,
        bound_name: str,
        lhs: float,
        eps_lo: float,
        eps_hi: float,
        rhs_lo: float,
        rhs_hi: float,
        tol: float = DEFAULT_TOL,
        certificates: Optional[dict] = None,
    ) -> "BoundVerdict":
        return BoundVerdict(
            suite=suite,
            trial=trial,
            bound_name=bound_name,
            lhs=float(lhs),
            eps_lo=float(eps_lo),
            eps_hi=float(eps_hi),
            rhs_lo=float(rhs_lo),
            rhs_hi=float(rhs_hi),
            outcome=classify(lhs, rhs_lo, rhs_hi, tol),
            certificates=certificates or {},
        )

    @staticmethod
    def exact(
        suite: str,
        trial: int,
        bound_name: str,
        lhs: float,
        epsilon: float,
        rhs: float,
        tol: float = DEFAULT_TOL,
        certificates: Optional[dict] = None,
    ) -> "BoundVerdict":
        """Exactly known epsilon: the verdict is binary by construction."""
        return BoundVerdict.check(
            suite, trial, bound_name, lhs, epsilon, epsilon, rhs, rhs, tol, certificates
        )

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "trial": self.trial,
            "bound_name": self.bound_name,
            "lhs": self.lhs,
            "eps_lo": self.eps_lo,
            "eps_hi": self.eps_hi,
            "rhs_lo": self.rhs_lo,
            "rhs_hi": self.rhs_hi,
            "outcome": self.outcome,
            "certificates": self.certificates,
        }

    def to_csv_row(self) -> str:
        cells = [
            self.suite,
            str(self.trial),
            self.bound_name,
            _fmt(self.lhs),
            _fmt(self.eps_lo),
            _fmt(self.eps_hi),
            _fmt(self.rhs_lo),
            _fmt(self.rhs_hi),
            self.outcome,
        ]
        return ",".join(cells)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def verdict_from_dict(doc: dict) -> BoundVerdict:
    return BoundVerdict(
        suite=str(doc["suite"]),
        trial=int(doc["trial"]),
        bound_name=str(doc["bound_name"]),
        lhs=float(doc["lhs"]),
        eps_lo=float(doc["eps_lo"]),
        eps_hi=float(doc["eps_hi"]),
        rhs_lo=float(doc["rhs_lo"]),
        rhs_hi=float(doc["rhs_hi"]),
        outcome=str(doc["outcome"]),
        certificates=dict(doc.get("certificates", {})),
    )


def summarize(verdicts) -> dict:
    counts = {PASS: 0, INCONCLUSIVE: 0, VIOLATION: 0}
    for v in verdicts:
        counts[v.outcome] += 1
    return {
        "total": len(verdicts),
        "pass": counts[PASS],
        "inconclusive": counts[INCONCLUSIVE],
        "violation": counts[VIOLATION],
    }


def exit_code(summary: dict) -> int:
    """0 = all PASS; 2 = some INCONCLUSIVE, no VIOLATION; 1 = any VIOLATION."""
    if summary["violation"] > 0:
        return 1
    if summary["inconclusive"] > 0:
        return 2
    return 0


@dataclass(frozen=True)
class SweepRow:
    """One point of a closed-form tightness sweep."""

    family: str
    capacity: str
    variable: str
    value: float
    x: float
    r: Optional[float]
    delta: float
    epsilon: float
    bound: float
    ratio: float

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "capacity": self.capacity,
            "variable": self.variable,
            "value": self.value,
            "x": self.x,
            "r": self.r,
            "delta": self.delta,
            "epsilon": self.epsilon,
            "bound": self.bound,
            "ratio": self.ratio,
        }


SWEEP_CSV_HEADER = "family,capacity,variable,value,x,r,delta,epsilon,bound,ratio"


def sweep_row_to_csv(row: SweepRow) -> str:
    cells = [
        row.family,
        row.capacity,
        row.variable,
        _fmt(row.value),
        _fmt(row.x),
        "" if row.r is None else _fmt(row.r),
        _fmt(row.delta),
        _fmt(row.epsilon),
        _fmt(row.bound),
        _fmt(row.ratio),
    ]
    return ",".join(cells)
