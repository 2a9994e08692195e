"""Structural analysis of computed policies.

Two kinds of statement are checked here:

  * algebraic sufficient conditions that predict how the optimal service
    rate moves with the residual job value, evaluated directly on the
    increment table (and, for constant rewards, on the cost tables alone);
  * empirical classification of a solved policy table: direction in the
    job count b, and per-row direction in the residual value v.

Verdicts from the algebraic checkers are one-sided guarantees; when neither
inequality family holds the checker reports Inconclusive and only the
empirical scan speaks.  All comparisons are exact (no tolerance injected);
margins are recorded so callers can judge float sensitivity themselves.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

import numpy as np

from .model import ValidatedModel
from .solver import SolutionTable

__all__ = [
    "Direction",
    "Guarantee",
    "MonotonicityReport",
    "RowClass",
    "SubmodularityResult",
    "check_constant_reward",
    "check_delta_conditions",
    "check_submodular",
    "classify_policy",
]


class Direction(enum.Enum):
    NON_DECREASING = "NonDecreasing"
    NON_INCREASING = "NonIncreasing"
    CONSTANT = "Constant"
    MIXED = "Mixed"


class Guarantee(enum.Enum):
    NON_DECREASING = "GuaranteedNonDecreasing"
    NON_INCREASING = "GuaranteedNonIncreasing"
    INCONCLUSIVE = "Inconclusive"
    BOTH = "Both"


@dataclass(frozen=True)
class RowClass:
    """Direction of one policy row v -> mu(b, v), with a witness on violation.

    For Mixed rows the witness is the first adjacent pair where the action
    strictly decreases (the pair contradicting NonDecreasing).
    """

    direction: Direction
    witness: tuple[tuple[int, int], tuple[int, int]] | None = None


@dataclass(frozen=True)
class MonotonicityReport:
    """Full structural report for one solved model.

    ``in_b_verdict`` is "NonDecreasing" or "Violated" (with a witness state
    pair in the latter case).
    """

    in_b_verdict: str
    in_b_witness: tuple[tuple[int, int], tuple[int, int]] | None
    per_b_in_v: dict[int, RowClass]
    theorem2_per_b: dict[int, Guarantee]
    theorem3_per_b: dict[int, Guarantee] | None

    @property
    def in_b_ok(self) -> bool:
        return self.in_b_verdict == "NonDecreasing"

    def to_json(self) -> str:
        def wit(w):
            return None if w is None else [list(w[0]), list(w[1])]

        doc = {
            "in_b_verdict": self.in_b_verdict,
            "in_b_witness": wit(self.in_b_witness),
            "per_b_in_v": {
                str(b): {"direction": rc.direction.value, "witness": wit(rc.witness)}
                for b, rc in sorted(self.per_b_in_v.items())
            },
            "theorem2_per_b": {
                str(b): g.value for b, g in sorted(self.theorem2_per_b.items())
            },
            "theorem3_per_b": None
            if self.theorem3_per_b is None
            else {str(b): g.value for b, g in sorted(self.theorem3_per_b.items())},
        }
        return json.dumps(doc, indent=2)


@dataclass(frozen=True)
class SubmodularityResult:
    passed: bool
    worst_margin: float


def check_delta_conditions(model: ValidatedModel, solution: SolutionTable, b: int) -> Guarantee:
    """Sufficient condition for the in-v direction of row b.

    If delta(b, v) >= -[r(v+1) - r(v)] for every v < V the row is guaranteed
    non-decreasing; if <= throughout, guaranteed non-increasing.  Both
    families holding (all equalities, or V = 1 vacuously) reports the
    non-decreasing verdict; the policy row is then constant.  The conditions
    are sufficient only, so the fallback is Inconclusive.
    """
    V = model.V
    ge_all = True
    le_all = True
    for v in range(1, V):
        lhs = solution.delta[b, v]
        rhs = -(model.r_of(v + 1) - model.r_of(v))
        if lhs < rhs:
            ge_all = False
        if lhs > rhs:
            le_all = False
    if ge_all:
        return Guarantee.NON_DECREASING
    if le_all:
        return Guarantee.NON_INCREASING
    return Guarantee.INCONCLUSIVE


def check_constant_reward(model: ValidatedModel, b: int) -> Guarantee:
    """Single-inequality direction test for constant rewards.

    With r constant at rbar, the sign of q = h(b) + min_s {c(s) - s*rbar}
    decides the in-v direction of row b: positive means non-decreasing,
    negative non-increasing, zero means both (the row is constant in v).
    """
    r = model.r
    if not np.all(r == r[0]):
        raise ValueError("constant-reward test requires a constant reward table")
    rbar = float(r[0])
    q = model.h_of(b) + float(np.min(model.c - model.actions * rbar))
    if q > 0.0:
        return Guarantee.NON_DECREASING
    if q < 0.0:
        return Guarantee.NON_INCREASING
    return Guarantee.BOTH


def _classify_row(row: np.ndarray, b: int) -> RowClass:
    """Direction of one mu row over v = 1..V (row is 1-indexed padded)."""
    V = len(row) - 1
    inc = dec = None
    for v in range(1, V):
        if row[v + 1] > row[v] and inc is None:
            inc = v
        if row[v + 1] < row[v] and dec is None:
            dec = v
    if inc is None and dec is None:
        return RowClass(Direction.CONSTANT)
    if dec is None:
        return RowClass(Direction.NON_DECREASING)
    if inc is None:
        return RowClass(Direction.NON_INCREASING)
    return RowClass(Direction.MIXED, witness=((b, dec), (b, dec + 1)))


def classify_policy(solution: SolutionTable) -> MonotonicityReport:
    """Scan a solved policy table and assemble the full structural report.

    The in-b scan checks mu(b, v) <= mu(b+1, v) everywhere; each row b gets
    an in-v direction; the algebraic checkers fill the guarantee maps (the
    constant-reward map only when the reward table is constant).
    """
    model = solution.model
    if model is None:
        raise ValueError("solution carries no model")
    B, V = solution.B, solution.V
    mu = solution.mu

    in_b = "NonDecreasing"
    in_b_witness = None
    for v in range(1, V + 1):
        for b in range(1, B):
            if mu[b + 1, v] < mu[b, v]:
                in_b = "Violated"
                in_b_witness = ((b, v), (b + 1, v))
                break
        if in_b_witness:
            break

    per_b = {b: _classify_row(mu[b], b) for b in range(1, B + 1)}
    thm2 = {b: check_delta_conditions(model, solution, b) for b in range(1, B + 1)}
    thm3 = None
    if np.all(model.r == model.r[0]):
        thm3 = {b: check_constant_reward(model, b) for b in range(1, B + 1)}
    return MonotonicityReport(
        in_b_verdict=in_b,
        in_b_witness=in_b_witness,
        per_b_in_v=per_b,
        theorem2_per_b=thm2,
        theorem3_per_b=thm3,
    )


def check_submodular(model: ValidatedModel, x_grid: list[float]) -> SubmodularityResult:
    """Verify the submodularity inequality of f(s, x) = c(s) - s*x.

    For every action pair s- < s+ and grid pair x- < x+ the combination
    f(s+, x+) + f(s-, x-) - f(s+, x-) - f(s-, x+) must be <= 1e-12 (exactly
    it equals (s+ - s-)(x- - x+)).  Reports the worst (largest) such value
    over the nontrivial quadruples; degenerate pairs with s- = s+ or
    x- = x+ contribute exactly 0 and are skipped.  Vacuous pass with worst
    margin 0 when no nontrivial quadruple exists.
    """
    if len(x_grid) == 0:
        raise ValueError("x_grid must be non-empty")
    s = model.actions
    c = model.c
    xs = sorted(set(x_grid))
    worst = None
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            for a in range(len(xs)):
                for bb in range(a + 1, len(xs)):
                    xlo, xhi = xs[a], xs[bb]
                    lhs = (c[j] - s[j] * xhi) + (c[i] - s[i] * xlo)
                    rhs = (c[j] - s[j] * xlo) + (c[i] - s[i] * xhi)
                    margin = lhs - rhs
                    if worst is None or margin > worst:
                        worst = margin
    worst = 0.0 if worst is None else worst
    return SubmodularityResult(passed=worst <= 1e-12, worst_margin=float(worst))
