"""Optimal-policy solvers for the value-decay queue.

Three mutually cross-checking routes compute the optimal cost-to-go J and
optimal policy mu:

  * ``solve_recursive`` runs the increment recursion (delta/sigma), which
    characterizes the Bellman equation exactly in B*V*|S| evaluations;
  * ``value_iteration`` applies Bellman backups over the state space;
  * ``policy_iteration`` alternates exact policy evaluation with greedy
    improvement.

Every solver returns the same ``SolutionTable`` contract, including the
increment tables delta and sigma (reconstructed from J differences when not
natively produced), so structural invariants can be tested uniformly.

State space: (b, v) with 1 <= b <= B, 1 <= v <= V, plus the cost-free
trapping state (0, V).  Ties in every argmin break to the smallest action.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .model import ValidatedModel

__all__ = [
    "ConvergenceError",
    "PolicyTable",
    "SolutionTable",
    "apply_T",
    "bellman_backup",
    "evaluate_policy",
    "g_map",
    "near_tie_states",
    "policy_iteration",
    "solution_from_csv",
    "solve_recursive",
    "value_iteration",
]


class ConvergenceError(RuntimeError):
    """Value iteration failed to converge within the sweep budget."""


@dataclass(frozen=True)
class PolicyTable:
    """A stationary policy: an action index for every nonterminal state.

    ``action_index[b, v]`` is the chosen index into the action set; row 0
    and column 0 are padding and never read.
    """

    action_index: np.ndarray

    def s_at(self, b: int, v: int) -> int:
        return int(self.action_index[b, v])


@dataclass
class SolutionTable:
    """Output of every solver: J, mu, and the increment tables.

    Arrays are indexed ``[b, v]`` with shape (B+1, V+1).  ``J[0, V]`` is the
    terminal entry (exactly 0); ``delta[:, 0]`` and ``sigma[:, 0]`` are the
    v = 0 boundary (exactly 0).  ``mu`` holds indices into the action set.
    """

    J: np.ndarray
    mu: np.ndarray
    delta: np.ndarray
    sigma: np.ndarray
    solver_id: str
    model: ValidatedModel | None = None
    sweeps: int = field(default=0)

    @property
    def B(self) -> int:
        return self.J.shape[0] - 1

    @property
    def V(self) -> int:
        return self.J.shape[1] - 1

    def policy(self) -> PolicyTable:
        return PolicyTable(action_index=self.mu.copy())

    def to_csv(self) -> str:
        """Serialize as CSV, b-major, terminal row last.

        Floats use repr (shortest round-trip form) so equal solutions give
        byte-identical files.
        """
        if self.model is None:
            raise ValueError("cannot export a solution without its model")
        actions = self.model.actions
        out = io.StringIO()
        out.write("b,v,J,mu_index,mu_value,delta,sigma\n")
        for b in range(1, self.B + 1):
            for v in range(1, self.V + 1):
                a = int(self.mu[b, v])
                out.write(
                    f"{b},{v},{float(self.J[b, v])!r},{a},{float(actions[a])!r},"
                    f"{float(self.delta[b, v])!r},{float(self.sigma[b, v])!r}\n"
                )
        out.write(f"0,{self.V},0,,,,\n")
        return out.getvalue()


def solution_from_csv(text: str) -> SolutionTable:
    """Re-import a solution exported by ``SolutionTable.to_csv``.

    The model is not recoverable from the file; the returned table has
    ``model=None`` and ``solver_id='csv'``.
    """
    lines = text.strip().split("\n")
    if lines[0] != "b,v,J,mu_index,mu_value,delta,sigma":
        raise ValueError(f"unexpected CSV header {lines[0]!r}")
    rows = [line.split(",") for line in lines[1:]]
    terminal = rows[-1]
    if terminal[0] != "0":
        raise ValueError("terminal row missing")
    body = rows[:-1]
    B = max(int(r[0]) for r in body)
    V = int(terminal[1])
    J = np.zeros((B + 1, V + 1))
    mu = np.zeros((B + 1, V + 1), dtype=int)
    delta = np.zeros((B + 1, V + 1))
    sigma = np.zeros((B + 1, V + 1))
    for r in body:
        b, v = int(r[0]), int(r[1])
        J[b, v] = float(r[2])
        mu[b, v] = int(r[3])
        delta[b, v] = float(r[5])
        sigma[b, v] = float(r[6])
    return SolutionTable(J=J, mu=mu, delta=delta, sigma=sigma, solver_id="csv")


def _greedy(model: ValidatedModel, x: float) -> tuple[int, float]:
    """Smallest minimizer and minimum of c(s) - s*x over the action set."""
    obj = model.c - model.actions * x
    a = int(np.argmin(obj))  # first occurrence = smallest action
    return a, float(obj[a])


def g_map(model: ValidatedModel, x: float) -> int:
    """The non-decreasing selection x -> min argmin_s {c(s) - s*x}.

    The optimal policy factors through this single map: mu(b, v) is g
    evaluated at r(v) + sigma(b, v-1).
    """
    return _greedy(model, x)[0]


def apply_T(model: ValidatedModel, b: int, v: int, x: float) -> float:
    """One step of the increment operator: x + h(b) + min_s {c(s) - s[r(v)+x]}.

    Iterating this operator in v generates sigma(b, .); it is non-decreasing
    in x, which is what makes the in-b monotonicity argument go through.
    """
    _, m = _greedy(model, model.r_of(v) + x)
    # grouped as x + (h + m) to match the running sum in solve_recursive exactly
    return x + (model.h_of(b) + m)


def solve_recursive(model: ValidatedModel) -> SolutionTable:
    """Solve by the increment recursion, exact in B*V*|S| inner evaluations.

    For each b, delta(b, v) = h(b) + min_s {c(s) - s[r(v) + sigma(b, v-1)]}
    with sigma the running sum of delta; J is then assembled from the
    increments: J(b, 1) = J(b-1, V) + delta(b, 1) and
    J(b, v) = J(b, v-1) + delta(b, v).
    """
    B, V = model.B, model.V
    J = np.zeros((B + 1, V + 1))
    mu = np.zeros((B + 1, V + 1), dtype=int)
    delta = np.zeros((B + 1, V + 1))
    sigma = np.zeros((B + 1, V + 1))
    for b in range(1, B + 1):
        hb = model.h_of(b)
        sig = 0.0
        for v in range(1, V + 1):
            a, m = _greedy(model, model.r_of(v) + sig)
            d = hb + m
            delta[b, v] = d
            sig += d
            sigma[b, v] = sig
            mu[b, v] = a
        J[b, 1] = J[b - 1, V] + delta[b, 1]
        for v in range(2, V + 1):
            J[b, v] = J[b, v - 1] + delta[b, v]
    return SolutionTable(J=J, mu=mu, delta=delta, sigma=sigma,
                         solver_id="recursive", model=model)


def bellman_backup(model: ValidatedModel, J: np.ndarray, b: int, v: int) -> tuple[float, int]:
    """One Bellman backup at (b, v) against the given J table.

    Returns the minimal expected one-step-plus-continuation cost and the
    smallest minimizing action index.  Success moves to (b-1, V); failure
    decays to (b, v-1), or ejects to (b-1, V) when v = 1.
    """
    s = model.actions
    down = J[b - 1, model.V]
    cont = J[b, v - 1] if v > 1 else down
    vals = model.c + model.h_of(b) + s * (down - model.r_of(v)) + (1.0 - s) * cont
    a = int(np.argmin(vals))
    return float(vals[a]), a


def _increments_from_J(J: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reconstruct delta and sigma from J differences."""
    B, V = J.shape[0] - 1, J.shape[1] - 1
    delta = np.zeros((B + 1, V + 1))
    for b in range(1, B + 1):
        delta[b, 1] = J[b, 1] - J[b - 1, V]
        for v in range(2, V + 1):
            delta[b, v] = J[b, v] - J[b, v - 1]
    sigma = np.cumsum(delta, axis=1)
    sigma[0, :] = 0.0
    return delta, sigma


def value_iteration(model: ValidatedModel, tol: float = 1e-9,
                    max_sweeps: int | None = None) -> SolutionTable:
    """Solve by in-place Bellman sweeps from J = 0.

    The transition graph is a DAG under the sweep order (b ascending, v
    ascending), so the first sweep is already exact and the second certifies
    convergence.  ``max_sweeps`` defaults to B*V + 1, which bounds any sweep
    order since every episode ends within B*V slots.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    B, V = model.B, model.V
    if max_sweeps is None:
        max_sweeps = B * V + 1
    if max_sweeps < 1:
        raise ValueError("max_sweeps must be >= 1")
    J = np.zeros((B + 1, V + 1))
    residual = np.inf
    sweeps = 0
    while residual > tol:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"no convergence after {max_sweeps} sweeps; sup-norm residual {residual:g}"
            )
        residual = 0.0
        for b in range(1, B + 1):
            for v in range(1, V + 1):
                new, _ = bellman_backup(model, J, b, v)
                residual = max(residual, abs(new - J[b, v]))
                J[b, v] = new
        sweeps += 1
    mu = np.zeros((B + 1, V + 1), dtype=int)
    for b in range(1, B + 1):
        for v in range(1, V + 1):
            _, mu[b, v] = bellman_backup(model, J, b, v)
    delta, sigma = _increments_from_J(J)
    return SolutionTable(J=J, mu=mu, delta=delta, sigma=sigma,
                         solver_id="value_iteration", model=model, sweeps=sweeps)


def evaluate_policy(model: ValidatedModel, policy: PolicyTable) -> np.ndarray:
    """Exact expected total cost of a fixed policy, state by state.

    A single backward pass in the order (b ascending, v ascending) suffices:
    each state depends only on (b, v-1) and (b-1, V), both already solved.
    """
    B, V = model.B, model.V
    J = np.zeros((B + 1, V + 1))
    for b in range(1, B + 1):
        for v in range(1, V + 1):
            a = policy.s_at(b, v)
            s = float(model.actions[a])
            down = J[b - 1, V]
            cont = J[b, v - 1] if v > 1 else down
            J[b, v] = (model.c_of(a) + model.h_of(b)
                       + s * (down - model.r_of(v)) + (1.0 - s) * cont)
    return J


def policy_iteration(model: ValidatedModel) -> SolutionTable:
    """Solve by exact policy iteration from the all-lowest-action policy.

    Evaluation is an exact backward DAG pass (no linear solve, no
    tolerance); improvement is greedy with low ties.  Terminates because the
    policy space is finite and every policy is proper.
    """
    B, V = model.B, model.V
    policy = PolicyTable(action_index=np.zeros((B + 1, V + 1), dtype=int))
    iterations = 0
    while True:
        iterations += 1
        J = evaluate_policy(model, policy)
        improved = policy.action_index.copy()
        for b in range(1, B + 1):
            for v in range(1, V + 1):
                _, improved[b, v] = bellman_backup(model, J, b, v)
        if np.array_equal(improved, policy.action_index):
            break
        policy = PolicyTable(action_index=improved)
    delta, sigma = _increments_from_J(J)
    return SolutionTable(J=J, mu=policy.action_index.copy(), delta=delta, sigma=sigma,
                         solver_id="policy_iteration", model=model, sweeps=iterations)


def near_tie_states(solution: SolutionTable, window: float = 1e-12) -> list[tuple[int, int]]:
    """States where some non-chosen action comes within ``window`` of optimal.

    Diagnostic for float-sensitive tie-breaking; the solvers themselves use
    exact comparisons.
    """
    model = solution.model
    if model is None:
        raise ValueError("solution carries no model")
    out = []
    for b in range(1, solution.B + 1):
        for v in range(1, solution.V + 1):
            x = model.r_of(v) + solution.sigma[b, v - 1]
            obj = model.c - model.actions * x
            best = obj.min()
            if np.sum(obj <= best + window) > 1:
                out.append((b, v))
    return out
