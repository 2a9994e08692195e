"""Problem instances for the value-decay service-rate control queue.

A model is a finite batch of B identical jobs served one at a time in
discrete slots.  The head-of-line job starts at integer value V and loses
one unit of value on every failed service attempt; completing a job at
residual value v earns reward r(v), while every slot costs h(b) for
holding b jobs plus c(s) for attempting service at probability s.

Cost and reward functions are given either as explicit tables or as one of
five parametric families, and are materialized into lookup tables once at
validation time so that all downstream computation is exact and replayable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "ActionSet",
    "AssumptionFlags",
    "ConfigError",
    "CostSpec",
    "ModelConfig",
    "ValidationError",
    "ValidatedModel",
    "load_config",
    "materialize",
    "validate",
]

COST_KINDS = ("table", "linear", "affine", "constant", "log_barrier", "log")

# Arity of the params list for each parametric family.
_PARAM_COUNT = {"linear": 1, "affine": 2, "constant": 1, "log_barrier": 1, "log": 1}


class ConfigError(ValueError):
    """Malformed, mistyped, or out-of-range configuration input."""


class ValidationError(ValueError):
    """A model whose materialized tables violate a hard requirement."""


@dataclass(frozen=True)
class ActionSet:
    """Finite menu of service probabilities, strictly increasing in [0, 1]."""

    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) == 0:
            raise ConfigError("action set must be non-empty")
        for s in self.values:
            if not (0.0 <= s <= 1.0) or not math.isfinite(s):
                raise ConfigError(f"action {s!r} outside [0, 1]")
        if any(a >= b for a, b in zip(self.values, self.values[1:])):
            raise ConfigError("actions must be strictly increasing")

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class CostSpec:
    """One cost/reward function: an explicit table or a parametric family.

    Families (argument x is the job count, the residual value, or the
    service probability depending on where the spec is used):

      linear(a)       a*x
      affine(a, b)    a*x + b
      constant(k)     k
      log_barrier(k)  k*ln(1/(1-x))
      log(k)          k*ln(1+x)
    """

    kind: str
    params: tuple[float, ...] = ()
    values: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in COST_KINDS:
            raise ConfigError(f"unknown cost kind {self.kind!r}")
        if self.kind == "table":
            if len(self.values) == 0:
                raise ConfigError("table spec needs a non-empty values list")
            if self.params:
                raise ConfigError("table spec takes no params")
        else:
            want = _PARAM_COUNT[self.kind]
            if len(self.params) != want:
                raise ConfigError(
                    f"{self.kind} spec takes {want} parameter(s), got {len(self.params)}"
                )
            if self.values:
                raise ConfigError("parametric spec takes no values list")

    def evaluate(self, x: float) -> float:
        """Evaluate the family at one argument (not valid for tables)."""
        p = self.params
        if self.kind == "linear":
            return p[0] * x
        if self.kind == "affine":
            return p[0] * x + p[1]
        if self.kind == "constant":
            return p[0]
        if self.kind == "log_barrier":
            if x >= 1.0:
                return math.inf
            return -p[0] * math.log1p(-x)
        if self.kind == "log":
            return p[0] * math.log1p(x)
        raise ValidationError("table specs have no closed form; use materialize()")


@dataclass(frozen=True)
class ModelConfig:
    """One problem instance before table materialization."""

    B: int
    V: int
    actions: ActionSet
    holding: CostSpec
    service_cost: CostSpec
    reward: CostSpec

    def __post_init__(self):
        if not isinstance(self.B, int) or self.B < 1:
            raise ConfigError(f"B must be a positive integer, got {self.B!r}")
        if not isinstance(self.V, int) or self.V < 1:
            raise ConfigError(f"V must be a positive integer, got {self.V!r}")


@dataclass(frozen=True)
class AssumptionFlags:
    """Which standing monotonicity assumptions the materialized tables satisfy.

    Recomputed from the tables, never taken from input.  Solvers are correct
    regardless; the flags gate which structural guarantees the monotonicity
    checkers may assert.
    """

    h_nondecreasing: bool
    c_nondecreasing: bool
    r_nondecreasing: bool
    r_positive: bool


@dataclass(frozen=True)
class ValidatedModel:
    """A config with its cost functions materialized into lookup tables.

    ``h[b-1]`` is the holding cost with b jobs, ``c[i]`` the service cost of
    ``actions[i]``, and ``r[v-1]`` the reward for completing at residual
    value v.  Immutable after construction; safe to share across threads.
    """

    config: ModelConfig
    h: np.ndarray
    c: np.ndarray
    r: np.ndarray
    flags: AssumptionFlags

    @property
    def B(self) -> int:
        return self.config.B

    @property
    def V(self) -> int:
        return self.config.V

    @property
    def actions(self) -> np.ndarray:
        return np.asarray(self.config.actions.values)

    def h_of(self, b: int) -> float:
        return float(self.h[b - 1])

    def c_of(self, action_index: int) -> float:
        return float(self.c[action_index])

    def r_of(self, v: int) -> float:
        return float(self.r[v - 1])


def materialize(
    spec: CostSpec,
    domain_size: int,
    domain_kind: str,
    actions: ActionSet | None = None,
) -> np.ndarray:
    """Evaluate a CostSpec over its whole domain.

    ``domain_kind`` is one of ``job_index`` / ``value_index`` (arguments run
    1..domain_size; entry i holds the value at i+1) or ``action_value``
    (entry i holds the value at ``actions.values[i]``).
    """
    if domain_size < 1:
        raise ValidationError("domain_size must be >= 1")
    if domain_kind not in ("job_index", "value_index", "action_value"):
        raise ValidationError(f"unknown domain kind {domain_kind!r}")
    if domain_kind == "action_value":
        if actions is None:
            raise ValidationError("action_value materialization needs the action set")
        if domain_size != len(actions):
            raise ValidationError("domain_size must match the action set length")
        args: Sequence[float] = actions.values
    else:
        args = range(1, domain_size + 1)

    if spec.kind == "table":
        if len(spec.values) != domain_size:
            raise ValidationError(
                f"table of length {len(spec.values)} cannot cover a domain of "
                f"size {domain_size}"
            )
        out = np.array(spec.values, dtype=float)
    else:
        out = np.array([spec.evaluate(float(x)) for x in args], dtype=float)

    if not np.all(np.isfinite(out)):
        bad = int(np.flatnonzero(~np.isfinite(out))[0])
        raise ValidationError(
            f"{spec.kind} spec evaluates to a non-finite value at domain entry {bad}"
        )
    out.flags.writeable = False
    return out


def validate(config: ModelConfig) -> ValidatedModel:
    """Materialize all cost tables and compute the assumption flags.

    Succeeds even when the non-decreasing assumptions fail (solvers do not
    need them); a non-positive reward entry is a hard error because the
    model requires strictly positive completion rewards.
    """
    h = materialize(config.holding, config.B, "job_index")
    c = materialize(config.service_cost, len(config.actions), "action_value", config.actions)
    r = materialize(config.reward, config.V, "value_index")
    if np.any(r <= 0.0):
        bad = int(np.flatnonzero(r <= 0.0)[0]) + 1
        raise ValidationError(f"reward must be strictly positive; r({bad}) = {r[bad - 1]}")
    flags = AssumptionFlags(
        h_nondecreasing=bool(np.all(np.diff(h) >= 0.0)),
        c_nondecreasing=bool(np.all(np.diff(c) >= 0.0)),
        r_nondecreasing=bool(np.all(np.diff(r) >= 0.0)),
        r_positive=True,
    )
    return ValidatedModel(config=config, h=h, c=c, r=r, flags=flags)


_TOP_KEYS = {"B", "V", "actions", "holding", "service_cost", "reward"}


def _parse_cost_spec(obj, field: str) -> CostSpec:
    if not isinstance(obj, dict):
        raise ConfigError(f"{field}: expected an object, got {type(obj).__name__}")
    kind = obj.get("kind")
    if not isinstance(kind, str):
        raise ConfigError(f"{field}: missing or non-string 'kind'")
    allowed = {"kind", "values"} if kind == "table" else {"kind", "params"}
    extra = set(obj) - allowed
    if extra:
        raise ConfigError(f"{field}: unknown key(s) {sorted(extra)}")
    if kind == "table":
        values = obj.get("values")
        if not isinstance(values, list) or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in values
        ):
            raise ConfigError(f"{field}: 'values' must be a list of numbers")
        return CostSpec(kind=kind, values=tuple(float(x) for x in values))
    params = obj.get("params", [])
    if not isinstance(params, list) or not all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in params
    ):
        raise ConfigError(f"{field}: 'params' must be a list of numbers")
    return CostSpec(kind=kind, params=tuple(float(x) for x in params))


def load_config(text: str) -> ModelConfig:
    """Parse a JSON configuration document into a ModelConfig.

    The document is an object with exactly the keys ``B``, ``V``,
    ``actions``, ``holding``, ``service_cost``, ``reward``; unknown keys are
    rejected.  See the README for the full schema.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    missing = _TOP_KEYS - set(doc)
    if missing:
        raise ConfigError(f"missing key(s) {sorted(missing)}")
    extra = set(doc) - _TOP_KEYS
    if extra:
        raise ConfigError(f"unknown key(s) {sorted(extra)}")
    for key in ("B", "V"):
        if not isinstance(doc[key], int) or isinstance(doc[key], bool):
            raise ConfigError(f"{key} must be an integer")
    raw_actions = doc["actions"]
    if not isinstance(raw_actions, list) or not all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in raw_actions
    ):
        raise ConfigError("actions must be an array of numbers")
    return ModelConfig(
        B=doc["B"],
        V=doc["V"],
        actions=ActionSet(tuple(float(x) for x in raw_actions)),
        holding=_parse_cost_spec(doc["holding"], "holding"),
        service_cost=_parse_cost_spec(doc["service_cost"], "service_cost"),
        reward=_parse_cost_spec(doc["reward"], "reward"),
    )
