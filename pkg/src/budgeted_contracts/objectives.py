"""Objective evaluators and the sandwiched-objective verification checks.

The three named objectives are reward f(S), profit (1 - p(S)) * f(S), and
welfare f(S) - c(S); convex combinations of objectives are objectives again.
An objective is "well-behaved" for the reduction machinery when it is
sandwiched between profit and reward and loses at most one agent's own
singleton value when that agent is dropped from a team:

    g(S) <= phi(S) <= f(S)          and
    phi(S) <= f(S - {i}) + phi({i})   for every i in S.

Both conditions can be verified exhaustively at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .core import (
    ENUM_CAP,
    EPS,
    Instance,
    InputError,
    SizeCapError,
    bits,
    profit,
    value,
)

#: Convex weights must sum to one within this tolerance.
WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class Reward:
    pass


@dataclass(frozen=True)
class Profit:
    pass


@dataclass(frozen=True)
class Welfare:
    pass


@dataclass(frozen=True)
class Convex:
    """Weighted mix of objectives; weights are positive and sum to one."""

    components: tuple["Objective", ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if len(self.components) != len(self.weights) or not self.components:
            raise InputError("components and weights must align and be non-empty")
        if any(w <= 0 for w in self.weights):
            raise InputError("convex weights must be strictly positive")
        if abs(sum(self.weights) - 1.0) > WEIGHT_TOL:
            raise InputError("convex weights must sum to 1")


Objective = Union[Reward, Profit, Welfare, Convex]

REWARD = Reward()
PROFIT = Profit()
WELFARE = Welfare()


def evaluate(obj: Objective, inst: Instance, team: int) -> float:
    """Evaluate an objective on a team. Welfare is returned unclamped."""
    if isinstance(obj, Reward):
        return value(inst.reward, team)
    if isinstance(obj, Profit):
        return profit(inst, team)
    if isinstance(obj, Welfare):
        return value(inst.reward, team) - sum(inst.costs[i] for i in bits(team))
    return sum(
        w * evaluate(c, inst, team) for c, w in zip(obj.components, obj.weights)
    )


def evaluate_given(
    obj: Objective, inst: Instance, team: int, pay: float, val: float
) -> float:
    """Evaluate with payment and reward precomputed (solver hot loop)."""
    if isinstance(obj, Reward):
        return val
    if isinstance(obj, Profit):
        if val == 0.0:
            return 0.0
        return -float("inf") if pay == float("inf") else (1.0 - pay) * val
    if isinstance(obj, Welfare):
        return val - sum(inst.costs[i] for i in bits(team))
    return sum(
        w * evaluate_given(c, inst, team, pay, val)
        for c, w in zip(obj.components, obj.weights)
    )


def objective_name(obj: Objective) -> str:
    if isinstance(obj, Reward):
        return "reward"
    if isinstance(obj, Profit):
        return "profit"
    if isinstance(obj, Welfare):
        return "welfare"
    return "convex"


def check_best_conditions(
    obj: Objective, inst: Instance, cap: int = ENUM_CAP, tol: float = EPS
) -> bool:
    """Exhaustively verify the sandwich and single-agent-drop conditions."""
    if inst.n > cap:
        raise SizeCapError(f"objective verification capped at n <= {cap}")
    singles = [evaluate(obj, inst, 1 << i) for i in range(inst.n)]
    for team in range(1 << inst.n):
        phi = evaluate(obj, inst, team)
        if not (profit(inst, team) <= phi + tol):
            return False
        if not (phi <= value(inst.reward, team) + tol):
            return False
        for i in bits(team):
            rest = value(inst.reward, team & ~(1 << i))
            if not (phi <= rest + singles[i] + tol):
                return False
    return True


def key_property_gap(
    obj: Objective, inst: Instance, budget: float, cap: int = ENUM_CAP
) -> tuple[float, float]:
    """Gap check behind the heavy/light split of the reduction machinery.

    Returns (lhs, rhs) with lhs the exact budget-feasible optimum of the
    objective and rhs = k * MaxRewardLight(budget) + max_i phi({i}), where
    k is 1 for submodular rewards and 2 otherwise. Callers assert lhs <= rhs.
    """
    from .core import classify
    from .solvers import brute_force_max

    if inst.n > cap:
        raise SizeCapError(f"gap verification capped at n <= {cap}")
    if not 0 < budget <= 1:
        raise InputError("budget must lie in (0, 1]")
    lhs = brute_force_max(obj, inst, budget, cap=cap).value
    mrl = brute_force_max(REWARD, inst, budget, light_only=True, cap=cap).value
    coeff = 1.0 if classify(inst.reward).is_submodular else 2.0
    best_single = max(evaluate(obj, inst, 1 << i) for i in range(inst.n))
    return lhs, coeff * mrl + best_single
