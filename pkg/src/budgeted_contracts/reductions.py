"""Constant-factor reductions between budgeted objectives.

The hub problem is MaxRewardLight(B): maximize reward over budget-feasible
teams of light agents. Any well-behaved (sandwiched) objective at any budget
reduces to it and back:

* to the hub: downsize a gamma-approximate light team with M = 5 (XOS path)
  or M = 3 (submodular path), then return the best of the downsized team and
  every budget-feasible singleton under the target objective. Factors:
  40 * gamma + 1 (XOS), 6 * gamma + 1 (submodular).

* from the hub: restrict the instance to light agents, scale costs by
  B'/B, solve the target objective there with any gamma-approximate solver,
  and return the best by reward of the solver's team and every light
  budget-feasible singleton. Factors: 20 * gamma (XOS), 6 * gamma
  (submodular).

Composing the two yields the equivalence of all (objective, budget) pairs,
with the overall factor the composition of the per-stage constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

from .core import (
    EPS,
    Instance,
    InputError,
    PreconditionError,
    SolverContractError,
    bits,
    light_agents,
    mask_of,
    payment,
    restrict,
    singleton_payment,
    value,
)
from .downsizing import DownsizeParams, downsize_submodular, downsize_xos
from .objectives import REWARD, Objective, evaluate
from .solvers import brute_force_max

Path = Literal["xos", "submodular"]

#: A solver takes (instance, budget, objective) and returns a team mask that
#: is budget-feasible and gamma-approximate for the objective.
Solver = Callable[[Instance, float, Objective], int]


@dataclass(frozen=True)
class ReductionOutcome:
    candidate: int
    candidate_value: float
    guarantee_factor: float
    budget_used: float
    path: Path


@dataclass(frozen=True)
class ScaledInstance:
    """Restriction to light agents with costs scaled by B'/B.

    ``instance`` is None when there are no light agents at all.
    """

    instance: Instance | None
    agents: tuple[int, ...]
    scale: float

    def to_original(self, team: int) -> int:
        return mask_of(self.agents[j] for j in bits(team))


def scale_instance(inst: Instance, budget: float, budget_prime: float) -> ScaledInstance:
    """Build the light-restricted instance with costs scaled by B'/B."""
    _check_budget(budget)
    _check_budget(budget_prime)
    agents = tuple(bits(light_agents(inst)))
    scale = budget_prime / budget
    if not agents:
        return ScaledInstance(instance=None, agents=(), scale=scale)
    scaled = Instance(
        n=len(agents),
        costs=tuple(inst.costs[i] * scale for i in agents),
        reward=restrict(inst.reward, agents),
    )
    return ScaledInstance(instance=scaled, agents=agents, scale=scale)


def reduce_to_mrl(
    inst: Instance,
    budget: float,
    obj: Objective,
    mrl_team: int,
    gamma: float = 1.0,
    path: Path = "xos",
) -> ReductionOutcome:
    """Turn a gamma-approximate light-reward team into an objective candidate.

    ``mrl_team`` must be a budget-feasible team of light agents. The pool is
    its downsized version plus every budget-feasible singleton (and the empty
    team); the pool member maximizing the objective is returned.
    """
    _check_budget(budget)
    light = light_agents(inst)
    if mrl_team & ~light:
        raise PreconditionError("hub input must contain only light agents")
    if payment(inst, mrl_team) > budget + EPS:
        raise PreconditionError("hub input is not budget-feasible")

    pool = [0]
    if mrl_team:
        if path == "xos":
            pool.append(downsize_xos(inst, mrl_team, 5).subset)
        else:
            pool.append(
                downsize_submodular(inst, mrl_team, DownsizeParams(3, REWARD)).subset
            )
    pool.extend(
        1 << i for i in range(inst.n) if singleton_payment(inst, i) <= budget + EPS
    )
    candidate = _best_by(pool, lambda team: evaluate(obj, inst, team))
    factor = 40.0 * gamma + 1.0 if path == "xos" else 6.0 * gamma + 1.0
    return ReductionOutcome(
        candidate=candidate,
        candidate_value=evaluate(obj, inst, candidate),
        guarantee_factor=factor,
        budget_used=payment(inst, candidate),
        path=path,
    )


def reduce_from_mrl(
    inst: Instance,
    budget: float,
    budget_prime: float,
    obj: Objective,
    solver: Solver,
    gamma: float = 1.0,
    path: Path = "xos",
) -> ReductionOutcome:
    """Approximate the light-reward hub via a solver for obj at budget B'.

    The solver runs on the scaled light instance; its team (mapped back to
    original indices) competes by reward against every light singleton that
    is budget-feasible at B. Every pool member is re-checked feasible at B.
    """
    scaled = scale_instance(inst, budget, budget_prime)
    pool = [0]
    if scaled.agents:
        team_scaled = solver(scaled.instance, budget_prime, obj)
        if payment(scaled.instance, team_scaled) > budget_prime + EPS:
            raise SolverContractError("solver output exceeds the scaled budget")
        mapped = scaled.to_original(team_scaled)
        if payment(inst, mapped) <= budget + EPS:
            pool.append(mapped)
        pool.extend(
            1 << i
            for i in scaled.agents
            if singleton_payment(inst, i) <= budget + EPS
        )
    candidate = _best_by(pool, lambda team: value(inst.reward, team))
    factor = 20.0 * gamma if path == "xos" else 6.0 * gamma
    return ReductionOutcome(
        candidate=candidate,
        candidate_value=value(inst.reward, candidate),
        guarantee_factor=factor,
        budget_used=payment(inst, candidate),
        path=path,
    )


def equivalence_pipeline(
    inst: Instance,
    obj_from: Objective,
    budget_from: float,
    obj_to: Objective,
    budget_to: float,
    solver_to: Solver,
    gamma: float = 1.0,
    path: Path = "xos",
) -> ReductionOutcome:
    """Solve Max-obj_from(B) given a solver for Max-obj_to(B').

    Stage one turns the solver into a hub approximation, stage two turns the
    hub team into a candidate for the source objective. The reported factor
    composes the per-stage constants (801 on the XOS path with an exact
    inner solver).
    """
    hub = reduce_from_mrl(
        inst, budget_from, budget_to, obj_to, solver_to, gamma=gamma, path=path
    )
    return reduce_to_mrl(
        inst,
        budget_from,
        obj_from,
        hub.candidate,
        gamma=hub.guarantee_factor,
        path=path,
    )


def brute_solver(inst: Instance, budget: float, obj: Objective) -> int:
    """Exact (gamma = 1) solver endpoint backed by exhaustive search."""
    return brute_force_max(obj, inst, budget).optimum


SOLVERS: dict[str, Solver] = {"brute": brute_solver}


def _best_by(pool: list[int], score: Callable[[int], float]) -> int:
    best_team, best_score = None, None
    for team in sorted(set(pool)):
        s = score(team)
        if best_score is None or s > best_score:
            best_team, best_score = team, s
    return best_team


def _check_budget(budget: float) -> None:
    if not 0 < budget <= 1:
        raise InputError("budgets must lie in (0, 1]")
