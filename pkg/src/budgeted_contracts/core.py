"""Instance model, set-function oracles, payments, and equilibrium checks.

A project is delegated to n binary-action agents. A set function f maps
each team (the agents exerting effort) to the project's success probability,
and each agent i has an effort cost c_i. Incentivizing a team S costs the
principal p(S) = sum_{i in S} c_i / f_S(i), where f_S(i) is i's marginal
contribution to S; her profit is g(S) = (1 - p(S)) * f(S).

Teams are encoded as integer bitmasks over agent indices 0..n-1 (agent i
present iff bit i is set). Everything in this module is a pure function of
immutable inputs, so instances and set functions are safe to share across
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

#: Absolute tolerance for feasibility / equilibrium / class checkers.
EPS = 1e-9

#: Teams are bitmasks, so agent counts are capped well below word size.
MAX_AGENTS = 63

#: Default cap for exhaustive subset enumeration (equilibria, brute force).
ENUM_CAP = 20

#: Default cap for exhaustive function-class verification.
CLASSIFY_CAP = 16


class ContractsError(Exception):
    """Base class for all library errors."""


class InputError(ContractsError):
    """Malformed argument: bad subset, negative price, shape mismatch."""


class SizeCapError(ContractsError):
    """Exhaustive operation requested above its enumeration cap."""


class PreconditionError(ContractsError):
    """A documented precondition of an operation does not hold."""


class InfeasibleSetError(ContractsError):
    """The requested team cannot be incentivized with finite payment."""


class SolverContractError(ContractsError):
    """A supplied solver returned output violating its contract."""


# ---------------------------------------------------------------------------
# bitmask helpers
# ---------------------------------------------------------------------------


def bits(team: int) -> Iterator[int]:
    """Yield the agent indices present in a team mask, ascending."""
    while team:
        low = team & -team
        yield low.bit_length() - 1
        team ^= low


def mask_of(agents: Sequence[int]) -> int:
    """Build a team mask from an iterable of agent indices."""
    team = 0
    for i in agents:
        team |= 1 << i
    return team


def team_indices(team: int) -> list[int]:
    """Sorted list of agent indices in a team mask."""
    return list(bits(team))


def _check_team(team: int, n: int) -> None:
    if team < 0 or team >> n:
        raise InputError(f"team {team:#b} has agents outside 0..{n - 1}")


def ceil_tol(x: float, tol: float = EPS) -> int:
    """Ceiling that snaps to the nearest integer first.

    Guards quantities like 2B/b that are integral in exact arithmetic but
    land an ulp off in floats; a raw ceil would then be off by one.
    """
    nearest = round(x)
    if abs(x - nearest) <= tol:
        return int(nearest)
    return math.ceil(x)


def floor_tol(x: float, tol: float = EPS) -> int:
    """Floor with the same snap-to-integer guard as :func:`ceil_tol`."""
    nearest = round(x)
    if abs(x - nearest) <= tol:
        return int(nearest)
    return math.floor(x)


# ---------------------------------------------------------------------------
# set-function representations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Additive:
    """f(S) = sum of per-agent values over S."""

    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if any(v < 0 for v in self.values):
            raise InputError("additive values must be non-negative")

    @property
    def n(self) -> int:
        return len(self.values)

    def value(self, team: int) -> float:
        return sum(self.values[i] for i in bits(team))


@dataclass(frozen=True)
class XosClauses:
    """f(S) = max over clauses of the clause's additive sum on S.

    Every function of this form is fractionally subadditive (XOS); an
    additive function is the one-clause special case.
    """

    clauses: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(float(v) for v in row) for row in self.clauses)
        object.__setattr__(self, "clauses", rows)
        if not rows:
            raise InputError("XOS representation needs at least one clause")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise InputError("all clauses must have the same width")
        if any(v < 0 for row in rows for v in row):
            raise InputError("clause values must be non-negative")

    @property
    def n(self) -> int:
        return len(self.clauses[0])

    def value(self, team: int) -> float:
        idx = team_indices(team)
        return max(sum(row[i] for i in idx) for row in self.clauses)


@dataclass(frozen=True)
class Table:
    """Explicit value table indexed by team bitmask (length 2^n)."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        size = len(vals)
        if size == 0 or size & (size - 1):
            raise InputError("table length must be a power of two")

    @property
    def n(self) -> int:
        return (len(self.values) - 1).bit_length()

    def value(self, team: int) -> float:
        return self.values[team]


SetFunction = Union[Additive, XosClauses, Table]


def value(f: SetFunction, team: int) -> float:
    """Value-oracle query: return f(team)."""
    _check_team(team, f.n)
    return f.value(team)


def marginal(f: SetFunction, team: int, agent: int) -> float:
    """Marginal contribution f(S) - f(S minus {agent}); requires agent in S."""
    _check_team(team, f.n)
    if not (team >> agent) & 1:
        raise InputError(f"agent {agent} is not in the team")
    return f.value(team) - f.value(team & ~(1 << agent))


def to_table(f: SetFunction) -> Table:
    """Materialize any representation as an explicit table."""
    if isinstance(f, Table):
        return f
    n = f.n
    size = 1 << n
    if isinstance(f, Additive):
        vals = [0.0] * size
        for m in range(1, size):
            low = m & -m
            vals[m] = vals[m ^ low] + f.values[low.bit_length() - 1]
        return Table(tuple(vals))
    acc = None
    for row in f.clauses:
        vals = [0.0] * size
        for m in range(1, size):
            low = m & -m
            vals[m] = vals[m ^ low] + row[low.bit_length() - 1]
        arr = np.asarray(vals)
        acc = arr if acc is None else np.maximum(acc, arr)
    return Table(tuple(float(v) for v in acc))


def restrict(f: SetFunction, agents: Sequence[int]) -> SetFunction:
    """Restrict f to a sub-list of agents, re-indexed to 0..len(agents)-1."""
    agents = list(agents)
    if len(set(agents)) != len(agents):
        raise InputError("duplicate agents in restriction")
    for i in agents:
        if not 0 <= i < f.n:
            raise InputError(f"agent {i} out of range")
    if isinstance(f, Additive):
        return Additive(tuple(f.values[i] for i in agents))
    if isinstance(f, XosClauses):
        return XosClauses(tuple(tuple(row[i] for i in agents) for row in f.clauses))
    vals = []
    for m in range(1 << len(agents)):
        vals.append(f.values[mask_of(agents[j] for j in bits(m))])
    return Table(tuple(vals))


def demand(f: SetFunction, prices: Sequence[float]) -> int:
    """Demand-oracle query: a team maximizing f(S) - sum of prices over S.

    For clause representations each clause j contributes the candidate
    S_j = {i : clause_j[i] > q_i} (price ties excluded); the surplus optimum
    is attained at one of these, so scoring the candidates under the true f
    is exact. Ties break toward the lexicographically smallest bitmask, which
    matches an ascending exhaustive scan.
    """
    prices = [float(q) for q in prices]
    if len(prices) != f.n:
        raise InputError("price vector length must equal the agent count")
    if any(q < 0 for q in prices):
        raise InputError("prices must be non-negative")
    if isinstance(f, Additive):
        return mask_of(i for i, v in enumerate(f.values) if v > prices[i])
    if isinstance(f, XosClauses):
        best_team, best_surplus = 0, None
        seen = set()
        for row in f.clauses:
            cand = mask_of(i for i, v in enumerate(row) if v > prices[i])
            if cand in seen:
                continue
            seen.add(cand)
            surplus = f.value(cand) - sum(prices[i] for i in bits(cand))
            if (
                best_surplus is None
                or surplus > best_surplus
                or (surplus == best_surplus and cand < best_team)
            ):
                best_team, best_surplus = cand, surplus
        return best_team
    best_team, best_surplus = 0, f.values[0]
    qsum = [0.0] * len(f.values)
    for m in range(1, len(f.values)):
        low = m & -m
        qsum[m] = qsum[m ^ low] + prices[low.bit_length() - 1]
        surplus = f.values[m] - qsum[m]
        if surplus > best_surplus:
            best_team, best_surplus = m, surplus
    return best_team


# ---------------------------------------------------------------------------
# instances and contracts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    """A contract-design instance: agent count, effort costs, reward function.

    Reward values are success probabilities, so they must lie in [0, 1];
    costs are non-negative and measured in fractions of the unit reward.
    """

    n: int
    costs: tuple[float, ...]
    reward: SetFunction

    def __post_init__(self):
        object.__setattr__(self, "costs", tuple(float(c) for c in self.costs))
        if self.n < 1:
            raise InputError("instance needs at least one agent")
        if self.n > MAX_AGENTS:
            raise InputError(f"at most {MAX_AGENTS} agents are supported")
        if len(self.costs) != self.n:
            raise InputError("cost vector length must equal the agent count")
        if any(c < 0 or not math.isfinite(c) for c in self.costs):
            raise InputError("costs must be finite and non-negative")
        if self.reward.n != self.n:
            raise InputError("reward function is over the wrong agent count")
        lo, hi = _value_range(self.reward)
        if lo < -EPS or hi > 1.0 + EPS:
            raise InputError("reward values must lie in [0, 1]")


def _value_range(f: SetFunction) -> tuple[float, float]:
    if isinstance(f, Additive):
        return 0.0, sum(f.values)
    if isinstance(f, XosClauses):
        return 0.0, max(sum(row) for row in f.clauses)
    return min(f.values), max(f.values)


@dataclass(frozen=True)
class Contract:
    """Per-agent payments on project success."""

    alpha: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        if any(a < 0 or not math.isfinite(a) for a in self.alpha):
            raise InputError("contract payments must be finite and non-negative")

    def total(self) -> float:
        return sum(self.alpha)


def _pay_term(cost: float, margin: float) -> float:
    # Convention: 0/0 -> 0, positive/0 -> +inf. A non-positive margin with
    # positive cost means the agent cannot be incentivized in this team.
    if margin <= 0.0:
        return 0.0 if cost <= 0.0 else math.inf
    return cost / margin


def payment(inst: Instance, team: int) -> float:
    """Minimum total payment incentivizing exactly this team (may be +inf)."""
    _check_team(team, inst.n)
    f = inst.reward
    f_team = f.value(team)
    total = 0.0
    for i in bits(team):
        total += _pay_term(inst.costs[i], f_team - f.value(team & ~(1 << i)))
        if total == math.inf:
            return math.inf
    return total


def singleton_payment(inst: Instance, agent: int) -> float:
    """Payment needed to incentivize agent i alone: c_i / f({i})."""
    if not 0 <= agent < inst.n:
        raise InputError(f"agent {agent} out of range")
    return _pay_term(inst.costs[agent], inst.reward.value(1 << agent))


def profit(inst: Instance, team: int) -> float:
    """Principal's expected utility (1 - p(S)) * f(S).

    An unincentivizable team with positive reward maps to -inf so solvers
    rank it last; if f(S) = 0 the profit is 0 regardless of payment.
    """
    _check_team(team, inst.n)
    f_team = inst.reward.value(team)
    if f_team == 0.0:
        return 0.0
    pay = payment(inst, team)
    if pay == math.inf:
        return -math.inf
    return (1.0 - pay) * f_team


def optimal_contract_for(inst: Instance, team: int) -> Contract:
    """Cheapest contract making this team an equilibrium: alpha_i = c_i / f_S(i)."""
    _check_team(team, inst.n)
    f = inst.reward
    f_team = f.value(team)
    alpha = [0.0] * inst.n
    for i in bits(team):
        term = _pay_term(inst.costs[i], f_team - f.value(team & ~(1 << i)))
        if term == math.inf:
            raise InfeasibleSetError(
                f"agent {i} has zero marginal but positive cost in this team"
            )
        alpha[i] = term
    return Contract(tuple(alpha))


def is_nash_equilibrium(
    inst: Instance, contract: Contract, team: int, tol: float = EPS
) -> bool:
    """Check the pure-equilibrium conditions of a contract for a team.

    Team members must not gain by shirking, and outsiders must not gain by
    exerting effort, under success-contingent payments alpha.
    """
    _check_team(team, inst.n)
    if len(contract.alpha) != inst.n:
        raise InputError("contract length must equal the agent count")
    f = inst.reward
    f_team = f.value(team)
    for i in range(inst.n):
        a = contract.alpha[i]
        bit = 1 << i
        if team & bit:
            if a * f_team - inst.costs[i] < a * f.value(team & ~bit) - tol:
                return False
        else:
            if a * f_team < a * f.value(team | bit) - inst.costs[i] - tol:
                return False
    return True


def enumerate_equilibria(
    inst: Instance, contract: Contract, cap: int = ENUM_CAP
) -> list[int]:
    """All equilibrium teams of a contract, in ascending bitmask order."""
    if inst.n > cap:
        raise SizeCapError(f"equilibrium enumeration capped at n <= {cap}")
    return [
        team
        for team in range(1 << inst.n)
        if is_nash_equilibrium(inst, contract, team)
    ]


def contract_profit(inst: Instance, contract: Contract, team: int) -> float:
    """Principal's realized utility when a given contract induces a team."""
    _check_team(team, inst.n)
    return (1.0 - contract.total()) * inst.reward.value(team)


def light_agents(inst: Instance) -> int:
    """Mask of agents incentivizable alone for at most half the reward."""
    return mask_of(
        i for i in range(inst.n) if singleton_payment(inst, i) <= 0.5 + EPS
    )


# ---------------------------------------------------------------------------
# function-class verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FunctionClasses:
    is_monotone: bool
    is_submodular: bool
    is_subadditive: bool


def classify(f: SetFunction, cap: int = CLASSIFY_CAP) -> FunctionClasses:
    """Exhaustively verify monotonicity, submodularity, and subadditivity.

    Submodularity is checked through the equivalent pairwise
    diminishing-returns condition f(T+i) - f(T) >= f(T+i+j) - f(T+j),
    which needs O(2^n n^2) comparisons instead of quantifying over all
    nested set pairs. Additive functions above the cap are classified
    analytically; other representations raise.
    """
    n = f.n
    if n > cap:
        if isinstance(f, Additive):
            return FunctionClasses(True, True, True)
        raise SizeCapError(f"class verification capped at n <= {cap}")
    t = np.asarray(to_table(f).values)
    return FunctionClasses(
        _table_is_monotone(t, n),
        _table_is_submodular(t, n),
        _table_is_subadditive(t, n),
    )


def _table_is_monotone(t: np.ndarray, n: int) -> bool:
    masks = np.arange(1 << n)
    return all(np.all(t[masks | (1 << i)] >= t - EPS) for i in range(n))


def _table_is_submodular(t: np.ndarray, n: int) -> bool:
    masks = np.arange(1 << n)
    for i in range(n):
        for j in range(i + 1, n):
            bi, bj = 1 << i, 1 << j
            base = masks[(masks & (bi | bj)) == 0]
            if not np.all(
                t[base | bi] + t[base | bj] >= t[base | bi | bj] + t[base] - EPS
            ):
                return False
    return True


def _table_is_subadditive(t: np.ndarray, n: int) -> bool:
    masks = np.arange(1 << n)
    return all(np.all(t[masks | m] <= t[m] + t + EPS) for m in range(1 << n))


def is_submodular(f: SetFunction, cap: int = CLASSIFY_CAP) -> bool:
    """Submodularity check alone (cheaper than a full classification)."""
    if f.n > cap:
        if isinstance(f, Additive):
            return True
        raise SizeCapError(f"class verification capped at n <= {cap}")
    return _table_is_submodular(np.asarray(to_table(f).values), f.n)
