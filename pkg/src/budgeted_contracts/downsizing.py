"""Team downsizing: shrink payment to a target fraction, keep value.

Two procedures and their composition:

* ``downsize_submodular``: bag-filling over the per-agent payment shares
  c_i / f_S(i). For submodular rewards and any integer M >= 3 it returns
  T inside S with psi(T) >= psi(S) / (M-1) for any subadditive psi, and
  either p(T) <= (2/M) p(S) or T a singleton.

* ``recover_marginals_xos``: given T inside S with an XOS reward, prune T
  to U so that every survivor keeps at least half its marginal relative to
  S while f(U) >= f(T) / 2. This repairs the non-monotone marginals that
  break the bag-filling payment bound beyond submodularity.

* ``downsize_xos``: bag-filling followed by marginal recovery. For XOS
  rewards it yields f(U) >= f(S) / (2M-2) and either p(U) <= (4/M) p(S)
  or U a singleton.

All comparisons inside the algorithms are raw float comparisons; the
guarantees tolerate either resolution of an exact tie.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    CLASSIFY_CAP,
    Additive,
    Instance,
    InputError,
    PreconditionError,
    XosClauses,
    _pay_term,
    bits,
    classify,
    mask_of,
    payment,
    value,
)
from .objectives import REWARD, Objective, Reward, evaluate


@dataclass(frozen=True)
class DownsizeParams:
    """Target parameter M >= 3 and the subadditive objective to preserve."""

    m: int
    psi: Objective = REWARD

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 3:
            raise InputError("downsizing parameter m must be an integer >= 3")


@dataclass(frozen=True)
class DownsizeResult:
    subset: int
    payment_before: float
    payment_after: float
    objective_before: float
    objective_after: float
    singleton_exit: bool


def _result(
    inst: Instance, before: int, after: int, psi: Objective, singleton_exit: bool
) -> DownsizeResult:
    return DownsizeResult(
        subset=after,
        payment_before=payment(inst, before),
        payment_after=payment(inst, after),
        objective_before=evaluate(psi, inst, before),
        objective_after=evaluate(psi, inst, after),
        singleton_exit=singleton_exit,
    )


def downsize_submodular(
    inst: Instance, team: int, params: DownsizeParams, check: bool = False
) -> DownsizeResult:
    """Bag-filling downsizing for submodular rewards.

    Agents whose payment share exceeds p(S)/M are set aside first; if one of
    them alone already preserves a 1/(M-1) fraction of psi it is returned.
    Otherwise the remaining agents are consumed in ascending index order
    into bags that stop once their share sum passes p(S)/M; the first bag
    preserving the psi fraction is returned, falling back to the unconsumed
    remainder. ``check=True`` verifies the submodularity precondition
    exhaustively (small n only).
    """
    if team == 0:
        raise InputError("cannot downsize the empty team")
    if check:
        if not classify(inst.reward, cap=CLASSIFY_CAP).is_submodular:
            raise PreconditionError("reward function is not submodular")
        if not isinstance(params.psi, Reward):
            # the reward itself is subadditive whenever it is submodular
            _assert_subadditive(params.psi, inst)
    f = inst.reward
    f_team = f.value(team)
    share = {
        i: _pay_term(inst.costs[i], f_team - f.value(team & ~(1 << i)))
        for i in bits(team)
    }
    pay_team = sum(share.values())
    threshold = pay_team / params.m
    floor = evaluate(params.psi, inst, team) / (params.m - 1)

    outliers = [i for i in bits(team) if share[i] > threshold]
    for i in outliers:
        if evaluate(params.psi, inst, 1 << i) >= floor:
            return _result(inst, team, 1 << i, params.psi, singleton_exit=True)

    queue = [i for i in bits(team) if share[i] <= threshold]
    if len(outliers) >= params.m - 1:
        # With M-1 outliers (more is impossible: each share exceeds p/M),
        # the piece accounting would run out of bags, but folding the
        # cheapest outlier into the remainder still works: the remainder's
        # share total is below p/M and the cheapest outlier is at most
        # 1/(M-1) of the rest, which together stay within (2/M) p(S);
        # the other M-2 outliers each failed the value floor above.
        cheapest = min(outliers, key=lambda i: (share[i], i))
        fold = mask_of(queue) | (1 << cheapest)
        return _result(inst, team, fold, params.psi, singleton_exit=False)
    pos = 0
    for _ in range(params.m - len(outliers) - 2):
        bag, bag_sum = 0, 0.0
        while pos < len(queue) and bag_sum <= threshold:
            i = queue[pos]
            pos += 1
            bag |= 1 << i
            bag_sum += share[i]
        if evaluate(params.psi, inst, bag) >= floor:
            return _result(inst, team, bag, params.psi, singleton_exit=False)
    remainder = mask_of(queue[pos:])
    return _result(inst, team, remainder, params.psi, singleton_exit=False)


def recover_marginals_xos(inst: Instance, kept: int, team: int) -> int:
    """Prune ``kept`` until every survivor keeps half its marginal in ``team``.

    Repeatedly drops the agent with the smallest ratio between its current
    marginal in the pruned set and its marginal in the full team, as long as
    some agent violates the half-marginal condition. Agents whose team
    marginal is zero count as satisfying the condition (the 0/0 case) and
    are never removed; ratio ties drop the smallest index.
    """
    if kept & ~team:
        raise InputError("kept agents must form a subset of the team")
    f = inst.reward
    f_team = f.value(team)
    team_marg = {i: f_team - f.value(team & ~(1 << i)) for i in bits(kept)}
    current = kept
    while True:
        f_cur = f.value(current)
        worst, worst_ratio = None, math.inf
        violated = False
        for i in bits(current):
            target = team_marg[i]
            if target <= 0.0:
                continue
            own = f_cur - f.value(current & ~(1 << i))
            if own < 0.5 * target:
                violated = True
            ratio = own / target
            if ratio < worst_ratio:
                worst, worst_ratio = i, ratio
        if not violated:
            return current
        current &= ~(1 << worst)


def downsize_xos(
    inst: Instance, team: int, m: int, check: bool = False
) -> DownsizeResult:
    """Bag-filling plus marginal recovery for XOS rewards.

    The bag stage is run with psi equal to the reward itself; its share-sum
    bound needs no submodularity, and the recovery stage converts it into a
    true payment bound at the cost of a factor two on each side.
    """
    if check and not _certify_xos(inst):
        raise PreconditionError("reward representation cannot be certified XOS")
    inner = downsize_submodular(inst, team, DownsizeParams(m, REWARD), check=False)
    recovered = recover_marginals_xos(inst, inner.subset, team)
    return DownsizeResult(
        subset=recovered,
        payment_before=inner.payment_before,
        payment_after=payment(inst, recovered),
        objective_before=inner.objective_before,
        objective_after=value(inst.reward, recovered),
        singleton_exit=inner.singleton_exit,
    )


def _certify_xos(inst: Instance) -> bool:
    # Clause and additive forms are XOS by construction. A raw table cannot
    # be certified cheaply; submodularity is accepted as a sufficient
    # condition, otherwise table-backed callers own the precondition.
    if isinstance(inst.reward, (Additive, XosClauses)):
        return True
    return inst.n <= CLASSIFY_CAP and classify(inst.reward).is_submodular


def _assert_subadditive(psi: Objective, inst: Instance) -> None:
    # The guarantee accounting splits teams into disjoint pieces, so only
    # subadditivity across disjoint pairs is required (welfare satisfies
    # this whenever the reward does, despite failing on overlapping pairs).
    if inst.n > 10:
        raise PreconditionError("subadditivity debug check capped at n <= 10")
    vals = [evaluate(psi, inst, team) for team in range(1 << inst.n)]
    for a in range(1 << inst.n):
        rest = ((1 << inst.n) - 1) & ~a
        b = rest
        while True:
            if vals[a | b] > vals[a] + vals[b] + 1e-9:
                raise PreconditionError("psi is not subadditive on this instance")
            if b == 0:
                break
            b = (b - 1) & rest
