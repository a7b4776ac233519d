import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from budgeted_contracts import (
    Additive,
    Contract,
    Instance,
    InputError,
    InfeasibleSetError,
    SizeCapError,
    Table,
    XosClauses,
    bits,
    classify,
    demand,
    enumerate_equilibria,
    gen_profit_lb_two,
    gen_subadditive_lb,
    is_nash_equilibrium,
    light_agents,
    marginal,
    mask_of,
    optimal_contract_for,
    payment,
    profit,
    restrict,
    singleton_payment,
    to_table,
    value,
)
from budgeted_contracts.corpora import submodular_corpus, xos_corpus

ALL3 = 0b111
ALL4 = 0b1111


# ---------------------------------------------------------------------------
# value / marginal oracles
# ---------------------------------------------------------------------------


def test_value_xos_separation(separation):
    assert value(separation.reward, ALL3) == pytest.approx(1.0)
    assert value(separation.reward, 0) == 0.0
    assert value(separation.reward, 0b110) == pytest.approx(3 / 5)


def test_marginal_examples(separation, uniform4):
    assert marginal(separation.reward, ALL3, 2) == pytest.approx(1 / 5)
    add = Additive((0.3, 0.2))
    assert marginal(add, 0b11, 1) == pytest.approx(0.2)
    assert marginal(uniform4.reward, ALL4, 0) == pytest.approx(1 / 4)


def test_marginal_requires_membership(separation):
    with pytest.raises(InputError):
        marginal(separation.reward, 0b011, 2)


def test_team_out_of_range(separation):
    with pytest.raises(InputError):
        value(separation.reward, 1 << 3)


# ---------------------------------------------------------------------------
# payment / profit / contracts
# ---------------------------------------------------------------------------


def test_payment_examples(uniform4):
    assert payment(uniform4, ALL4) == pytest.approx(1.0)
    assert payment(uniform4, 0) == 0.0
    two = gen_profit_lb_two(0.4, 1.0, 0.1)
    assert two.reward.values == pytest.approx((0.5, 0.3))
    assert two.costs == pytest.approx((0.2, 0.009))
    assert payment(two, 0b01) == pytest.approx(2 / 5)


def test_payment_conventions():
    plateau = Table((0.0, 0.5, 0.5, 0.5))  # both marginals vanish inside {0,1}
    free = Instance(2, (0.0, 0.0), plateau)
    assert payment(free, 0b11) == 0.0  # 0/0 terms contribute nothing
    costly = Instance(2, (0.0, 0.3), plateau)
    assert payment(costly, 0b11) == math.inf  # positive cost, zero marginal
    assert payment(costly, 0b10) == pytest.approx(0.3 / 0.5)


def test_profit_examples(single_agent):
    assert profit(single_agent, 0b1) == pytest.approx(0.5)
    assert profit(single_agent, 0) == 0.0
    inst = Instance(2, (0.1, 0.1), Additive((0.5, 0.5)))
    assert profit(inst, 0b11) == pytest.approx(0.6)


def test_profit_sentinels():
    inst = Instance(2, (0.0, 0.2), Table((0.0, 0.5, 0.0, 0.5)))
    # positive reward but agent 1 is costly with zero marginal: ranks last
    assert profit(inst, 0b11) == -math.inf
    zero = Instance(1, (0.4,), Additive((0.0,)))
    assert profit(zero, 0b1) == 0.0


def test_optimal_contract_examples(single_agent, uniform4):
    assert optimal_contract_for(single_agent, 0b1).alpha == (0.5,)
    assert optimal_contract_for(single_agent, 0).alpha == (0.0,)
    assert optimal_contract_for(uniform4, ALL4).alpha == pytest.approx((0.25,) * 4)


def test_optimal_contract_infeasible():
    inst = Instance(1, (0.4,), Additive((0.0,)))
    with pytest.raises(InfeasibleSetError):
        optimal_contract_for(inst, 0b1)


# ---------------------------------------------------------------------------
# equilibria
# ---------------------------------------------------------------------------


def test_nash_examples(single_agent):
    assert is_nash_equilibrium(single_agent, Contract((0.5,)), 0b1)
    assert is_nash_equilibrium(single_agent, Contract((0.5,)), 0)
    assert not is_nash_equilibrium(single_agent, Contract((0.4,)), 0b1)


def test_enumerate_equilibria(single_agent):
    assert enumerate_equilibria(single_agent, Contract((0.5,))) == [0, 1]
    assert enumerate_equilibria(single_agent, Contract((0.6,))) == [1]
    inst = Instance(2, (0.1, 0.2), Additive((0.5, 0.5)))
    assert enumerate_equilibria(inst, Contract((0.0, 0.0))) == [0]


def test_enumeration_cap(single_agent):
    with pytest.raises(SizeCapError):
        enumerate_equilibria(single_agent, Contract((0.5,)), cap=0)


def test_below_threshold_contracts_have_unique_idle_equilibrium(single_agent):
    # any payment strictly below cost/f({i}) leaves shirking as the only
    # equilibrium, so the principal earns nothing
    for k in range(0, 50):
        alpha = 0.499 * k / 49
        assert enumerate_equilibria(single_agent, Contract((alpha,))) == [0]


def test_optimal_contract_is_equilibrium_on_corpus():
    for inst in submodular_corpus(15, seed=301, n_hi=7):
        for team in range(1 << inst.n):
            if payment(inst, team) == math.inf:
                continue
            contract = optimal_contract_for(inst, team)
            assert is_nash_equilibrium(inst, contract, team)


# ---------------------------------------------------------------------------
# demand oracle
# ---------------------------------------------------------------------------


def test_demand_examples(separation):
    assert demand(separation.reward, [0.1, 0.1, 0.1]) == ALL3
    assert demand(separation.reward, [0.9, 0.9, 0.9]) == 0
    assert demand(Additive((0.5, 0.5)), [0.2, 0.6]) == 0b01


def test_demand_rejects_negative_prices(separation):
    with pytest.raises(InputError):
        demand(separation.reward, [0.1, -0.1, 0.1])


def test_demand_matches_table_scan():
    import random

    rng = random.Random(9)
    for inst in xos_corpus(20, seed=302, n_lo=4, n_hi=9):
        table = to_table(inst.reward)
        for _ in range(8):
            q = [rng.randrange(0, 17) / 16 for _ in range(inst.n)]
            assert demand(inst.reward, q) == demand(table, q)


# ---------------------------------------------------------------------------
# light agents
# ---------------------------------------------------------------------------


def test_light_agents(separation, single_agent):
    assert light_agents(separation) == ALL3
    assert light_agents(single_agent) == 0b1  # boundary payment of exactly 1/2
    free = Instance(3, (0.0, 0.0, 0.0), Additive((0.2, 0.2, 0.2)))
    assert light_agents(free) == ALL3
    heavy = Instance(1, (0.9,), Additive((1.0,)))
    assert light_agents(heavy) == 0


def test_feasible_teams_have_at_most_one_heavy_agent():
    for inst in xos_corpus(20, seed=303, n_hi=8):
        light = light_agents(inst)
        for team in range(1 << inst.n):
            if payment(inst, team) <= 1.0 + 1e-9:
                assert (team & ~light).bit_count() <= 1


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


def test_classify_additive():
    got = classify(Additive((0.2, 0.3, 0.1)))
    assert got.is_monotone and got.is_submodular and got.is_subadditive


def test_classify_subadditive_not_submodular():
    inst = gen_subadditive_lb(4, 0.9, 1.0)
    got = classify(inst.reward)
    assert got.is_monotone and got.is_subadditive and not got.is_submodular


def test_classify_subadditivity_violation():
    t = Table((0.0, 0.2, 0.2, 0.9))  # f({0,1}) > f({0}) + f({1})
    assert not classify(t).is_subadditive


def test_classify_cap():
    with pytest.raises(SizeCapError):
        classify(Table(tuple([0.0] * 32)), cap=4)
    assert classify(Additive((0.001,) * 30), cap=16).is_submodular


# ---------------------------------------------------------------------------
# instance validation
# ---------------------------------------------------------------------------


def test_instance_validation():
    with pytest.raises(InputError):
        Instance(2, (0.1,), Additive((0.2, 0.2)))
    with pytest.raises(InputError):
        Instance(2, (-0.1, 0.0), Additive((0.2, 0.2)))
    with pytest.raises(InputError):
        Instance(2, (0.1, 0.1), Additive((0.8, 0.8)))  # reward above 1
    with pytest.raises(InputError):
        Instance(0, (), Additive(()))
    with pytest.raises(InputError):
        Contract((-0.1,))


def test_payment_monotone_for_submodular():
    for inst in submodular_corpus(10, seed=304, n_hi=7):
        for team in range(1, 1 << inst.n):
            p_team = payment(inst, team)
            for i in bits(team):
                assert payment(inst, team & ~(1 << i)) <= p_team + 1e-9


# ---------------------------------------------------------------------------
# property tests (dyadic inputs keep float arithmetic exact)
# ---------------------------------------------------------------------------

values_strategy = st.lists(
    st.integers(1, 10).map(lambda k: k / 64), min_size=1, max_size=6
)
cost_scale = st.integers(0, 24).map(lambda k: k / 16)


@st.composite
def additive_instances(draw):
    vals = draw(values_strategy)
    scales = draw(
        st.lists(cost_scale, min_size=len(vals), max_size=len(vals))
    )
    costs = tuple(s * v for s, v in zip(scales, vals))
    return Instance(len(vals), costs, Additive(tuple(vals)))


@given(additive_instances())
@settings(max_examples=120, deadline=None)
def test_additive_equals_single_clause_xos(inst):
    mirrored = Instance(inst.n, inst.costs, XosClauses((inst.reward.values,)))
    for team in range(1 << inst.n):
        assert value(inst.reward, team) == value(mirrored.reward, team)
        assert payment(inst, team) == payment(mirrored, team)
        assert profit(inst, team) == profit(mirrored, team)
        for i in bits(team):
            assert marginal(inst.reward, team, i) == marginal(
                mirrored.reward, team, i
            )


@given(additive_instances())
@settings(max_examples=120, deadline=None)
def test_payment_dominates_each_share(inst):
    full = (1 << inst.n) - 1
    for team in range(full + 1):
        pay = payment(inst, team)
        assert pay >= -1e-12
        f_team = value(inst.reward, team)
        for i in bits(team):
            m = f_team - value(inst.reward, team & ~(1 << i))
            share = 0.0 if (inst.costs[i] == 0 and m <= 0) else (
                math.inf if m <= 0 else inst.costs[i] / m
            )
            assert pay >= share - 1e-12


@given(additive_instances(), st.integers(0, 63))
@settings(max_examples=120, deadline=None)
def test_singleton_payment_consistency(inst, raw):
    i = raw % inst.n
    assert singleton_payment(inst, i) == payment(inst, 1 << i)


@given(
    st.lists(st.integers(0, 8), min_size=2, max_size=5),
    st.lists(st.integers(0, 8), min_size=2, max_size=5),
    st.lists(st.integers(0, 16), min_size=2, max_size=5),
)
@settings(max_examples=120, deadline=None)
def test_demand_clause_scan_equals_exhaustive(row1, row2, prices):
    n = min(len(row1), len(row2), len(prices))
    f = XosClauses(
        (
            tuple(v / 32 for v in row1[:n]),
            tuple(v / 32 for v in row2[:n]),
        )
    )
    q = [p / 32 for p in prices[:n]]
    assert demand(f, q) == demand(to_table(f), q)


def test_to_table_matches_direct_queries():
    # dyadic corpora keep sums exact, so materialized tables must agree
    # with direct clause evaluation on every team
    for inst in xos_corpus(10, seed=305, n_hi=8):
        table = to_table(inst.reward)
        for team in range(1 << inst.n):
            assert table.values[team] == value(inst.reward, team)


def test_restrict_matches_subtable(separation):
    sub = to_table(separation.reward)
    restricted = to_table(restrict(separation.reward, [0, 2]))
    assert restricted.values == tuple(
        sub.values[mask_of([0, 2][j] for j in bits(m))] for m in range(4)
    )
