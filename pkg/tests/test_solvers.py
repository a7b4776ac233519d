import math

import pytest

from budgeted_contracts import (
    Additive,
    Instance,
    InputError,
    PreconditionError,
    SizeCapError,
    brute_force_max,
    build_rounded_table,
    fptas_additive_profit,
    knapsack_fptas,
    payment,
    value,
)
from budgeted_contracts.core import ceil_tol
from budgeted_contracts.corpora import additive_corpus, submodular_corpus
from budgeted_contracts.objectives import PROFIT, REWARD, WELFARE

ALL3 = 0b111


def test_brute_force_examples(separation):
    top = brute_force_max(REWARD, separation, 1.0)
    assert (top.optimum, top.value) == (ALL3, pytest.approx(1.0))
    low = brute_force_max(REWARD, separation, 0.49)
    assert (low.optimum, low.value) == (0b100, pytest.approx(2 / 5))
    tiny = brute_force_max(
        REWARD, Instance(2, (0.2, 0.2), Additive((0.4, 0.4))), 1e-6
    )
    assert (tiny.optimum, tiny.value) == (0, 0.0)


def test_brute_force_contract(separation):
    res = brute_force_max(PROFIT, separation, 1.0)
    assert res.payment <= 1.0 + 1e-9
    assert res.enumerated == 8
    assert res.value == pytest.approx(2 / 5)  # the free agent alone


def test_brute_force_cap_and_budget(separation):
    with pytest.raises(SizeCapError):
        brute_force_max(REWARD, separation, 1.0, cap=2)
    with pytest.raises(InputError):
        brute_force_max(REWARD, separation, 0.0)


def test_light_only_never_beats_unrestricted():
    for inst in submodular_corpus(12, seed=601, n_hi=8):
        for budget in (0.25, 0.5, 1.0):
            full = brute_force_max(REWARD, inst, budget).value
            light = brute_force_max(REWARD, inst, budget, light_only=True).value
            assert light <= full + 1e-12


def test_optimum_monotone_in_budget():
    for inst in submodular_corpus(12, seed=602, n_hi=8):
        for obj in (REWARD, PROFIT, WELFARE):
            prev = -math.inf
            for budget in (0.1, 0.3, 0.6, 1.0):
                cur = brute_force_max(obj, inst, budget).value
                assert cur >= prev - 1e-12
                prev = cur


# ---------------------------------------------------------------------------
# rounded-reward table
# ---------------------------------------------------------------------------


def test_rounded_table_invariants():
    inst = Instance(3, (0.05, 0.1, 0.02), Additive((0.5, 0.25, 0.125)))
    table = build_rounded_table(inst, epsilon=0.3, anchor=0.5)
    assert table.params.delta == 0.3 / 3
    assert table.n_levels == ceil_tol(9 / 0.3)
    assert len(table.payments) == table.n_levels + 1
    finite = [p for p in table.payments if p < math.inf]
    assert all(b >= a - 1e-12 for a, b in zip(finite, finite[1:]))

    # exhaustive oracle: cheapest team whose rounded reward reaches level k
    grid = table.params.delta * table.params.anchor
    for k in range(0, table.n_levels + 1, 7):
        best = math.inf
        for team in range(8):
            lvl = sum(
                min(math.floor(value(inst.reward, 1 << i) / grid + 1e-9), table.n_levels)
                for i in range(3)
                if (team >> i) & 1
            )
            if lvl >= k:
                best = min(best, payment(inst, team))
        assert table.payments[k] == pytest.approx(best) or (
            best == math.inf and table.payments[k] == math.inf
        )
        if table.payments[k] < math.inf:
            got = table.team(k)
            assert payment(inst, got) == pytest.approx(table.payments[k])


def test_rounded_table_requires_additive(uniform4):
    with pytest.raises(PreconditionError):
        build_rounded_table(uniform4, 0.1, 0.25)


# ---------------------------------------------------------------------------
# profit FPTAS
# ---------------------------------------------------------------------------


def test_fptas_two_agent_example():
    inst = Instance(2, (0.1, 0.1), Additive((0.5, 0.5)))
    res = fptas_additive_profit(inst, 1.0, 0.1)
    assert res.value >= 0.54
    assert res.optimum == 0b11
    assert res.payment <= 1.0 + 1e-12


def test_fptas_single_agent_exact():
    inst = Instance(1, (0.2,), Additive((0.8,)))
    for eps in (0.5, 0.1, 0.01):
        res = fptas_additive_profit(inst, 1.0, eps)
        assert res.value == pytest.approx(0.6)  # (1 - 0.25) * 0.8
        assert res.optimum == 0b1


def test_fptas_ratio_on_corpus():
    # the acceptance sweep pins n = 12; this covers the larger teams too
    for inst in additive_corpus(6, n=14, seed=603):
        opt = brute_force_max(PROFIT, inst, 0.8).value
        for eps in (0.3, 0.1, 0.02):
            res = fptas_additive_profit(inst, 0.8, eps)
            assert res.value >= (1 - eps) * opt - 1e-9
            assert res.payment <= 0.8 + 1e-9


def test_fptas_example_batch():
    for inst in additive_corpus(12, n=12, seed=605):
        opt = brute_force_max(PROFIT, inst, 1.0).value
        res = fptas_additive_profit(inst, 1.0, 0.05)
        assert res.value >= 0.95 * opt - 1e-9


def test_fptas_preconditions(uniform4):
    inst = Instance(2, (0.1, 0.1), Additive((0.5, 0.5)))
    with pytest.raises(PreconditionError):
        fptas_additive_profit(uniform4, 1.0, 0.1)  # table-backed reward
    with pytest.raises(InputError):
        fptas_additive_profit(inst, 1.0, 0.0)
    with pytest.raises(InputError):
        fptas_additive_profit(inst, 1.5, 0.1)


def test_fptas_zero_values():
    inst = Instance(2, (0.1, 0.0), Additive((0.0, 0.0)))
    res = fptas_additive_profit(inst, 1.0, 0.1)
    assert res.optimum == 0 and res.value == 0.0


# ---------------------------------------------------------------------------
# knapsack FPTAS for reward / welfare
# ---------------------------------------------------------------------------


def test_knapsack_examples():
    family = Instance(4, (1 / 16,) * 4, Additive((0.25,) * 4))
    res = knapsack_fptas(family, 1.0, 0.1, REWARD)
    assert res.value >= 0.9
    assert res.payment <= 1.0 + 1e-9

    # every item's weight c_i / f({i}) exceeds the budget: nothing fits
    nothing = Instance(2, (0.5, 0.5), Additive((0.25, 0.25)))
    assert knapsack_fptas(nothing, 1.0, 0.1, REWARD).optimum == 0

    free = Instance(3, (0.0, 0.0, 0.0), Additive((0.2, 0.3, 0.4)))
    res = knapsack_fptas(free, 0.5, 0.2, WELFARE)
    assert res.optimum == ALL3
    assert res.value == pytest.approx(0.9)


def test_knapsack_exact_when_rounding_lossless():
    # all values are multiples of the rounding grid eps * vmax / n_items
    inst = Instance(3, (0.2, 0.05, 0.05), Additive((0.5, 0.25, 0.25)))
    res = knapsack_fptas(inst, 0.5, 0.5, REWARD)
    opt = brute_force_max(REWARD, inst, 0.5)
    assert res.value == opt.value


def test_knapsack_ratio_on_corpus():
    for inst in additive_corpus(10, n=10, seed=604):
        for obj in (REWARD, WELFARE):
            opt = brute_force_max(obj, inst, 0.6).value
            res = knapsack_fptas(inst, 0.6, 0.1, obj)
            assert res.value >= (1 - 0.1) * opt - 1e-9


def test_knapsack_preconditions():
    inst = Instance(2, (0.1, 0.1), Additive((0.5, 0.5)))
    with pytest.raises(PreconditionError):
        knapsack_fptas(inst, 1.0, 0.1, PROFIT)
    with pytest.raises(InputError):
        knapsack_fptas(inst, 1.0, 1.0, REWARD)
