#!/usr/bin/env python3
"""Empirical worst-case sweep of the downsizing and reduction guarantees.

Generates seeded random submodular / XOS corpora, runs every guarantee at a
grid of shrink parameters and budgets, and prints the worst observed ratios
next to their proven floors. Useful for eyeballing how much slack the
constants leave on random inputs (the hard families in the frugality module
show where they are tight).

Usage: python scripts/guarantee_sweeps.py [--count 100] [--seed 0]
"""

from __future__ import annotations

import argparse
import math
import random
import sys
from dataclasses import dataclass

from budgeted_contracts import (
    DownsizeParams,
    brute_force_max,
    brute_solver,
    downsize_submodular,
    downsize_xos,
    payment,
    reduce_from_mrl,
    reduce_to_mrl,
    value,
)
from budgeted_contracts.corpora import submodular_corpus, xos_corpus
from budgeted_contracts.objectives import PROFIT, REWARD, WELFARE


@dataclass
class SweepConfig:
    count: int = 100
    seed: int = 0
    shrink_params: tuple[int, ...] = (3, 4, 5, 8)
    budgets: tuple[float, ...] = (0.25, 0.5, 1.0)


def downsizing_sweep(cfg: SweepConfig) -> None:
    worst_obj = {m: math.inf for m in cfg.shrink_params}
    worst_pay = {m: 0.0 for m in cfg.shrink_params}
    rng = random.Random(cfg.seed + 1)
    for inst in submodular_corpus(cfg.count, seed=cfg.seed, n_hi=10):
        full = (1 << inst.n) - 1
        teams = {full} | {rng.randrange(1, full + 1) for _ in range(20)}
        for team in teams:
            pay_team = payment(inst, team)
            if pay_team == math.inf or pay_team == 0.0:
                continue
            val_team = value(inst.reward, team)
            if val_team == 0.0:
                continue
            for m in cfg.shrink_params:
                res = downsize_submodular(inst, team, DownsizeParams(m))
                worst_obj[m] = min(worst_obj[m], res.objective_after / val_team)
                if res.subset.bit_count() > 1:
                    worst_pay[m] = max(worst_pay[m], res.payment_after / pay_team)
    print("submodular downsizing: worst value kept vs floor 1/(M-1),")
    print("                       worst payment ratio vs ceiling 2/M")
    for m in cfg.shrink_params:
        print(
            f"  M={m}: value {worst_obj[m]:.4f} >= {1 / (m - 1):.4f},"
            f" payment {worst_pay[m]:.4f} <= {2 / m:.4f}"
        )


def xos_sweep(cfg: SweepConfig) -> None:
    worst_obj = {m: math.inf for m in cfg.shrink_params}
    worst_pay = {m: 0.0 for m in cfg.shrink_params}
    rng = random.Random(cfg.seed + 2)
    for inst in xos_corpus(cfg.count, seed=cfg.seed + 10, n_hi=10):
        full = (1 << inst.n) - 1
        teams = {full} | {rng.randrange(1, full + 1) for _ in range(15)}
        for team in teams:
            pay_team = payment(inst, team)
            if pay_team in (math.inf, 0.0):
                continue
            val_team = value(inst.reward, team)
            if val_team == 0.0:
                continue
            for m in cfg.shrink_params:
                res = downsize_xos(inst, team, m)
                worst_obj[m] = min(worst_obj[m], res.objective_after / val_team)
                if res.subset.bit_count() > 1:
                    worst_pay[m] = max(worst_pay[m], res.payment_after / pay_team)
    print("XOS downsizing: worst value kept vs floor 1/(2M-2),")
    print("                worst payment ratio vs ceiling 4/M")
    for m in cfg.shrink_params:
        print(
            f"  M={m}: value {worst_obj[m]:.4f} >= {1 / (2 * m - 2):.4f},"
            f" payment {worst_pay[m]:.4f} <= {4 / m:.4f}"
        )


def reduction_sweep(cfg: SweepConfig) -> None:
    worst_fwd = math.inf
    worst_back = math.inf
    for inst in xos_corpus(cfg.count // 2, seed=cfg.seed + 20, n_hi=8):
        for budget in cfg.budgets:
            hub = brute_force_max(REWARD, inst, budget, light_only=True)
            for obj in (REWARD, PROFIT, WELFARE):
                opt = brute_force_max(obj, inst, budget).value
                fwd = reduce_to_mrl(inst, budget, obj, hub.optimum)
                if opt > 0:
                    worst_fwd = min(worst_fwd, fwd.candidate_value / opt)
                back = reduce_from_mrl(inst, budget, 0.5, obj, brute_solver)
                if hub.value > 0:
                    worst_back = min(worst_back, back.candidate_value / hub.value)
    print("XOS reductions with exact inner solvers:")
    print(f"  objective kept through the hub: {worst_fwd:.4f} >= {1 / 41:.4f}")
    print(f"  hub reward kept from a solver:  {worst_back:.4f} >= {1 / 20:.4f}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    cfg = SweepConfig(count=args.count, seed=args.seed)
    print(f"corpora: {cfg.count} instances per class, seed {cfg.seed}\n")
    downsizing_sweep(cfg)
    print()
    xos_sweep(cfg)
    print()
    reduction_sweep(cfg)
    return 0


if __name__ == "__main__":
    sys.exit(main())
