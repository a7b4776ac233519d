#!/usr/bin/env python3
"""Price-of-frugality sweeps over every hard-instance family.

Writes one CSV per family under results/ (realized optima, ratios, and the
matching theoretical bounds) plus step-curve data for the three-agent clause
instance and the profit families, which is the plot-ready form of the
budget-versus-value staircases.

Usage: python scripts/pof_sweeps.py [--out-dir results] [--n 10]
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from budgeted_contracts.cli import main as cli_main


@dataclass
class SweepConfig:
    out_dir: Path
    n: int = 10
    big_budget: float = 1.0
    grid: str = "b=0.1:0.9:0.1"
    families: tuple[str, ...] = (
        "additive-lb",
        "xos-sep",
        "subadd-lb",
        "profit-2",
        "profit-k",
    )
    objectives: dict = field(
        default_factory=lambda: {
            "additive-lb": ("reward", "welfare"),
            "xos-sep": ("reward",),
            "subadd-lb": ("reward",),
            "profit-2": ("profit",),
            "profit-k": ("profit",),
        }
    )


def run(cfg: SweepConfig) -> int:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    failures = 0
    for family in cfg.families:
        for objective in cfg.objectives[family]:
            out = cfg.out_dir / f"pof_{family}_{objective}.csv"
            args = [
                "pof",
                "--family", family,
                "--grid", cfg.grid,
                "--B", str(cfg.big_budget),
                "--n", str(cfg.n),
                "--objective", objective,
                "--out", str(out),
                "--verify",
            ]
            if family in ("xos-sep", "profit-2", "profit-k"):
                args.append("--emit-curve")
            code = cli_main(args)
            status = "ok" if code == 0 else f"FAILED ({code})"
            print(f"  {family:12s} {objective:8s} -> {out.name:32s} {status}")
            failures += code != 0
    return failures


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results", type=Path)
    parser.add_argument("--n", default=10, type=int)
    args = parser.parse_args()
    print(f"Sweeping price-of-frugality families into {args.out_dir}/ ...")
    failures = run(SweepConfig(out_dir=args.out_dir, n=args.n))
    print("done." if not failures else f"{failures} sweeps failed.")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
