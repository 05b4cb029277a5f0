"""Boundedness sweep over (gamma, p, q) cells with the 16 -> 24 refinement.

    python scripts/run_sweep.py --trials 50 --seed 12345 --out reports

Writes estimate.{json,csv,md} and estimate.timing.json and prints one line per cell.
"""

import argparse
import sys
from dataclasses import dataclass

from gainterm.config import load_config
from gainterm.verify import emit_report, emit_timings, estimate_suite


@dataclass(frozen=True)
class SweepArgs:
    trials: int
    seed: int
    out: str
    config: str | None
    explore: bool


def parse_args(argv=None) -> SweepArgs:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=12345)
    p.add_argument("--out", default="reports")
    p.add_argument("--config")
    p.add_argument("--no-explore", dest="explore", action="store_false",
                   help="skip the Radon box-growth exploration")
    a = p.parse_args(argv)
    return SweepArgs(a.trials, a.seed, a.out, a.config, a.explore)


def main(argv=None) -> int:
    args = parse_args(argv)
    cfg = load_config(args.config).replace(run={"seed": args.seed, "output_dir": args.out})
    rep = estimate_suite(cfg, n_trials=args.trials, explore=args.explore)
    for fmt in ("json", "csv", "md"):
        emit_report(rep, fmt, args.out)
    emit_timings(rep, args.out)
    for cell, entry in rep.aggregate["cells"].items():
        print(f"{cell:32s} trials={entry['trials']:3d} "
              f"hom={entry['hom']['max']:.3e} inhom={entry['inhom']['max']:.3e} "
              f"LR={entry['LR']['max']:.3e} delta={max(v['delta'] for k, v in entry.items() if k != 'trials'):.3f}")
    print("pass" if rep.passed else "FAIL: " + ", ".join(rep.failures))
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
