"""Regenerate every built-in figure recipe and report the wall time of each.

    python scripts/run_figures.py --out results/figures [--only 3.1-I 5.4]
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from cvtele.cli import FIGURES, figure_config, parse_config, render_csv, render_gnuplot, run_sweep

BUDGET_S = 300.0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("results/figures"))
    parser.add_argument("--only", nargs="+", choices=list(FIGURES), default=list(FIGURES))
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args(argv)

    args.out.mkdir(parents=True, exist_ok=True)
    over_budget = []
    for fig_id in args.only:
        cfg = parse_config(figure_config(fig_id), f"figure {fig_id}")
        start = time.perf_counter()
        header, rows = run_sweep(cfg, args.jobs)
        elapsed = time.perf_counter() - start
        csv = args.out / f"{cfg.name}.csv"
        csv.write_text(render_csv(cfg, header, rows, reproducible=True))
        (args.out / f"{cfg.name}.gp").write_text(render_gnuplot(csv.name, header))
        flag = "" if elapsed < BUDGET_S else "  OVER BUDGET"
        print(f"{fig_id:8s} {len(rows):3d} rows {elapsed:7.1f} s{flag}", flush=True)
        if elapsed >= BUDGET_S:
            over_budget.append(fig_id)
    return 1 if over_budget else 0


if __name__ == "__main__":
    sys.exit(main())
