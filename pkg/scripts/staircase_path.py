"""Lipschitz path between the constant-0 and constant-1 kernels over Z = {0, 1}.

    python scripts/staircase_path.py --k 100 --grid 5

Prints, for each pair s < t of a uniform time grid, the diagonal-coupling
certificate GW_1(X_s, X_t) <= dis/2 next to the target (t - s)/2.  With
--solve-k the solver is also run on a coarser staircase, where it is cheap.
"""
from __future__ import annotations

import argparse
import itertools
import sys
from dataclasses import dataclass

import numpy as np

from zgw.geometry import staircase_network
from zgw.gw import SolveConfig, distortion, solve_gw


@dataclass
class StaircaseConfig:
    k: int = 100
    grid: int = 5
    solve_k: int = 0


def run(cfg: StaircaseConfig) -> list[tuple]:
    times = np.linspace(0.0, 1.0, cfg.grid)
    rows = []
    for s, t in itertools.combinations(times, 2):
        Xs, Xt = staircase_network(cfg.k, s), staircase_network(cfg.k, t)
        certificate = distortion(Xs, Xt, np.diag(Xs.weights), 1.0) / 2
        solved = None
        if cfg.solve_k:
            Ys, Yt = staircase_network(cfg.solve_k, s), staircase_network(cfg.solve_k, t)
            solved = solve_gw(Ys, Yt, SolveConfig(p=1, restarts=2)).value
        rows.append((s, t, certificate, (t - s) / 2, solved))
    return rows


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--k", type=int, default=StaircaseConfig.k)
    parser.add_argument("--grid", type=int, default=StaircaseConfig.grid)
    parser.add_argument("--solve-k", type=int, default=0, help="also solve a k-point staircase (0: skip)")
    args = parser.parse_args(argv)
    rows = run(StaircaseConfig(args.k, args.grid, args.solve_k))
    print("s,t,certificate,target,solver_small_k")
    worst = 0.0
    for s, t, cert, target, solved in rows:
        worst = max(worst, cert - target)
        print(f"{s:.4f},{t:.4f},{cert:.12f},{target:.12f},{'' if solved is None else f'{solved:.12f}'}")
    print(f"# worst excess over (t-s)/2: {worst:.3e}", file=sys.stderr)
    return 0 if worst <= 1e-9 else 1


if __name__ == "__main__":
    sys.exit(main())
