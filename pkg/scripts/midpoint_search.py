"""Search for a metric midpoint between the two Dirac networks over Z = {0, 1}.

    python scripts/midpoint_search.py --p 1 2 --weights 21

Every two-point network over {0, 1} with the first weight on the given grid is
scored by its deviation from being a midpoint; a best deviation bounded away
from zero means the distance admits no geodesic between those endpoints.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass

import numpy as np

from zgw.geometry import midpoint_search
from zgw.transport import check_p


@dataclass
class MidpointConfig:
    exponents: tuple = (1.0, 2.0)
    weights: int = 21
    resolution: int = 10


def run(cfg: MidpointConfig) -> list[dict]:
    grid = np.linspace(0.0, 1.0, cfg.weights)
    out = []
    for p in cfg.exponents:
        rep = midpoint_search(p, grid, resolution=cfg.resolution)
        out.append({"p": p, **asdict(rep)})
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--p", nargs="+", type=check_p, default=list(MidpointConfig.exponents))
    parser.add_argument("--weights", type=int, default=MidpointConfig.weights, help="points in the weight grid")
    parser.add_argument("--resolution", type=int, default=MidpointConfig.resolution)
    args = parser.parse_args(argv)
    rows = run(MidpointConfig(tuple(args.p), args.weights, args.resolution))
    print(json.dumps(rows, indent=2, default=str))
    return 0


if __name__ == "__main__":
    sys.exit(main())
