"""Write the JSON fixture pairs used by the CLI tests and the determinism check.

    python scripts/make_fixtures.py [outdir]

Each fixture is a pair NAME_a.json / NAME_b.json; graph fixtures for ``zgw ingest``
go under graphs/.  Output is fully determined by the seed below.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

from zgw.metric_spaces import (
    Cone, DampedSup, Discrete, Empirical1D, EuclideanLr, LambdaInf, LambdaQ, Orthogonal, Real, SlackInterleaving,
)
from zgw.network import AttributedGraph, ZNetwork
from zgw.random_instances import random_network

SEED = 20240611
FIXTURES = (
    "dirac_discrete", "identical_real", "wasserstein_1d", "standard_gw", "ultrametric",
    "snowflake", "cone", "orthogonal", "empirical", "slack_interleaving", "damped_sup",
)


def projection_network(support, weights) -> ZNetwork:
    """Projection kernel omega(x, x') = x on the real line, scaled by 2 so |2x - 2y| is the doubled metric."""
    n = len(support)
    kernel = [[2.0 * float(support[i])] * n for i in range(n)]
    return ZNetwork(Real(), np.asarray(weights, dtype=float), kernel)


def euclidean_mm(rng, n: int) -> ZNetwork:
    pts = rng.normal(size=(n, 2))
    dist = np.linalg.norm(pts[:, None] - pts[None], axis=-1)
    return ZNetwork(Real(), rng.dirichlet(np.ones(n)), dist.tolist())


def random_graph(rng, n: int) -> AttributedGraph:
    phi = (rng.random((n, n)) < 0.5) * rng.uniform(0.5, 2.0, size=(n, n))
    np.fill_diagonal(phi, 0.0)
    edges = {(int(i), int(j)): [float(v) for v in rng.normal(size=2)] for i, j in zip(*np.nonzero(phi))}
    return AttributedGraph(Real(), EuclideanLr(2, 2.0), tuple(float(f) for f in rng.normal(size=n)), phi, edges)


def build(rng) -> dict:
    pairs = {}
    d01 = Discrete((0, 1))
    pairs["dirac_discrete"] = (ZNetwork(d01, [1.0], [[0]]), ZNetwork(d01, [1.0], [[1]]))
    X = random_network(Real(), 4, rng)
    pairs["identical_real"] = (X, X)
    pairs["wasserstein_1d"] = tuple(
        projection_network(rng.normal(size=k), rng.dirichlet(np.ones(k))) for k in (4, 3))
    pairs["standard_gw"] = (euclidean_mm(rng, 4), euclidean_mm(rng, 3))
    for name, space, sizes in (
        ("ultrametric", LambdaInf(), (3, 4)),
        ("snowflake", LambdaQ(2.0), (3, 3)),
        ("cone", Cone(EuclideanLr(2, 2.0)), (3, 3)),
        ("orthogonal", Orthogonal(2), (3, 2)),
        ("empirical", Empirical1D(1.0), (3, 3)),
        ("slack_interleaving", SlackInterleaving(1.0, (0.0, 1.0, 2.0)), (2, 3)),
    ):
        pairs[name] = tuple(random_network(space, k, rng) for k in sizes)
    pairs["damped_sup"] = tuple(random_network(DampedSup((1.0, 2.0)), k, rng) for k in (2, 2))
    graphs = {f"graph_{c}": random_graph(rng, k) for c, k in (("a", 4), ("b", 3))}
    return pairs, graphs


def main(argv: list[str]) -> None:
    out = Path(argv[1]) if len(argv) > 1 else Path(__file__).resolve().parent.parent / "fixtures"
    (out / "graphs").mkdir(parents=True, exist_ok=True)
    pairs, graphs = build(np.random.default_rng(SEED))
    for name, (a, b) in pairs.items():
        for tag, net in (("a", a), ("b", b)):
            (out / f"{name}_{tag}.json").write_text(json.dumps(net.to_json(), sort_keys=True, indent=1) + "\n")
    for name, g in graphs.items():
        (out / "graphs" / f"{name}.json").write_text(json.dumps(g.to_json(), sort_keys=True, indent=1) + "\n")
    print(f"wrote {len(pairs)} pairs and {len(graphs)} graphs to {out}")


if __name__ == "__main__":
    main(sys.argv)
