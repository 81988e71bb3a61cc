"""Small invariant suites behind ``zgw selftest``; each returns a list of failure messages."""
from __future__ import annotations

import itertools

import numpy as np

from .bounds import bound_report
from .geometry import geodesic_interpolate, geodesic_coupling, mixture_endpoint_coupling, mixture_path
from .gw import SolveConfig, distortion, gw_exact_dirac, solve_gw
from .metric_spaces import Discrete
from .network import ZNetwork, blow_up, collapse_coupling
from .random_instances import geodesic_spaces, random_coupling, random_dirac, random_network, variant_spaces

TOL = 1e-9


def suite_metric_axioms(rng) -> list[str]:
    failures = []
    for name, space in variant_spaces().items():
        for _ in range(20):
            a, b, c = (space.random_point(rng) for _ in range(3))
            ab, ba = space.distance(a, b), space.distance(b, a)
            if ab != ba or space.distance(a, a) != 0.0:
                failures.append(f"{name}: symmetry or identity")
            if ab > space.distance(a, c) + space.distance(c, b) + TOL * max(1.0, ab):
                failures.append(f"{name}: triangle")
    return failures


def suite_dirac_triangle(rng) -> list[str]:
    failures = []
    for name, space in variant_spaces().items():
        for p in (1.0, 2.0, np.inf):
            X, Y, W = (random_dirac(space, int(rng.integers(1, 4)), rng) for _ in range(3))
            xy, yw, xw = (gw_exact_dirac(a, b, p).value for a, b in ((X, Y), (Y, W), (X, W)))
            if xw > xy + yw + 1e-12:
                failures.append(f"{name} p={p}: {xw} > {xy} + {yw}")
    return failures


def suite_pinned(rng) -> list[str]:
    space = Discrete((0, 1))
    X = ZNetwork(space, [1.0], [[0]])
    Y = ZNetwork(space, [1.0], [[1]])
    return [f"p={p}: {v}" for p in (1.0, 2.0, np.inf) if (v := solve_gw(X, Y, SolveConfig(p=p)).value) != 0.5]


def suite_hierarchy(rng) -> list[str]:
    failures = []
    cfg = {p: SolveConfig(p=p, restarts=1) for p in (1.0, 2.0, np.inf)}
    for (name, space), p in itertools.product(variant_spaces().items(), (1.0, 2.0, np.inf)):
        X = random_network(space, int(rng.integers(1, 5)), rng)
        Y = random_network(space, int(rng.integers(1, 5)), rng)
        gw = solve_gw(X, Y, cfg[p]).value
        b = bound_report(X, Y, p)
        if b.ordering_violations or gw < b.tlb - TOL or gw < b.slb - TOL:
            failures.append(f"{name} p={p}: gw={gw} tlb={b.tlb} flb={b.flb} szlb={b.szlb} slb={b.slb}")
    return failures


def suite_blow_up(rng) -> list[str]:
    failures = []
    for name, space in variant_spaces().items():
        X = random_network(space, int(rng.integers(1, 5)), rng)
        mults = rng.integers(1, 4, size=X.n)
        B = blow_up(X, mults)
        for p in (1.0, 2.0, np.inf):
            if (d := distortion(X, B, collapse_coupling(X, mults), p)) > 1e-12:
                failures.append(f"{name} p={p}: collapse distortion {d}")
    return failures


def suite_paths(rng) -> list[str]:
    failures = []
    for name, space in geodesic_spaces().items():
        X = random_network(space, 3, rng)
        Y = random_network(space, 3, rng)
        fill = space.random_point(rng)
        for end, net in ((0, X), (1, Y)):
            M = mixture_path(X, Y, fill, float(end))
            c = mixture_endpoint_coupling(X, Y, end)
            if (d := distortion(M, net, c, 2.0)) > 1e-12:
                failures.append(f"{name}: mixture endpoint {end} distortion {d}")
        pi = random_coupling(X.weights, Y.weights, rng)
        base = distortion(X, Y, pi, 2.0)
        G = [geodesic_interpolate(X, Y, pi, t) for t in (0.2, 0.7)]
        d = distortion(G[0], G[1], geodesic_coupling(*G), 2.0)
        if abs(d - 0.5 * base) > TOL * max(1.0, base):
            failures.append(f"{name}: geodesic {d} vs {0.5 * base}")
    return failures


SUITES = {
    "metric_axioms": suite_metric_axioms,
    "dirac_triangle": suite_dirac_triangle,
    "pinned_values": suite_pinned,
    "hierarchy": suite_hierarchy,
    "blow_up": suite_blow_up,
    "paths": suite_paths,
}


def run_selftest(seed: int = 0, suites: dict | None = None) -> dict:
    suites = SUITES if suites is None else suites
    results = {}
    for i, (name, fn) in enumerate(suites.items()):
        rng = np.random.default_rng([seed, i])
        try:
            failures = fn(rng)
        except Exception as exc:  # a crashing suite counts as a failure
            failures = [f"{type(exc).__name__}: {exc}"]
        results[name] = {"passed": not failures, "failures": failures[:10]}
    return {"passed": all(r["passed"] for r in results.values()), "suites": results}
