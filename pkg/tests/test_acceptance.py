"""Exit criteria for the package, one test per criterion.

Each test prints a single ``[criterion N] PASS|FAIL`` line with its worst
observed error, then asserts.  Run them alone with ``pytest -m acceptance -s``.
"""
import itertools
import math
import time

import numpy as np
import pytest
from conftest import FIXTURES, VARIANT_NAMES, VARIANTS
from oracles import fngw_integrand

from zgw import cli
from zgw.approximation import landmark_fps, one_sided_hausdorff, sandwich
from zgw.geometry import (
    contraction_coupling, contraction_endpoint_coupling, contraction_holder_bound, contraction_path,
    mixture_coupling, mixture_endpoint_coupling, mixture_holder_bound, mixture_holder_terms, mixture_path,
    staircase_network, verify_geodesic,
)
from zgw.gw import SolveConfig, brute_force_gw, distortion, gw_exact_dirac, solve_gw
from zgw.bounds import bound_report
from zgw.metric_spaces import Discrete, EuclideanLr, Real
from zgw.network import (
    AttributedGraph, FusedParams, ZNetwork, blow_up, collapse_coupling, eccentricity_in, eccentricity_out,
    from_attributed_graph_fused, one_point, size,
)
from zgw.random_instances import geodesic_spaces, random_coupling, random_dirac, random_network
from zgw.transport import solve_ot_1d

pytestmark = pytest.mark.acceptance

P_CYCLE = (1.0, 2.0, math.inf)


def verdict(capsys, number, title, ok, detail):
    with capsys.disabled():
        print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'} {title}: {detail}")
    assert ok, f"criterion {number} failed: {detail}"


def test_metric_axioms(capsys):
    rng = np.random.default_rng(1)
    started = time.perf_counter()
    sym = ident = 0
    worst = 0.0
    for name in VARIANT_NAMES:
        space = VARIANTS[name]
        for _ in range(500):
            a, b, c = (space.random_point(rng) for _ in range(3))
            dab, dba = space.distance(a, b), space.distance(b, a)
            sym += dab != dba
            ident += space.distance(a, a) != 0.0
            dac, dbc = space.distance(a, c), space.distance(b, c)
            worst = max(worst, (dac - dab - dbc) / max(1.0, dac))
    elapsed = time.perf_counter() - started
    ok = sym == 0 and ident == 0 and worst <= 1e-9 and elapsed < 10
    verdict(capsys, 1, "metric axioms", ok,
            f"asymmetric={sym} nonzero_self={ident} worst_triangle_rel={worst:.2e} time={elapsed:.2f}s")


def test_dirac_triangle(capsys):
    rng = np.random.default_rng(2)
    worst = -math.inf
    for name in VARIANT_NAMES:
        space = VARIANTS[name]
        for i in range(200):
            p = P_CYCLE[i % 3]
            X, Y, W = (random_dirac(space, int(rng.integers(1, 4)), rng) for _ in range(3))
            xy, yw, xw = (gw_exact_dirac(A, B, p).value for A, B in ((X, Y), (Y, W), (X, W)))
            worst = max(worst, xw - xy - yw)
    verdict(capsys, 2, "Dirac triangle inequality", worst <= 1e-12, f"worst_excess={worst:.2e}")


def test_pinned_values(capsys):
    space = Discrete((0, 1))
    X, Y = one_point(space, 0), one_point(space, 1)
    dirac = {p: gw_exact_dirac(X, Y, p).value for p in P_CYCLE}
    solver = {p: solve_gw(X, Y, SolveConfig(p=p)).value for p in P_CYCLE}
    dirac_ok = all(v == 0.5 for v in dirac.values()) and all(v == 0.5 for v in solver.values())

    grid = np.linspace(0, 1, 5)
    stair_worst = -math.inf
    for s, t in itertools.combinations_with_replacement(grid, 2):
        Xs, Xt = staircase_network(100, s), staircase_network(100, t)
        # half the distortion of any coupling certifies an upper bound; the carrier is shared
        value = distortion(Xs, Xt, np.diag(Xs.weights), 1.0) / 2
        stair_worst = max(stair_worst, value - (t - s) / 2)

    rng = np.random.default_rng(3)
    carrier_worst = -math.inf
    for i in range(100):
        name = VARIANT_NAMES[i % len(VARIANT_NAMES)]
        space = VARIANTS[name]
        p = P_CYCLE[i % 3]
        n = int(rng.integers(1, 6))
        mu = rng.dirichlet(np.ones(n))
        X0 = ZNetwork(space, mu, random_network(space, n, rng).kernel)
        X1 = ZNetwork(space, mu, random_network(space, n, rng).kernel)
        gaps = np.array([[space.distance(X0.kernel[a, b], X1.kernel[a, b]) for b in range(n)] for a in range(n)])
        w = np.outer(mu, mu)
        half_dp = 0.5 * (gaps.max(initial=0.0, where=w > 0) if p == math.inf
                         else float((w * gaps ** p).sum()) ** (1 / p))
        diag = np.diag(mu)
        value = solve_gw(X0, X1, SolveConfig(p=p, restarts=1, init_strategy="supplied", init_coupling=diag)).value
        carrier_worst = max(carrier_worst, value - half_dp)
    ok = dirac_ok and stair_worst <= 1e-9 and carrier_worst <= 1e-9
    verdict(capsys, 3, "pinned values", ok,
            f"dirac={dirac} solver={solver} staircase_excess={stair_worst:.2e} "
            f"shared_carrier_excess={carrier_worst:.2e}")


def test_hierarchy(capsys):
    rng = np.random.default_rng(4)
    started = time.perf_counter()
    worst = -math.inf
    bad = 0
    for name in VARIANT_NAMES:
        space = VARIANTS[name]
        for i in range(100):
            p = P_CYCLE[i % 3]
            X = random_network(space, int(rng.integers(1, 9)), rng)
            Y = random_network(space, int(rng.integers(1, 9)), rng)
            rep = bound_report(X, Y, p)
            value = solve_gw(X, Y, SolveConfig(p=p, restarts=2)).value
            gaps = (rep.tlb - value, rep.flb - rep.tlb, rep.szlb - rep.flb, rep.slb - value)
            worst = max(worst, *gaps)
            bad += max(gaps) > 1e-9
    elapsed = time.perf_counter() - started
    ok = bad == 0 and elapsed < 60
    verdict(capsys, 4, "lower-bound hierarchy", ok,
            f"violations={bad}/1100 worst_gap={worst:.2e} time={elapsed:.1f}s")


def test_oracle_equivalence(capsys):
    rng = np.random.default_rng(5)
    shapes = [(n, m) for n in range(1, 4) for m in range(1, 4) if (n - 1) * (m - 1) <= 2] + [(1, 5), (4, 1)]
    started = time.perf_counter()
    worst = 0.0
    for i in range(50):
        space = VARIANTS[VARIANT_NAMES[i % len(VARIANT_NAMES)]]
        n, m = shapes[i % len(shapes)]
        p = P_CYCLE[i % 3]
        X, Y = random_network(space, n, rng), random_network(space, m, rng)
        brute = brute_force_gw(X, Y, p, resolution=1000)
        value = solve_gw(X, Y, SolveConfig(p=p, restarts=3)).value
        worst = max(worst, abs(value - brute))
    elapsed = time.perf_counter() - started
    ok = worst <= 2e-3 and elapsed < 120
    verdict(capsys, 5, "solver vs grid oracle", ok, f"worst_abs_diff={worst:.2e} time={elapsed:.1f}s")


def test_wasserstein_realization(capsys):
    rng = np.random.default_rng(6)
    worst = 0.0
    for i in range(50):
        p = (1.0, 2.0, 3.0)[i % 3]
        n, m = rng.integers(1, 8, size=2)
        xa, xb = rng.normal(size=n), rng.normal(size=m)
        wa, wb = rng.dirichlet(np.ones(n)), rng.dirichlet(np.ones(m))
        X = ZNetwork(Real(), wa, [[2 * x] * n for x in xa])
        Y = ZNetwork(Real(), wb, [[2 * y] * m for y in xb])
        value = solve_gw(X, Y, SolveConfig(p=p, restarts=2)).value
        worst = max(worst, abs(value - solve_ot_1d(xa, wa, xb, wb, p)))
    verdict(capsys, 6, "Wasserstein realization", worst <= 1e-6, f"worst_abs_diff={worst:.2e}")


def _graph(rng, n, edge_prob):
    phi = (rng.random((n, n)) < edge_prob) * rng.uniform(0.2, 2.0, size=(n, n))
    edges = {(int(i), int(j)): rng.normal(size=2) for i, j in zip(*np.nonzero(phi))}
    return AttributedGraph(EuclideanLr(2, 2.0), EuclideanLr(2, 1.0), tuple(rng.normal(size=2) for _ in range(n)),
                           phi, edges, rng.dirichlet(np.ones(n)))


def test_fused_flattening(capsys):
    rng = np.random.default_rng(7)
    flat_worst = spec_worst = 0.0
    for i in range(50):
        gX, gY = _graph(rng, int(rng.integers(1, 4)), 0.5), _graph(rng, int(rng.integers(1, 4)), 0.5)
        alpha = float(rng.uniform(0, 0.6))
        beta = float(rng.uniform(0, 1 - alpha))
        q, p = (1.0, 2.0)[i % 2], (1.0, 2.0, 3.0)[i % 3]
        fill = rng.normal(size=2)
        X, Y = (from_attributed_graph_fused(g, FusedParams(alpha, beta, q), fill) for g in (gX, gY))
        for _ in range(20):
            pi = random_coupling(gX.weights, gY.weights, rng)
            expected = fngw_integrand(gX, gY, alpha, beta, q, fill, pi.matrix, p)
            flat_worst = max(flat_worst, abs(distortion(X, Y, pi, p) - expected) / max(1.0, expected))

        # specializations on complete graphs: alpha = 0, beta = 1 and alpha = 1, beta = 0
        k = 3
        cX, cY = _graph(rng, k, 1.0), _graph(rng, k, 1.0)
        pi = random_coupling(cX.weights, cY.weights, rng)
        SX, SY = (from_attributed_graph_fused(g, FusedParams(0.0, 1.0, q), fill) for g in (cX, cY))
        RX, RY = (ZNetwork(Real(), g.weights, g.phi.tolist()) for g in (cX, cY))
        spec_worst = max(spec_worst, abs(distortion(SX, SY, pi, p) - distortion(RX, RY, pi, p)))
        EX, EY = (from_attributed_graph_fused(g, FusedParams(1.0, 0.0, q), fill) for g in (cX, cY))
        ZX, ZY = (ZNetwork(g.edge_space, g.weights, [[g.edge_features[(a, b)] for b in range(k)] for a in range(k)])
                  for g in (cX, cY))
        spec_worst = max(spec_worst, abs(distortion(EX, EY, pi, p) - distortion(ZX, ZY, pi, p)))
    ok = flat_worst <= 1e-12 and spec_worst <= 1e-12
    verdict(capsys, 7, "fused flattening", ok,
            f"worst_rel_integrand_diff={flat_worst:.2e} worst_specialization_diff={spec_worst:.2e}")


def test_sandwich(capsys):
    rng = np.random.default_rng(8)
    worst = -math.inf
    monotone_breaks = 0
    for name in VARIANT_NAMES:
        space = VARIANTS[name]
        for i in range(50):
            p = P_CYCLE[i % 3]
            X = random_dirac(space, int(rng.integers(1, 4)), rng)
            Y = random_dirac(space, int(rng.integers(1, 4)), rng)
            exact = gw_exact_dirac(X, Y, p).value
            values = X.kernel_values() + Y.kernel_values()
            terms = []
            for k in (1, 2, 4):
                Q = landmark_fps(space, values, min(k, len(values)), seed=i)
                terms.append(one_sided_hausdorff(space, values, Q))
                for r in (1.0, 2.0, math.inf):
                    rep = sandwich(X, Y, Q, p, r)
                    worst = max(worst, rep.lower - exact, exact - rep.upper)
            monotone_breaks += any(b > a for a, b in zip(terms, terms[1:]))
    ok = worst <= 1e-9 and monotone_breaks == 0
    verdict(capsys, 8, "landmark sandwich", ok, f"worst_violation={worst:.2e} hausdorff_increases={monotone_breaks}")


def test_paths_and_geodesics(capsys):
    rng = np.random.default_rng(9)
    endpoint_worst = 0.0
    for i in range(20):
        space = VARIANTS[VARIANT_NAMES[i % len(VARIANT_NAMES)]]
        X, Y = random_network(space, 3, rng), random_network(space, 2, rng)
        z = space.random_point(rng)
        for p in P_CYCLE:
            for end, net in ((0, X), (1, Y)):
                endpoint_worst = max(endpoint_worst, distortion(mixture_path(X, Y, z, end), net,
                                                                mixture_endpoint_coupling(X, Y, end), p))
            for end, net in ((0, X), (1, one_point(space, z))):
                endpoint_worst = max(endpoint_worst, distortion(contraction_path(X, z, end), net,
                                                                contraction_endpoint_coupling(X, end), p))

    holder_worst = -math.inf
    pairs = sorted(tuple(sorted(st)) for st in rng.random((25, 2)))
    space = VARIANTS[VARIANT_NAMES[int(rng.integers(len(VARIANT_NAMES)))]]
    X, Y = random_network(space, 3, rng), random_network(space, 3, rng)
    z = space.random_point(rng)
    pi = solve_gw(X, Y, SolveConfig(p=2, restarts=2)).coupling
    terms = mixture_holder_terms(X, Y, pi, z, 2.0)
    for s, t in pairs:
        dis = distortion(mixture_path(X, Y, z, s), mixture_path(X, Y, z, t), mixture_coupling(X, Y, pi, s, t), 2.0)
        holder_worst = max(holder_worst, dis / 2 - mixture_holder_bound(terms, s, t, 2.0))
        dis = distortion(contraction_path(X, z, s), contraction_path(X, z, t), contraction_coupling(X, s, t), 2.0)
        holder_worst = max(holder_worst, dis / 2 - contraction_holder_bound(X, z, s, t, 2.0))

    geodesic = geodesic_spaces()
    names = sorted(geodesic)
    defect = 0.0
    for i in range(50):
        space = geodesic[names[i % len(names)]]
        X = random_network(space, int(rng.integers(1, 5)), rng)
        Y = random_network(space, int(rng.integers(1, 5)), rng)
        pi = random_coupling(X.weights, Y.weights, rng)
        rep = verify_geodesic(X, Y, pi, P_CYCLE[i % 3], [0.0, 0.2, 0.5, 0.9, 1.0])
        defect = max(defect, rep.max_defect)
    ok = endpoint_worst <= 1e-12 and holder_worst <= 1e-9 and defect <= 1e-9
    verdict(capsys, 9, "paths and geodesics", ok,
            f"endpoint_distortion={endpoint_worst:.2e} holder_excess={holder_worst:.2e} geodesic_defect={defect:.2e}")


def test_blow_up_invariance(capsys):
    rng = np.random.default_rng(10)
    dis_worst = size_worst = ecc_worst = 0.0
    for i in range(100):
        space = VARIANTS[VARIANT_NAMES[i % len(VARIANT_NAMES)]]
        net = random_network(space, int(rng.integers(1, 6)), rng)
        mult = rng.integers(1, 4, size=net.n)
        big = blow_up(net, mult)
        pi = collapse_coupling(net, mult)
        z0 = space.random_point(rng)
        origin = np.repeat(np.arange(net.n), mult)
        for p in P_CYCLE:
            dis_worst = max(dis_worst, distortion(net, big, pi, p))
            size_worst = max(size_worst, abs(size(big, p, z0) - size(net, p, z0)))
            for ecc in (eccentricity_out, eccentricity_in):
                ecc_worst = max(ecc_worst, float(np.abs(ecc(big, p, z0) - ecc(net, p, z0)[origin]).max()))
    ok = dis_worst <= 1e-12 and size_worst <= 1e-12 and ecc_worst <= 1e-12
    verdict(capsys, 10, "blow-up invariance", ok,
            f"collapse_distortion={dis_worst:.2e} size_diff={size_worst:.2e} eccentricity_diff={ecc_worst:.2e}")


def test_determinism(capsys):
    pairs = sorted({p.name.rsplit("_", 1)[0] for p in FIXTURES.glob("*_a.json")})
    mismatched = []
    for name in pairs:
        argv = ["dist", str(FIXTURES / f"{name}_a.json"), str(FIXTURES / f"{name}_b.json"), "--coupling"]
        outputs = []
        for _ in range(2):
            assert cli.main(argv) == 0
            outputs.append(capsys.readouterr().out)
        if outputs[0] != outputs[1]:
            mismatched.append(name)
    ok = len(pairs) >= 10 and not mismatched
    verdict(capsys, 11, "deterministic CLI output", ok, f"fixtures={len(pairs)} mismatched={mismatched}")
