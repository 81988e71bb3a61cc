import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from conftest import seeds
from oracles import assignment_value, bottleneck_bruteforce, transport_grid

from zgw.metric_spaces import Cone, ConePoint, EuclideanLr, Real
from zgw.transport import (
    Coupling, InfeasibleMarginals, bottleneck_coupling, check_p, product_coupling, sinkhorn, slackness_residual,
    solve_ot_1d, solve_ot_bottleneck, solve_ot_exact, wasserstein_from_cost, wasserstein_in_Z,
)

HALF = np.array([0.5, 0.5])
SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])


def test_single_atom():
    c, v = solve_ot_exact([[3.5]], [1.0], [1.0])
    assert v == 3.5
    assert c.matrix.tolist() == [[1.0]]


def test_two_by_two():
    c, v = solve_ot_exact(1.0 - np.eye(2), HALF, HALF)
    assert v == 0.0
    np.testing.assert_array_equal(c.matrix, np.diag(HALF))


def test_constant_cost(rng):
    mu, nu = rng.dirichlet(np.ones(4)), rng.dirichlet(np.ones(3))
    c, v = solve_ot_exact(np.full((4, 3), 2.25), mu, nu)
    assert v == pytest.approx(2.25, abs=1e-12)
    np.testing.assert_allclose(c.matrix.sum(axis=1), mu, atol=1e-12)


def test_infeasible_marginals():
    with pytest.raises(InfeasibleMarginals):
        solve_ot_exact(np.zeros((2, 2)), [0.5, 0.5], [0.5, 0.6])
    with pytest.raises(InfeasibleMarginals):
        solve_ot_bottleneck(np.zeros((2, 2)), [0.5, 0.5], [1.0, 0.1])


def test_zero_weight_atoms_dropped():
    cost = np.array([[0.0, 5.0, 1.0], [1.0, 5.0, 0.0]])
    c, v = solve_ot_exact(cost, HALF, [0.5, 0.0, 0.5])
    assert v == 0.0
    assert c.matrix[:, 1].tolist() == [0.0, 0.0]


def test_coupling_validation():
    with pytest.raises(ValueError):
        Coupling([[0.5, 0.5]], [1.0], [0.4, 0.6])
    with pytest.raises(ValueError):
        Coupling([[-0.1, 1.1]], [1.0], [-0.1, 1.1])
    c = Coupling([[0.5, -1e-16], [0.0, 0.5]], HALF, HALF)
    assert c.matrix.min() == 0.0
    assert c.transpose().shape == (2, 2)


def test_one_d_values():
    assert solve_ot_1d([0.0, 1.0], HALF, [0.0, 1.0], HALF, 2) == 0.0
    for p in (1, 2, 7, math.inf):
        assert solve_ot_1d([0.0], [1.0], [1.0], [1.0], p) == 1.0
    assert solve_ot_1d([0.0, 1.0], HALF, [1.0, 2.0], HALF, 1) == 1.0


def test_bottleneck_values():
    assert solve_ot_bottleneck([[4.0]], [1.0], [1.0]) == 4.0
    assert solve_ot_bottleneck(SWAP, HALF, HALF) == 0.0
    assert solve_ot_bottleneck(np.full((3, 2), 1.5), np.ones(3) / 3, HALF) == 1.5


def test_sinkhorn_cases():
    one = sinkhorn([[2.0]], [1.0], [1.0], 0.1)
    assert one.value == 2.0 and one.converged
    small = sinkhorn(SWAP, HALF, HALF, 0.01)
    assert small.value <= 1e-3
    flat = sinkhorn(np.ones((3, 3)), np.ones(3) / 3, np.ones(3) / 3, 0.5)
    np.testing.assert_allclose(flat.coupling.matrix, np.full((3, 3), 1 / 9), atol=1e-9)
    with pytest.raises(ValueError):
        sinkhorn(SWAP, HALF, HALF, 0.0)


def test_sinkhorn_reports_nonconvergence(rng):
    cost = rng.random((5, 5)) * 50
    res = sinkhorn(cost, np.ones(5) / 5, np.ones(5) / 5, 1e-3, max_iter=2)
    assert not res.converged
    np.testing.assert_allclose(res.coupling.matrix.sum(axis=0), np.ones(5) / 5, atol=1e-9)


def test_check_p():
    assert check_p("inf") == math.inf
    assert check_p(2) == 2.0
    with pytest.raises(ValueError):
        check_p(0.9)
    with pytest.raises(ValueError):
        check_p(float("nan"))


def test_wasserstein_in_Z_cases(rng):
    pts = [rng.normal(size=2) for _ in range(3)]
    w = rng.dirichlet(np.ones(3))
    space = EuclideanLr(2, 2.0)
    assert wasserstein_in_Z(space, pts, w, pts, w, 2) == pytest.approx(0.0, abs=1e-12)
    assert wasserstein_in_Z(space, pts[:1], [1.0], pts[1:2], [1.0], 3) == pytest.approx(space.distance(*pts[:2]))
    cone = Cone(Real())
    a, b = ConePoint(0.0, 1.0), ConePoint(2.0, 3.0)
    assert wasserstein_in_Z(cone, [a], [1.0], [b], [1.0], math.inf) == cone.distance(a, b)


# -- properties ------------------------------------------------------------------

@given(seeds)
def test_exact_is_optimal_with_certificate(seed):
    rng = np.random.default_rng(seed)
    n, m = rng.integers(1, 6, size=2)
    cost = rng.random((n, m))
    mu, nu = rng.dirichlet(np.ones(n)), rng.dirichlet(np.ones(m))
    c, v = solve_ot_exact(cost, mu, nu)
    assert v == pytest.approx((c.matrix * cost).sum(), abs=1e-15)
    # any other coupling costs at least as much
    assert v <= (product_coupling(mu, nu).matrix * cost).sum() + 1e-12


@given(seeds, st.sampled_from([0.5, 3.0, 17.0]))
def test_cost_scaling(seed, scale):
    rng = np.random.default_rng(seed)
    cost = rng.random((4, 3))
    mu, nu = rng.dirichlet(np.ones(4)), rng.dirichlet(np.ones(3))
    c, v = solve_ot_exact(cost, mu, nu)
    c2, v2 = solve_ot_exact(scale * cost, mu, nu)
    assert v2 == pytest.approx(scale * v, rel=1e-12)
    # the unscaled optimum stays optimal for the scaled cost
    assert (c.matrix * scale * cost).sum() == pytest.approx(v2, rel=1e-12)


@given(seeds)
def test_uniform_small_against_grid(seed):
    rng = np.random.default_rng(seed)
    n, m = rng.integers(1, 4, size=2)
    cost = rng.random((n, m))
    mu, nu = np.ones(n) / n, np.ones(m) / m
    v = solve_ot_exact(cost, mu, nu)[1]
    if (n - 1) * (m - 1) <= 2:
        assert abs(v - transport_grid(cost, mu, nu, 1000)) <= 1e-3
    else:
        assert v == pytest.approx(assignment_value(cost), abs=1e-12)


@given(seeds, st.sampled_from([1.0, 1.5, 2.0, 4.0, math.inf]))
def test_one_d_matches_lp(seed, p):
    rng = np.random.default_rng(seed)
    n, m = rng.integers(1, 7, size=2)
    xa, xb = rng.normal(size=n), rng.normal(size=m)
    wa, wb = rng.dirichlet(np.ones(n)), rng.dirichlet(np.ones(m))
    dist = np.abs(xa[:, None] - xb[None, :])
    ref = wasserstein_from_cost(dist, wa, wb, p)[1]
    assert solve_ot_1d(xa, wa, xb, wb, p) == pytest.approx(ref, abs=1e-9)


@given(seeds)
def test_bottleneck_is_least_feasible_threshold(seed):
    rng = np.random.default_rng(seed)
    n, m = rng.integers(1, 6, size=2)
    cost = rng.integers(0, 6, size=(n, m)).astype(float)
    mu, nu = rng.dirichlet(np.ones(n)), rng.dirichlet(np.ones(m))
    c, v = bottleneck_coupling(cost, mu, nu)
    assert cost[c.matrix > 1e-12].max() == v
    # no coupling lives strictly below v
    below = cost < v
    if below.any():
        blocked = (~below).astype(float)
        assert solve_ot_exact(blocked, mu, nu)[1] > 1e-12


@given(seeds)
def test_bottleneck_two_by_two_oracle(seed):
    rng = np.random.default_rng(seed)
    cost = rng.integers(0, 5, size=(2, 2)).astype(float)
    mu, nu = rng.dirichlet(np.ones(2)), rng.dirichlet(np.ones(2))
    mu, nu = np.round(mu, 3), np.round(nu, 3)
    mu[1], nu[1] = 1 - mu[0], 1 - nu[0]
    assert solve_ot_bottleneck(cost, mu, nu) == bottleneck_bruteforce(cost, mu, nu)


@given(seeds)
def test_bottleneck_monotone(seed):
    rng = np.random.default_rng(seed)
    cost = rng.random((4, 4))
    mu, nu = rng.dirichlet(np.ones(4)), rng.dirichlet(np.ones(4))
    v = solve_ot_bottleneck(cost, mu, nu)
    i, j = rng.integers(4, size=2)
    lowered = cost.copy()
    lowered[i, j] *= rng.random()
    assert solve_ot_bottleneck(lowered, mu, nu) <= v


def test_slackness_residual_detects_suboptimal():
    cost = 1.0 - np.eye(2)
    plan = np.full((2, 2), 0.25)
    assert slackness_residual(cost, plan, np.zeros(2), np.zeros(2)) == pytest.approx(0.5)
