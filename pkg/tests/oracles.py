"""Independent reference implementations used to cross-check the library.

These are deliberately naive: explicit loops, bisection and grids instead of
the closed forms and LP solvers the package uses.
"""
from __future__ import annotations

import itertools
import math

import numpy as np


def slack_feasible(f1, f2, grid, slack, eps) -> bool:
    """Every grid time t and order (i, j) has some s within eps with f_i(s) <= f_j(t) + slack*eps."""
    grid = np.asarray(grid, dtype=float)
    for fi, fj in ((f1, f2), (f2, f1)):
        for t in range(len(grid)):
            window = [fi[s] for s in range(len(grid)) if abs(grid[s] - grid[t]) <= eps]
            if min(window) > fj[t] + slack * eps:
                return False
    return True


def slack_bisection(f1, f2, grid, slack, tol=1e-12) -> float:
    span = float(grid[-1] - grid[0])
    hi = span + max(max(f1), max(f2)) / slack
    assert slack_feasible(f1, f2, grid, slack, hi)
    if slack_feasible(f1, f2, grid, slack, 0.0):
        return 0.0
    lo = 0.0
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if slack_feasible(f1, f2, grid, slack, mid):
            hi = mid
        else:
            lo = mid
    return hi


def distortion_loop(netX, netY, pi, p, threshold=1e-12) -> float:
    """Quadruple loop over pairs with space.distance on individual points."""
    pi = np.asarray(pi)
    d = netX.space.distance
    n, m = pi.shape
    if p == math.inf:
        best = 0.0
        for i, j, k, l in itertools.product(range(n), range(m), range(n), range(m)):
            if pi[i, j] > threshold and pi[k, l] > threshold:
                best = max(best, d(netX.kernel[i, k], netY.kernel[j, l]))
        return best
    total = 0.0
    for i, j, k, l in itertools.product(range(n), range(m), range(n), range(m)):
        total += pi[i, j] * pi[k, l] * d(netX.kernel[i, k], netY.kernel[j, l]) ** p
    return total ** (1.0 / p)


def fngw_integrand(gX, gY, alpha, beta, q, fill, pi, p) -> float:
    """Fused-network objective of a coupling, with missing edge features read as ``fill``."""
    pi = np.asarray(pi)
    n, m = pi.shape
    total = 0.0
    for i, j, k, l in itertools.product(range(n), range(m), range(n), range(m)):
        node = gX.node_space.distance(gX.features[i], gY.features[j])
        ex = gX.edge_features.get((i, k), fill)
        ey = gY.edge_features.get((j, l), fill)
        edge = gX.edge_space.distance(ex, ey)
        w = abs(gX.phi[i, k] - gY.phi[j, l])
        inner = ((1 - alpha - beta) * node ** q + alpha * edge ** q + beta * w ** q) ** (1.0 / q)
        total += pi[i, j] * pi[k, l] * inner ** p
    return total ** (1.0 / p)


def transport_grid(cost, mu, nu, steps):
    """Minimum of <cost, pi> over a grid of the free block pi[:-1, :-1]; other entries are forced."""
    cost, mu, nu = np.asarray(cost), np.asarray(mu), np.asarray(nu)
    n, m = cost.shape
    free = [(i, j) for i in range(n - 1) for j in range(m - 1)]
    axes = [np.linspace(0.0, min(mu[i], nu[j]), steps + 1) for i, j in free]
    grids = [g.ravel() for g in np.meshgrid(*axes, indexing="ij")]
    count = grids[0].size if grids else 1
    pi = np.zeros((count, n, m))
    for (i, j), g in zip(free, grids):
        pi[:, i, j] = g
    pi[:, :-1, -1] = mu[:-1] - pi[:, :-1, :-1].sum(axis=2)
    pi[:, -1, :-1] = nu[:-1] - pi[:, :-1, :-1].sum(axis=1)
    pi[:, -1, -1] = mu[-1] - pi[:, -1, :-1].sum(axis=1)
    ok = pi.reshape(count, -1).min(axis=1) >= -1e-12
    return float((pi[ok] * cost).sum(axis=(1, 2)).min())


def assignment_value(cost) -> float:
    """Uniform square marginals: optimum over permutation matrices (Birkhoff vertices)."""
    cost = np.asarray(cost)
    n = cost.shape[0]
    return min(sum(cost[i, s[i]] for i in range(n)) for s in itertools.permutations(range(n))) / n


def bottleneck_bruteforce(cost, mu, nu) -> float:
    """Smallest threshold tau among cost values for which a grid coupling on {cost <= tau} exists (2x2 only)."""
    cost = np.asarray(cost)
    for tau in sorted(set(cost.ravel())):
        for a in np.linspace(max(0.0, nu[0] - mu[1]), min(mu[0], nu[0]), 2001):
            pi = np.array([[a, mu[0] - a], [nu[0] - a, mu[1] - nu[0] + a]])
            if pi.min() >= -1e-12 and np.all((pi <= 1e-12) | (cost <= tau)):
                return float(tau)
    raise AssertionError("no feasible threshold")
