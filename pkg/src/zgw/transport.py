"""Discrete optimal transport: exact LP, 1-d quantile matching, bottleneck and Sinkhorn.

The exact solver is POT's network simplex.  Everything here works on dense cost
matrices and plain probability vectors.
"""
from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass
from typing import Any, NamedTuple, Sequence

for _backend in ("PYTORCH", "JAX", "TENSORFLOW", "CUPY"):
    # POT probes every installed array backend at import time; we only use numpy
    os.environ.setdefault(f"POT_BACKEND_DISABLE_{_backend}", "1")

import numpy as np
import ot

from .metric_spaces import MetricSpace

__all__ = [
    "MARGINAL_TOL", "InfeasibleMarginals", "Coupling", "product_coupling", "check_p",
    "solve_ot_exact", "solve_ot_1d", "solve_ot_bottleneck", "bottleneck_coupling",
    "sinkhorn", "SinkhornResult", "wasserstein_from_cost", "wasserstein_in_Z",
    "slackness_residual",
]

MARGINAL_TOL = 1e-9
CLAMP_TOL = 1e-15
SLACKNESS_TOL = 1e-9


class InfeasibleMarginals(ValueError):
    """Marginals are not probability vectors of equal mass."""


def check_p(p: Any) -> float:
    """Validate an exponent p in [1, inf]; accepts 'inf'."""
    if isinstance(p, str):
        p = math.inf if p.strip().lower() in ("inf", "infinity") else float(p)
    p = float(p)
    if not p >= 1:
        raise ValueError(f"p must lie in [1, inf], got {p}")
    return p


def _prob(w: Any, what: str) -> np.ndarray:
    w = np.asarray(w, dtype=float).ravel()
    if w.size == 0 or not np.all(np.isfinite(w)):
        raise InfeasibleMarginals(f"{what} is empty or non-finite")
    if np.any(w < 0):
        raise InfeasibleMarginals(f"{what} has negative entries")
    return w


def _pair(mu: Any, nu: Any) -> tuple[np.ndarray, np.ndarray]:
    mu, nu = _prob(mu, "row marginal"), _prob(nu, "column marginal")
    if abs(mu.sum() - nu.sum()) > MARGINAL_TOL:
        raise InfeasibleMarginals(f"marginal masses differ: {mu.sum()!r} vs {nu.sum()!r}")
    return mu, nu


@dataclass(frozen=True, eq=False)
class Coupling:
    """Nonnegative matrix with prescribed row and column sums."""

    matrix: np.ndarray
    row_marginal: np.ndarray
    col_marginal: np.ndarray

    def __post_init__(self):
        pi = np.array(self.matrix, dtype=float)
        mu = np.array(self.row_marginal, dtype=float).ravel()
        nu = np.array(self.col_marginal, dtype=float).ravel()
        if pi.shape != (mu.size, nu.size):
            raise ValueError(f"coupling shape {pi.shape} does not match marginals ({mu.size}, {nu.size})")
        if np.any(pi < -CLAMP_TOL) or not np.all(np.isfinite(pi)):
            raise ValueError("coupling has negative or non-finite entries")
        pi[pi < 0] = 0.0
        if np.abs(pi.sum(axis=1) - mu).max() > MARGINAL_TOL or np.abs(pi.sum(axis=0) - nu).max() > MARGINAL_TOL:
            raise ValueError("coupling marginals are off by more than 1e-9")
        for arr in (pi, mu, nu):
            arr.setflags(write=False)
        object.__setattr__(self, "matrix", pi)
        object.__setattr__(self, "row_marginal", mu)
        object.__setattr__(self, "col_marginal", nu)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def transpose(self) -> "Coupling":
        return Coupling(self.matrix.T, self.col_marginal, self.row_marginal)

    def support(self, threshold: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
        return np.nonzero(self.matrix > threshold)


def product_coupling(mu: Any, nu: Any) -> Coupling:
    mu, nu = np.asarray(mu, dtype=float), np.asarray(nu, dtype=float)
    return Coupling(np.outer(mu, nu), mu, nu)


def _emd(cost: np.ndarray, mu: np.ndarray, nu: np.ndarray, log: bool = False):
    """Network simplex on the positive-weight atoms, re-embedded at full size."""
    rows, cols = np.flatnonzero(mu > 0), np.flatnonzero(nu > 0)
    a, b = mu[rows], nu[cols]
    b = b * (a.sum() / b.sum())
    sub = np.ascontiguousarray(cost[np.ix_(rows, cols)], dtype=float)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        out = ot.emd(a, b, sub, numItermax=10_000_000, log=log)
    plan = np.zeros(cost.shape)
    if log:
        sub_plan, info = out
        plan[np.ix_(rows, cols)] = sub_plan
        return plan, (sub, sub_plan, info["u"], info["v"])
    plan[np.ix_(rows, cols)] = out
    return plan


def slackness_residual(cost: np.ndarray, plan: np.ndarray, u: np.ndarray, v: np.ndarray) -> float:
    """Worst violation of dual feasibility or complementary slackness."""
    reduced = cost - u[:, None] - v[None, :]
    infeasible = max(0.0, float(-reduced.min()))
    slack = float(np.abs(plan * reduced).sum())
    return max(infeasible, slack)


def solve_ot_exact(cost: Any, mu: Any, nu: Any) -> tuple[Coupling, float]:
    """Exact optimal coupling for a linear cost; returns (coupling, sum pi * cost)."""
    cost = np.asarray(cost, dtype=float)
    mu, nu = _pair(mu, nu)
    if cost.shape != (mu.size, nu.size):
        raise ValueError(f"cost shape {cost.shape} does not match marginals ({mu.size}, {nu.size})")
    if not np.all(np.isfinite(cost)):
        raise ValueError("cost must be finite")
    plan, (sub, sub_plan, u, v) = _emd(cost, mu, nu, log=True)
    scale = max(1.0, float(np.abs(cost).max()))
    resid = slackness_residual(sub, sub_plan, u, v)
    if resid > SLACKNESS_TOL * scale:
        warnings.warn(f"optimal transport slackness residual {resid:.3e} exceeds tolerance", RuntimeWarning)
    coupling = Coupling(plan, mu, nu)
    return coupling, float((coupling.matrix * cost).sum())


def _quantile_steps(support_a, weights_a, support_b, weights_b):
    """Widths and paired quantile values of two measures on R over merged CDF levels."""
    xa, wa = np.asarray(support_a, dtype=float).ravel(), _prob(weights_a, "weights_a")
    xb, wb = np.asarray(support_b, dtype=float).ravel(), _prob(weights_b, "weights_b")
    if xa.size != wa.size or xb.size != wb.size:
        raise ValueError("support and weight lengths differ")
    if abs(wa.sum() - wb.sum()) > MARGINAL_TOL:
        raise InfeasibleMarginals("measures have different total mass")
    oa, ob = np.argsort(xa, kind="stable"), np.argsort(xb, kind="stable")
    xa, wa, xb, wb = xa[oa], wa[oa] / wa.sum(), xb[ob], wb[ob] / wb.sum()
    ca, cb = np.cumsum(wa), np.cumsum(wb)
    ca[-1] = cb[-1] = 1.0
    cuts = np.union1d(ca, cb)
    lower = np.concatenate([[0.0], cuts[:-1]])
    mid = 0.5 * (cuts + lower)
    ia = np.minimum(np.searchsorted(ca, mid, side="left"), xa.size - 1)
    ib = np.minimum(np.searchsorted(cb, mid, side="left"), xb.size - 1)
    return cuts - lower, xa[ia], xb[ib]


def solve_ot_1d(support_a, weights_a, support_b, weights_b, p: float = 1.0) -> float:
    """W_p between two finitely supported measures on the real line (monotone matching)."""
    p = check_p(p)
    width, qa, qb = _quantile_steps(support_a, weights_a, support_b, weights_b)
    gap = np.abs(qa - qb)
    if p == math.inf:
        return float(gap[width > 0].max(initial=0.0))
    return float(max((width * gap ** p).sum(), 0.0) ** (1.0 / p))


def _feasible_below(cost: np.ndarray, mu: np.ndarray, nu: np.ndarray, tau: float):
    blocked = (cost > tau).astype(float)
    plan = _emd(blocked, mu, nu)
    return float((plan * blocked).sum()) <= 1e-12, plan


def bottleneck_coupling(cost: Any, mu: Any, nu: Any) -> tuple[Coupling, float]:
    """Coupling minimizing the largest cost on its support, with that cost."""
    cost = np.asarray(cost, dtype=float)
    mu, nu = _pair(mu, nu)
    if cost.shape != (mu.size, nu.size):
        raise ValueError(f"cost shape {cost.shape} does not match marginals ({mu.size}, {nu.size})")
    live = np.ix_(mu > 0, nu > 0)
    levels = np.unique(cost[live])
    lo, hi = 0, levels.size - 1
    best = None
    while lo < hi:
        mid = (lo + hi) // 2
        ok, plan = _feasible_below(cost, mu, nu, levels[mid])
        if ok:
            hi, best = mid, plan
        else:
            lo = mid + 1
    if best is None:
        _, best = _feasible_below(cost, mu, nu, levels[lo])
    return Coupling(best, mu, nu), float(levels[lo])


def solve_ot_bottleneck(cost: Any, mu: Any, nu: Any) -> float:
    """Least threshold tau among the costs such that a coupling lives on {cost <= tau}."""
    return bottleneck_coupling(cost, mu, nu)[1]


class SinkhornResult(NamedTuple):
    coupling: Coupling
    value: float
    converged: bool
    n_iter: int


def _round_to_polytope(plan: np.ndarray, mu: np.ndarray, nu: np.ndarray) -> np.ndarray:
    """Scale down rows and columns, then add the rank-one correction so marginals are exact."""
    r = plan.sum(axis=1)
    plan = plan * np.minimum(1.0, np.divide(mu, r, out=np.ones_like(mu), where=r > 0))[:, None]
    c = plan.sum(axis=0)
    plan = plan * np.minimum(1.0, np.divide(nu, c, out=np.ones_like(nu), where=c > 0))[None, :]
    er, ec = mu - plan.sum(axis=1), nu - plan.sum(axis=0)
    mass = er.sum()
    if mass > 0:
        plan = plan + np.outer(er, ec) / mass
    return np.maximum(plan, 0.0)


def sinkhorn(cost: Any, mu: Any, nu: Any, epsilon: float, max_iter: int = 10_000,
             tol: float = 1e-9) -> SinkhornResult:
    """Entropic OT in the log domain, rounded onto the coupling polytope.

    The value is that of the rounded coupling under the unregularized cost and is
    approximate.  Non-convergence is reported through ``converged``.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    cost = np.asarray(cost, dtype=float)
    mu, nu = _pair(mu, nu)
    nu = nu * (mu.sum() / nu.sum())
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        plan, info = ot.sinkhorn(mu, nu, cost, epsilon, method="sinkhorn_log",
                                 numItermax=max_iter, stopThr=tol, log=True)
    plan = np.nan_to_num(np.asarray(plan, dtype=float))
    err = max(np.abs(plan.sum(axis=1) - mu).max(), np.abs(plan.sum(axis=0) - nu).max())
    coupling = Coupling(_round_to_polytope(plan, mu, nu), mu, nu)
    return SinkhornResult(coupling, float((coupling.matrix * cost).sum()), bool(err <= max(tol, 1e-6)),
                          int(info.get("niter", max_iter)))


def wasserstein_from_cost(dist: np.ndarray, mu: Any, nu: Any, p: float) -> tuple[Coupling, float]:
    """W_p for a ground distance matrix: exact LP on dist^p, or bottleneck for p = inf."""
    p = check_p(p)
    dist = np.asarray(dist, dtype=float)
    if p == math.inf:
        return bottleneck_coupling(dist, mu, nu)
    coupling, value = solve_ot_exact(dist ** p, mu, nu)
    return coupling, max(value, 0.0) ** (1.0 / p)


def wasserstein_in_Z(space: MetricSpace, atoms_a: Sequence[Any], weights_a: Any,
                     atoms_b: Sequence[Any], weights_b: Any, p: float) -> float:
    """W_p between two finitely supported measures on the target space."""
    return wasserstein_from_cost(space.pairwise(atoms_a, atoms_b), weights_a, weights_b, p)[1]
