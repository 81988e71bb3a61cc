"""Distortion of couplings and its minimization: the Z-Gromov-Wasserstein distance.

For a coupling pi between (X, omega_X, mu) and (Y, omega_Y, nu),

    dis_p(pi) = (sum pi_ij pi_i'j' d_Z(omega_X(i, i'), omega_Y(j, j'))^p)^(1/p)

and GW_p = inf dis_p / 2.  ``dis_p^p`` is the quadratic form vec(pi)^T L vec(pi)
with L[(i, j), (i', j')] = d_Z(omega_X(i, i'), omega_Y(j, j'))^p, which
``solve_gw`` minimizes by conditional gradient (Frank-Wolfe) with exact LP
steps and exact line search.  Every reported value is distortion / 2 of a
concrete feasible coupling, so it is an upper bound on the distance.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .metric_spaces import IncompatibleSpaces
from .network import ZNetwork, is_dirac
from .transport import Coupling, _emd, check_p, product_coupling

__all__ = [
    "DEFAULT_SIZE_CAP", "DENSE_LIMIT", "SizeCapExceeded", "SolveConfig", "RestartTrace", "SolveReport",
    "size_cap", "distance_tensor", "distortion", "solve_gw", "gw_exact_dirac", "brute_force_gw",
    "lp_comparison_bound", "as_coupling", "transport_vertices",
]

DEFAULT_SIZE_CAP = 256
# largest n*m for which the (nm x nm) cost table is held in memory
DENSE_LIMIT = 4096
INF_CONTINUATION = (2.0, 8.0, 32.0)
# p = inf is solved exactly by vertex enumeration below this many candidate bases
VERTEX_ENUMERATION_LIMIT = 20000
# p < inf: below this many candidate bases the best-scoring vertex seeds an extra start
VERTEX_SEED_LIMIT = 5000
INIT_STRATEGIES = ("product", "random", "supplied", "all")


class SizeCapExceeded(ValueError):
    """A network is larger than the configured size cap."""


def size_cap() -> int:
    raw = os.environ.get("ZGW_SIZE_CAP")
    if raw is None or not raw.strip():
        return DEFAULT_SIZE_CAP
    cap = int(raw)
    if cap < 1:
        raise ValueError("ZGW_SIZE_CAP must be a positive integer")
    return cap


@dataclass
class SolveConfig:
    p: float = 2.0
    restarts: int = 5
    max_outer_iters: int = 200
    tolerance: float = 1e-9
    rng_seed: int = 0
    init_strategy: str = "all"
    init_coupling: Any = None
    support_threshold: float = 1e-12
    size_cap: int | None = None
    verify: bool = False

    def __post_init__(self):
        self.p = check_p(self.p)
        if self.restarts < 1 or self.max_outer_iters < 1:
            raise ValueError("restarts and max_outer_iters must be positive")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if not 0 < self.support_threshold < 1:
            raise ValueError("support_threshold must lie in (0, 1)")
        if self.init_strategy not in INIT_STRATEGIES:
            raise ValueError(f"init_strategy must be one of {INIT_STRATEGIES}")
        if self.init_strategy == "supplied" and self.init_coupling is None:
            raise ValueError("init_strategy 'supplied' needs init_coupling")
        if self.size_cap is None:
            self.size_cap = size_cap()


@dataclass
class RestartTrace:
    restart: int
    init: str
    p: float
    value: float
    iterations: int
    converged: bool
    objective: list = field(default_factory=list)


@dataclass
class SolveReport:
    value: float
    coupling: Coupling
    p: float
    trace: list = field(default_factory=list)
    exact: bool = False
    converged: bool = True
    heuristic: bool = False
    bounds: Any = None

    @property
    def sparsity(self) -> int:
        """Number of nonzero coupling entries."""
        return int(np.count_nonzero(self.coupling.matrix))


def _check_pair(netX: ZNetwork, netY: ZNetwork, cap: int | None = None) -> None:
    if netX.space != netY.space:
        raise IncompatibleSpaces(f"networks live over different spaces: {netX.space!r} vs {netY.space!r}")
    cap = size_cap() if cap is None else cap
    if netX.n > cap or netY.n > cap:
        raise SizeCapExceeded(f"network sizes ({netX.n}, {netY.n}) exceed the cap {cap}")


def as_coupling(coupling: Any, netX: ZNetwork, netY: ZNetwork) -> Coupling:
    """Validate a coupling (or raw matrix) against the two networks' weights."""
    matrix = coupling.matrix if isinstance(coupling, Coupling) else np.asarray(coupling, dtype=float)
    return Coupling(matrix, netX.weights, netY.weights)


def _pair_distances(netX: ZNetwork, netY: ZNetwork, xi: np.ndarray, yi: np.ndarray) -> np.ndarray:
    """d_Z between flattened kernel entries xi of X and yi of Y."""
    sp = netX.space
    return sp.paired(sp.take(netX.stacked, xi), sp.take(netY.stacked, yi))


def distance_tensor(netX: ZNetwork, netY: ZNetwork) -> np.ndarray:
    """T[i, i', j, j'] = d_Z(omega_X(i, i'), omega_Y(j, j'))."""
    _check_pair(netX, netY, cap=max(netX.n, netY.n))
    n2, m2 = netX.n ** 2, netY.n ** 2
    xi = np.repeat(np.arange(n2), m2)
    yi = np.tile(np.arange(m2), n2)
    flat = _pair_distances(netX, netY, xi, yi)
    return flat.reshape(netX.n, netX.n, netY.n, netY.n)


def distortion(netX: ZNetwork, netY: ZNetwork, coupling: Any, p: float,
               threshold: float = 1e-12) -> float:
    """dis_p of a coupling, evaluated directly over pairs of support entries.

    For p = inf only entries above ``threshold`` count as support.
    """
    p = check_p(p)
    _check_pair(netX, netY, cap=max(netX.n, netY.n))
    pi = as_coupling(coupling, netX, netY).matrix
    rows, cols = np.nonzero(pi > (threshold if p == math.inf else 0.0))
    w = pi[rows, cols]
    k = rows.size
    a = np.repeat(np.arange(k), k)
    b = np.tile(np.arange(k), k)
    d = _pair_distances(netX, netY, rows[a] * netX.n + rows[b], cols[a] * netY.n + cols[b])
    if p == math.inf:
        return float(d.max(initial=0.0))
    total = float((w[a] * w[b] * d ** p).sum())
    return max(total, 0.0) ** (1.0 / p)


def gw_exact_dirac(netX: ZNetwork, netY: ZNetwork, p: float = 2.0, threshold: float = 1e-12) -> SolveReport:
    """Exact distance when one side is a Dirac network: the product coupling is the only one."""
    p = check_p(p)
    if not (is_dirac(netX) or is_dirac(netY)):
        raise ValueError("neither network has a Dirac weight vector")
    coupling = product_coupling(netX.weights, netY.weights)
    value = distortion(netX, netY, coupling, p, threshold) / 2.0
    trace = [RestartTrace(0, "product", p, value, 0, True)]
    return SolveReport(value, coupling, p, trace, exact=True, converged=True)


class _Objective:
    """Quadratic form f(x) = x^T L x on vec(pi), with L built from normalized distances.

    Distances are divided by their maximum before powering so that f lies in [0, 1].
    """

    def __init__(self, netX: ZNetwork, netY: ZNetwork, p: float):
        self.netX, self.netY = netX, netY
        self.n, self.m = netX.n, netY.n
        self.p = p
        nm = self.n * self.m
        self.dense = nm <= DENSE_LIMIT
        if self.dense:
            T = distance_tensor(netX, netY)
            if not np.all(np.isfinite(T)):
                raise ValueError("kernel distances must be finite for the iterative solver")
            self.scale = float(T.max())
            Tn = T / self.scale if self.scale > 0 else T
            self.raw = Tn.transpose(0, 2, 1, 3).reshape(nm, nm)
            self.L = self.raw if p == 1 else self.raw ** p
        else:
            self.scale = max((float(blk.max()) for _, blk in self._blocks(None)), default=0.0)

    def _blocks(self, p):
        """Rows of T for blocks of the first X index, normalized and powered when p is given."""
        n, m = self.n, self.m
        rows = max(1, (1 << 22) // (n * m * m))
        for start in range(0, n, rows):
            ia = np.arange(start, min(n, start + rows))
            xi = (ia[:, None] * n + np.arange(n)[None, :]).ravel()
            xi = np.repeat(xi, m * m)
            yi = np.tile(np.arange(m * m), ia.size * n)
            blk = _pair_distances(self.netX, self.netY, xi, yi).reshape(ia.size, n, m, m)
            if p is not None:
                if self.scale > 0:
                    blk = blk / self.scale
                blk = blk ** p
            yield ia, blk

    def with_power(self, p: float) -> "_Objective":
        other = object.__new__(_Objective)
        other.__dict__.update(self.__dict__)
        other.p = p
        if self.dense:
            other.L = self.raw if p == 1 else self.raw ** p
        return other

    def products(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(L x, L^T x)."""
        if self.dense:
            return self.L @ x, self.L.T @ x
        n, m = self.n, self.m
        X = x.reshape(n, m)
        fwd = np.zeros((n, m))
        back = np.zeros((n, m))
        for ia, blk in self._blocks(self.p):
            fwd[ia] = np.einsum("aibj,ij->ab", blk, X)
            back += np.einsum("aibj,ab->ij", blk, X[ia])
        return fwd.ravel(), back.ravel()

    def value(self, x: np.ndarray) -> float:
        return float(x @ self.products(x)[0])

    def sup_values(self, xs: np.ndarray, threshold: float) -> np.ndarray:
        """Normalized p = inf distortion of each row of xs."""
        if not self.dense:
            return np.array([self.sup_value(x, threshold) for x in xs])
        out = np.empty(xs.shape[0])
        nm = self.raw.shape[0]
        chunk = max(1, (1 << 22) // (nm * nm))
        for start in range(0, xs.shape[0], chunk):
            live = xs[start:start + chunk] > threshold
            pairs = live[:, :, None] & live[:, None, :]
            out[start:start + chunk] = np.where(pairs, self.raw[None], 0.0).max(axis=(1, 2))
        return out

    def sup_value(self, x: np.ndarray, threshold: float) -> float:
        """Normalized p = inf distortion of x."""
        live = np.flatnonzero(x > threshold)
        if self.dense:
            return float(self.raw[np.ix_(live, live)].max(initial=0.0))
        pi = x.reshape(self.n, self.m)
        return distortion(self.netX, self.netY, Coupling(pi, pi.sum(1), pi.sum(0)), math.inf, threshold) / (
            self.scale or 1.0)


def _frank_wolfe(obj: _Objective, x0: np.ndarray, mu: np.ndarray, nu: np.ndarray,
                 tol: float, max_iter: int, vertices: list | None = None):
    """Conditional gradient from x0; returns (x, f(x), history, iterations, converged)."""
    n, m = obj.n, obj.m
    x = x0.copy()
    fwd, back = obj.products(x)
    f = float(x @ fwd)
    history = [f]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        grad = fwd + back
        s = _emd(grad.reshape(n, m), mu, nu).ravel()
        if vertices is not None:
            vertices.append(s)
        d = s - x
        slope = float(grad @ d)
        if -slope <= tol * max(1.0, f):
            converged = True
            break
        d_fwd, d_back = obj.products(d)
        curv = float(d @ d_fwd)
        gamma = 1.0 if curv <= 0 else min(1.0, max(0.0, -slope / (2.0 * curv)))
        if gamma == 0.0:
            converged = True
            break
        x = np.maximum(x + gamma * d, 0.0)
        fwd, back = fwd + gamma * d_fwd, back + gamma * d_back
        f = float(x @ fwd)
        history.append(f)
    return x, f, history, it, converged


def _best_vertex(obj: _Objective, mu: np.ndarray, nu: np.ndarray) -> np.ndarray | None:
    """Coupling-polytope vertex of least objective, or None when enumeration is too large."""
    live_x, live_y = np.flatnonzero(mu > 0), np.flatnonzero(nu > 0)
    a, b = live_x.size, live_y.size
    if not obj.dense or math.comb(a * b, a + b - 1) > VERTEX_SEED_LIMIT:
        return None
    verts = transport_vertices(mu[live_x], nu[live_y])
    full = np.zeros((verts.shape[0], mu.size, nu.size))
    full[:, live_x[:, None], live_y[None, :]] = verts
    flat = full.reshape(verts.shape[0], -1)
    scores = np.einsum("vi,ij,vj->v", flat, obj.L, flat)
    return flat[int(np.argmin(scores))]


def _initial_points(cfg: SolveConfig, mu: np.ndarray, nu: np.ndarray, supplied: np.ndarray | None,
                    vertex: np.ndarray | None = None):
    """Yield (restart index, label, x0) following the init strategy."""
    n, m = mu.size, nu.size
    plan: list[str] = []
    if cfg.init_strategy == "all":
        plan = ["product"] + (["supplied"] if supplied is not None else [])
        plan += ["vertex"] if vertex is not None else []
        plan += ["random"] * max(0, cfg.restarts - len(plan))
    elif cfg.init_strategy == "random":
        plan = ["random"] * cfg.restarts
    else:
        plan = [cfg.init_strategy]
    for r, kind in enumerate(plan):
        if kind == "product":
            x0 = np.outer(mu, nu)
        elif kind == "supplied":
            x0 = supplied
        elif kind == "vertex":
            x0 = vertex
        else:
            rng = np.random.default_rng([cfg.rng_seed, r])
            v1 = _emd(rng.random((n, m)), mu, nu)
            v2 = _emd(rng.random((n, m)), mu, nu)
            w = rng.dirichlet(np.ones(3))
            x0 = w[0] * v1 + w[1] * v2 + w[2] * np.outer(mu, nu)
        yield r, kind, np.asarray(x0, dtype=float).ravel()


def _finish(netX, netY, x, p, cfg, traces, converged, heuristic) -> SolveReport:
    pi = x.reshape(netX.n, netY.n)
    coupling = Coupling(np.maximum(pi, 0.0), netX.weights, netY.weights)
    value = distortion(netX, netY, coupling, p, cfg.support_threshold) / 2.0
    report = SolveReport(value, coupling, p, traces, exact=False, converged=converged, heuristic=heuristic)
    if cfg.verify:
        _attach_bounds(report, netX, netY, p)
    return report


def _attach_bounds(report: SolveReport, netX: ZNetwork, netY: ZNetwork, p: float) -> None:
    from .bounds import bound_report

    bounds = bound_report(netX, netY, p)
    report.bounds = bounds
    best = max(bounds.tlb, bounds.flb, bounds.szlb, bounds.slb if bounds.slb is not None else 0.0)
    if best > report.value + 1e-9:
        raise AssertionError(f"solver value {report.value!r} is below lower bound {best!r}")


def solve_gw(netX: ZNetwork, netY: ZNetwork, config: SolveConfig | None = None) -> SolveReport:
    """Best coupling found by multi-restart Frank-Wolfe; value = distortion / 2.

    Dirac inputs are solved exactly.  For p = inf the value is exact when the
    coupling polytope is small enough to enumerate its vertices; otherwise it
    comes from a p = 2 -> 8 -> 32 continuation and is flagged heuristic.  For
    p < inf small polytopes add the best-scoring vertex as one more start.
    """
    cfg = config or SolveConfig()
    _check_pair(netX, netY, cfg.size_cap)
    p = cfg.p
    if is_dirac(netX) or is_dirac(netY):
        report = gw_exact_dirac(netX, netY, p, cfg.support_threshold)
        if cfg.verify:
            _attach_bounds(report, netX, netY, p)
        return report
    mu, nu = netX.weights, netY.weights
    supplied = None
    if cfg.init_coupling is not None:
        supplied = as_coupling(cfg.init_coupling, netX, netY).matrix
    if p == math.inf:
        return _solve_sup(netX, netY, cfg, supplied)

    obj = _Objective(netX, netY, p)
    vertex = _best_vertex(obj, mu, nu) if cfg.init_strategy == "all" else None
    best = None
    traces = []
    for r, kind, x0 in _initial_points(cfg, mu, nu, supplied, vertex):
        vertices: list = []
        x, f, hist, iters, conv = _frank_wolfe(obj, x0, mu, nu, cfg.tolerance, cfg.max_outer_iters, vertices)
        for v in vertices:
            fv = obj.value(v)
            if fv < f:
                x, f = v, fv
        traces.append(RestartTrace(r, kind, p, obj.scale * max(f, 0.0) ** (1.0 / p) / 2.0, iters, conv, hist))
        if best is None or f < best[0]:
            best = (f, r, x, conv)
    return _finish(netX, netY, best[2], p, cfg, traces, best[3], heuristic=False)


def transport_vertices(mu: np.ndarray, nu: np.ndarray) -> np.ndarray:
    """All vertices of the coupling polytope, as an array (V, n, m).

    Enumerates candidate bases of n + m - 1 cells; intended for small n * m only.
    """
    n, m = mu.size, nu.size
    k = n + m - 1
    cells = list(itertools.combinations(range(n * m), k))
    idx = np.array(cells, dtype=int).reshape(len(cells), k)
    # incidence rows: n row sums, then the first m - 1 column sums (the last is implied)
    A = np.zeros((len(cells), k, k))
    r, c = np.divmod(idx, m)
    cols = np.arange(k)[None, :].repeat(len(cells), 0)
    batch = np.arange(len(cells))[:, None].repeat(k, 1)
    A[batch, r, cols] = 1.0
    in_cols = c < m - 1
    A[batch[in_cols], n + c[in_cols], cols[in_cols]] = 1.0
    det = np.linalg.det(A)
    ok = np.abs(det) > 0.5
    rhs = np.concatenate([mu, nu[:-1]])
    sol = np.linalg.solve(A[ok], np.broadcast_to(rhs, (int(ok.sum()), k))[..., None])[..., 0]
    feasible = sol.min(axis=1) >= -1e-12
    plans = np.zeros((int(feasible.sum()), n * m))
    rows = np.arange(plans.shape[0])[:, None]
    plans[rows, idx[ok][feasible]] = np.maximum(sol[feasible], 0.0)
    plans = np.unique(np.round(plans, 15), axis=0)
    return plans.reshape(-1, n, m)


def _solve_sup(netX, netY, cfg: SolveConfig, supplied) -> SolveReport:
    mu, nu = netX.weights, netY.weights
    obj = _Objective(netX, netY, 1.0)
    live_x, live_y = np.flatnonzero(mu > 0), np.flatnonzero(nu > 0)
    a, b = live_x.size, live_y.size
    if math.comb(a * b, a + b - 1) <= VERTEX_ENUMERATION_LIMIT:
        # the support of any coupling contains the support of a vertex, so a vertex is optimal
        verts = transport_vertices(mu[live_x], nu[live_y])
        full = np.zeros((verts.shape[0], netX.n, netY.n))
        full[:, live_x[:, None], live_y[None, :]] = verts
        flat = full.reshape(verts.shape[0], -1)
        scores = obj.sup_values(flat, cfg.support_threshold)
        k = int(np.argmin(scores))
        traces = [RestartTrace(0, "vertices", math.inf, obj.scale * scores[k] / 2.0, verts.shape[0], True)]
        report = _finish(netX, netY, flat[k], math.inf, cfg, traces, True, heuristic=False)
        report.exact = True
        return report
    candidates = [np.outer(mu, nu).ravel()]
    traces = []
    starts = list(_initial_points(cfg, mu, nu, supplied))
    conv_all = True
    for stage, q in enumerate(INF_CONTINUATION):
        stage_obj = obj.with_power(q)
        stage_best = None
        for r, kind, x0 in starts:
            x, f, hist, iters, conv = _frank_wolfe(stage_obj, x0, mu, nu, cfg.tolerance, cfg.max_outer_iters,
                                                   candidates)
            candidates.append(x)
            traces.append(RestartTrace(r, f"{kind}@p={q:g}", q, obj.scale * max(f, 0.0) ** (1.0 / q) / 2.0,
                                       iters, conv, hist))
            conv_all = conv_all and conv
            if stage_best is None or f < stage_best[0]:
                stage_best = (f, r, kind, x)
        starts = [(stage_best[1], "continued", stage_best[3])]
    scores = [obj.sup_value(c, cfg.support_threshold) for c in candidates]
    x = candidates[int(np.argmin(scores))]
    return _finish(netX, netY, x, math.inf, cfg, traces, conv_all, heuristic=True)


def _drop_massless(net: ZNetwork) -> tuple[ZNetwork, np.ndarray]:
    keep = np.flatnonzero(net.weights > 0)
    if keep.size == net.n:
        return net, keep
    w = net.weights[keep]
    return ZNetwork(net.space, w / w.sum(), net.kernel[np.ix_(keep, keep)],
                    tuple(net.labels[i] for i in keep)), keep


def _support_search(X: ZNetwork, Y: ZNetwork) -> tuple[float, np.ndarray]:
    """Exact p = inf value by enumerating every support pattern on the n x m cells.

    dis_inf depends on the support only; a pattern carries a coupling iff every set
    of rows R satisfies mu(R) <= nu(neighbours of R) (Hall's condition).
    """
    n, m = X.n, Y.n
    mu, nu = X.weights, Y.weights
    T = distance_tensor(X, Y).transpose(0, 2, 1, 3).reshape(n * m, n * m)
    masks = ((np.arange(1, 1 << (n * m))[:, None] >> np.arange(n * m)[None, :]) & 1).astype(bool)
    adj = masks.reshape(-1, n, m)
    feasible = np.ones(masks.shape[0], dtype=bool)
    for rset in range(1, 1 << n):
        rows = np.array([(rset >> i) & 1 for i in range(n)], dtype=bool)
        reach = adj[:, rows, :].any(axis=1)
        feasible &= mu[rows].sum() <= reach @ nu + 1e-12
    masks = masks[feasible]
    pairs = masks[:, :, None] & masks[:, None, :]
    scores = np.where(pairs, T[None], -np.inf).max(axis=(1, 2))
    k = int(np.argmin(scores))
    blocked = (~masks[k]).reshape(n, m).astype(float)
    return float(scores[k]) / 2.0, _emd(blocked, mu, nu)


def brute_force_gw(netX: ZNetwork, netY: ZNetwork, p: float, resolution: int = 1000,
                   return_coupling: bool = False):
    """Minimum distortion / 2 over a grid on the coupling polytope.

    Free entries pi_ij (i < n-1, j < m-1) are visited in row-major order; each
    ranges over resolution + 1 evenly spaced values between the least and largest
    choices that keep the remaining problem feasible, endpoints included.  For
    p = inf the value depends on the support only and every support pattern is
    enumerated instead, which is exact.  Requires (n-1)(m-1) <= 4 after dropping
    zero-weight points.
    """
    p = check_p(p)
    if int(resolution) < 1:
        raise ValueError("resolution must be a positive integer")
    _check_pair(netX, netY, cap=max(netX.n, netY.n))
    X, keep_x = _drop_massless(netX)
    Y, keep_y = _drop_massless(netY)
    n, m = X.n, Y.n
    dof = (n - 1) * (m - 1)
    if dof > 4:
        raise ValueError(f"polytope dimension {dof} exceeds 4")
    mu, nu = X.weights, Y.weights
    if p == math.inf:
        value, plan = _support_search(X, Y)
        if not return_coupling:
            return value
        full = np.zeros((netX.n, netY.n))
        full[np.ix_(keep_x, keep_y)] = plan
        return value, Coupling(full, netX.weights, netY.weights)

    # enumerate the grid level by level; each state holds the partial matrix and residuals
    plans = np.zeros((1, n, m))
    colres = nu[None, :].copy()
    for i in range(n - 1):
        rowres = np.full(plans.shape[0], mu[i])
        for j in range(m - 1):
            after = colres[:, j + 1:].sum(axis=1)
            lo = np.maximum(0.0, rowres - after)
            hi = np.minimum(colres[:, j], rowres)
            hi = np.maximum(hi, lo)
            steps = np.linspace(0.0, 1.0, int(resolution) + 1)
            flat = (hi - lo) <= 1e-15
            count = np.where(flat, 1, steps.size)
            parent = np.repeat(np.arange(plans.shape[0]), count)
            offset = np.cumsum(count) - count
            frac = steps[np.arange(parent.size) - offset[parent]]
            vals = lo[parent] + frac * (hi - lo)[parent]
            plans = plans[parent]
            colres = colres[parent]
            rowres = rowres[parent] - vals
            plans[:, i, j] = vals
            colres[:, j] -= vals
        last = np.maximum(rowres, 0.0)
        plans[:, i, m - 1] = last
        colres[:, m - 1] -= last
    plans[:, n - 1, :] = np.maximum(colres, 0.0)

    obj = _Objective(X, Y, 1.0 if p == math.inf else p)
    flat_plans = plans.reshape(plans.shape[0], n * m)
    scores = np.empty(flat_plans.shape[0])
    chunk = max(1, (1 << 22) // max(1, (n * m) ** 2))
    for start in range(0, flat_plans.shape[0], chunk):
        block = flat_plans[start:start + chunk]
        if p == math.inf:
            scores[start:start + chunk] = obj.sup_values(block, 1e-12)
        else:
            scores[start:start + chunk] = np.einsum("ka,ab,kb->k", block, obj.L, block)
    k = int(np.argmin(scores))
    best = max(float(scores[k]), 0.0)
    value = obj.scale * (best if p == math.inf else best ** (1.0 / p)) / 2.0
    if not return_coupling:
        return value
    full = np.zeros((netX.n, netY.n))
    full[np.ix_(keep_x, keep_y)] = plans[k]
    return value, Coupling(full, netX.weights, netY.weights)


def lp_comparison_bound(net0: ZNetwork, net1: ZNetwork, p: float) -> float:
    """Half the L^p(mu x mu) distance between two kernels on a shared weighted carrier."""
    p = check_p(p)
    if net0.n != net1.n or not np.array_equal(net0.weights, net1.weights):
        raise ValueError("networks must share carrier and weights")
    if net0.space != net1.space:
        raise IncompatibleSpaces("networks live over different spaces")
    diff = net0.space.paired(net0.stacked, net1.stacked).reshape(net0.n, net0.n)
    mu = net0.weights
    if p == math.inf:
        live = mu > 0
        return float(diff[np.ix_(live, live)].max()) / 2.0
    return float(max(mu @ diff ** p @ mu, 0.0) ** (1.0 / p)) / 2.0
