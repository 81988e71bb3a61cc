"""Paths between Z-networks: mixtures, contractions to a point, and geodesics.

Each construction comes with the explicit coupling that certifies its distance
estimates, so the estimates can be checked by evaluating a distortion.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .gw import _check_pair, brute_force_gw, distortion, gw_exact_dirac
from .metric_spaces import Discrete, NonGeodesicSpace, geodesic_point
from .network import ZNetwork, is_dirac, one_point, size
from .transport import Coupling, check_p

__all__ = [
    "PathSpec", "mixture_path", "mixture_coupling", "mixture_endpoint_coupling", "mixture_holder_terms",
    "mixture_holder_bound", "contraction_path", "contraction_coupling", "contraction_endpoint_coupling",
    "contraction_holder_bound", "geodesic_interpolate", "geodesic_coupling", "projection_coupling",
    "GeodesicReport", "verify_geodesic", "staircase_network", "collapse_constant", "MidpointSearch",
    "midpoint_search", "sample_path",
]

STAR = "*"


def _unit(t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"time {t} is outside [0, 1]")
    return t


# -- mixture path --------------------------------------------------------------

def mixture_path(netX: ZNetwork, netY: ZNetwork, z_fill: Any, t: float) -> ZNetwork:
    """Disjoint union X u Y with cross blocks z_fill and weights ((1-t) mu, t nu)."""
    _check_pair(netX, netY)
    t = _unit(t)
    fill = netX.space.check(z_fill)
    n, m = netX.n, netY.n
    kernel = [[fill] * (n + m) for _ in range(n + m)]
    for i in range(n):
        kernel[i][:n] = netX.kernel[i]
    for j in range(m):
        kernel[n + j][n:] = netY.kernel[j]
    weights = np.concatenate([(1.0 - t) * netX.weights, t * netY.weights])
    labels = tuple(f"X:{a}" for a in netX.labels) + tuple(f"Y:{b}" for b in netY.labels)
    return ZNetwork(netX.space, weights, kernel, labels)


def mixture_coupling(netX: ZNetwork, netY: ZNetwork, pi: Any, s: float, t: float) -> Coupling:
    """(1-t) diag(mu) + (t-s) pi + s diag(nu) between mixtures at times s <= t."""
    s, t = _unit(s), _unit(t)
    if s > t:
        raise ValueError("need s <= t")
    pi = np.asarray(pi.matrix if isinstance(pi, Coupling) else pi, dtype=float)
    n, m = netX.n, netY.n
    plan = np.zeros((n + m, n + m))
    plan[:n, :n] = np.diag((1.0 - t) * netX.weights)
    plan[:n, n:] = (t - s) * pi
    plan[n:, n:] = np.diag(s * netY.weights)
    row = np.concatenate([(1.0 - s) * netX.weights, s * netY.weights])
    col = np.concatenate([(1.0 - t) * netX.weights, t * netY.weights])
    return Coupling(plan, row, col)


def mixture_endpoint_coupling(netX: ZNetwork, netY: ZNetwork, end: int) -> Coupling:
    """Coupling between the path endpoint (t = end) and the corresponding input network."""
    n, m = netX.n, netY.n
    if end == 0:
        plan = np.zeros((n + m, n))
        plan[:n, :] = np.diag(netX.weights)
        return Coupling(plan, np.concatenate([netX.weights, np.zeros(m)]), netX.weights)
    if end == 1:
        plan = np.zeros((n + m, m))
        plan[n:, :] = np.diag(netY.weights)
        return Coupling(plan, np.concatenate([np.zeros(n), netY.weights]), netY.weights)
    raise ValueError("end must be 0 or 1")


def mixture_holder_terms(netX: ZNetwork, netY: ZNetwork, pi: Any, z_fill: Any, p: float) -> dict:
    """Cross integrals between the diagonal plans and pi on the union carrier.

    Keys are 'pipi', 'Xpi', 'piX', 'piY', 'Ypi'; a term 'AB' integrates
    d_Z(omega(u, u'), omega(v, v'))^p against A(du dv) B(du' dv').
    """
    p = check_p(p)
    if p == math.inf:
        raise ValueError("the Holder estimate needs p < inf")
    U = mixture_path(netX, netY, z_fill, 0.5)
    n, m = netX.n, netY.n
    pi = np.asarray(pi.matrix if isinstance(pi, Coupling) else pi, dtype=float)
    N = n + m
    plans = {"X": np.zeros((N, N)), "Y": np.zeros((N, N)), "pi": np.zeros((N, N))}
    plans["X"][:n, :n] = np.diag(netX.weights)
    plans["Y"][n:, n:] = np.diag(netY.weights)
    plans["pi"][:n, n:] = pi
    idx = np.arange(N * N)
    D = U.space.paired(U.space.take(U.stacked, np.repeat(idx, N * N)),
                       U.space.take(U.stacked, np.tile(idx, N * N))).reshape(N, N, N, N) ** p
    # D[u, u', v, v'] = d(omega(u, u'), omega(v, v'))^p

    def cross(a, b):
        return float(np.einsum("uv,wx,uwvx->", plans[a], plans[b], D))

    return {"pipi": cross("pi", "pi"), "Xpi": cross("X", "pi"), "piX": cross("pi", "X"),
            "piY": cross("pi", "Y"), "Ypi": cross("Y", "pi")}


def mixture_holder_bound(terms: dict, s: float, t: float, p: float) -> float:
    """Upper bound on GW(X_s, X_t) from the cross integrals: ((t-s) sum / 2^p)^(1/p)."""
    total = terms["pipi"] + terms["Xpi"] + terms["piX"] + terms["piY"] + terms["Ypi"]
    return (abs(t - s) * total) ** (1.0 / p) / 2.0


# -- contraction path ----------------------------------------------------------

def contraction_path(net: ZNetwork, z: Any, t: float) -> ZNetwork:
    """X u {*} with z on every pair touching *, weights ((1-t) mu, t)."""
    t = _unit(t)
    z = net.space.check(z)
    n = net.n
    kernel = [[z] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        kernel[i][:n] = net.kernel[i]
    weights = np.concatenate([(1.0 - t) * net.weights, [t]])
    return ZNetwork(net.space, weights, kernel, tuple(net.labels) + (STAR,))


def contraction_coupling(net: ZNetwork, s: float, t: float) -> Coupling:
    """Coupling between contraction-path networks at s <= t that moves (t-s) mu onto *."""
    s, t = _unit(s), _unit(t)
    if s > t:
        raise ValueError("need s <= t")
    n = net.n
    plan = np.zeros((n + 1, n + 1))
    plan[:n, :n] = np.diag((1.0 - t) * net.weights)
    plan[:n, n] = (t - s) * net.weights
    plan[n, n] = s
    row = np.concatenate([(1.0 - s) * net.weights, [s]])
    col = np.concatenate([(1.0 - t) * net.weights, [t]])
    return Coupling(plan, row, col)


def contraction_endpoint_coupling(net: ZNetwork, end: int) -> Coupling:
    """t = 0: restriction onto net; t = 1: everything onto the one-point network."""
    n = net.n
    if end == 0:
        plan = np.zeros((n + 1, n))
        plan[:n, :] = np.diag(net.weights)
        return Coupling(plan, np.concatenate([net.weights, [0.0]]), net.weights)
    if end == 1:
        plan = np.zeros((n + 1, 1))
        plan[n, 0] = 1.0
        return Coupling(plan, np.concatenate([np.zeros(n), [1.0]]), np.ones(1))
    raise ValueError("end must be 0 or 1")


def contraction_holder_bound(net: ZNetwork, z: Any, s: float, t: float, p: float) -> float:
    """(3 |t - s|)^(1/p) / 2 * size_{p,z}(net)."""
    p = check_p(p)
    return (3.0 * abs(t - s)) ** (1.0 / p) / 2.0 * size(net, p, z)


# -- geodesics -----------------------------------------------------------------

def geodesic_interpolate(netX: ZNetwork, netY: ZNetwork, pi: Any, t: float, threshold: float = 1e-12,
                         full_product: bool = False) -> ZNetwork:
    """Network on supp(pi) (or all of X x Y) with kernel points along Z-geodesics.

    Entry ((x, y), (x', y')) is the point at fraction t from omega_X(x, x') to
    omega_Y(y, y'); weights are pi restricted to the carrier and renormalized.
    """
    _check_pair(netX, netY)
    t = _unit(t)
    if not netX.space.geodesic_space:
        raise NonGeodesicSpace(f"{netX.space.kind} spaces do not provide geodesics")
    pi = Coupling(pi.matrix if isinstance(pi, Coupling) else pi, netX.weights, netY.weights).matrix
    if full_product:
        rows, cols = np.divmod(np.arange(netX.n * netY.n), netY.n)
    else:
        rows, cols = np.nonzero(pi > threshold)
    w = pi[rows, cols]
    w = w / w.sum()
    k = rows.size
    kernel = [[geodesic_point(netX.space, netX.kernel[rows[a], rows[b]], netY.kernel[cols[a], cols[b]], t)
               for b in range(k)] for a in range(k)]
    labels = tuple(f"{netX.labels[i]}|{netY.labels[j]}" for i, j in zip(rows, cols))
    return ZNetwork(netX.space, w, kernel, labels)


def geodesic_coupling(Xs: ZNetwork, Xt: ZNetwork) -> Coupling:
    """Diagonal coupling between two interpolants on the same carrier."""
    if Xs.n != Xt.n or not np.array_equal(Xs.weights, Xt.weights):
        raise ValueError("interpolants must share carrier and weights")
    return Coupling(np.diag(Xs.weights), Xs.weights, Xt.weights)


def projection_coupling(netX: ZNetwork, netY: ZNetwork, pi: Any, side: int, threshold: float = 1e-12,
                        full_product: bool = False) -> Coupling:
    """Coupling between an interpolant and netX (side 0) or netY (side 1) along the projection."""
    pi = np.asarray(pi.matrix if isinstance(pi, Coupling) else pi, dtype=float)
    if full_product:
        rows, cols = np.divmod(np.arange(netX.n * netY.n), netY.n)
    else:
        rows, cols = np.nonzero(pi > threshold)
    w = pi[rows, cols]
    w = w / w.sum()
    target, proj = (netX, rows) if side == 0 else (netY, cols)
    plan = np.zeros((rows.size, target.n))
    plan[np.arange(rows.size), proj] = w
    return Coupling(plan, w, plan.sum(axis=0))


@dataclass
class GeodesicReport:
    p: float
    base_distortion: float
    rows: list = field(default_factory=list)
    max_defect: float = 0.0
    gw_checked: bool = False
    gw_violations: list = field(default_factory=list)

    def to_csv(self) -> str:
        lines = ["s,t,distortion,bound"]
        lines += [f"{r['s']!r},{r['t']!r},{r['distortion']!r},{r['bound']!r}" for r in self.rows]
        return "\n".join(lines) + "\n"


def verify_geodesic(netX: ZNetwork, netY: ZNetwork, pi: Any, p: float, times: Sequence[float],
                    tol: float = 1e-9) -> GeodesicReport:
    """Check dis(diag; X_s, X_t) = |s - t| dis(pi) at all time pairs.

    When every interpolant is a Dirac network the distances are exact and the full
    inequality GW(X_s, X_t) <= |s - t| GW(X_0, X_1) is checked as well.
    """
    p = check_p(p)
    times = [_unit(t) for t in times]
    full = p == math.inf
    base = distortion(netX, netY, pi, p)
    nets = [geodesic_interpolate(netX, netY, pi, t, full_product=full) for t in times]
    report = GeodesicReport(p, base)
    dirac = all(is_dirac(x) for x in nets)
    gw01 = gw_exact_dirac(netX, netY, p).value if dirac else None
    report.gw_checked = dirac
    for (s, Xs), (t, Xt) in itertools.product(zip(times, nets), repeat=2):
        dis = distortion(Xs, Xt, geodesic_coupling(Xs, Xt), p)
        bound = abs(s - t) * base
        defect = abs(dis - bound)
        report.max_defect = max(report.max_defect, defect)
        row = {"s": s, "t": t, "distortion": dis, "bound": bound, "defect": defect}
        if dirac:
            gw_st = gw_exact_dirac(Xs, Xt, p).value
            row["gw"] = gw_st
            if gw_st > abs(s - t) * gw01 + tol:
                report.gw_violations.append((s, t, gw_st, abs(s - t) * gw01))
        report.rows.append(row)
    return report


# -- the two-point discrete example ----------------------------------------------

def staircase_network(k: int, t: float, space: Discrete | None = None) -> ZNetwork:
    """Uniform k-point network over {0, 1} with entry (a, b) = 1 iff (b + 1)/k <= t.

    At t = 0 the kernel is constantly 0 and at t = 1 constantly 1; kernels at
    s <= t differ on a fraction (floor(tk) - floor(sk))/k of the entries.
    """
    space = space or Discrete((0, 1))
    t = _unit(t)
    cols = (np.arange(k) + 1) <= t * k
    kernel = [[1 if cols[b] else 0 for b in range(k)] for _ in range(k)]
    return ZNetwork(space, np.full(k, 1.0 / k), kernel)


def collapse_constant(net: ZNetwork) -> ZNetwork:
    """One-point network when the kernel is constant on the support; else ValueError."""
    live = np.flatnonzero(net.weights > 0)
    vals = net.kernel[np.ix_(live, live)].ravel()
    first = vals[0]
    d = net.space.pairwise([first], list(vals))
    if d.max() > 0:
        raise ValueError("kernel is not constant on the support")
    return one_point(net.space, first)


@dataclass
class MidpointSearch:
    target: float
    best_deviation: float
    best_weight: float
    best_kernel: tuple
    evaluated: int


def midpoint_search(p: float, weights: Sequence[float], x_value: Any = 0, y_value: Any = 1,
                    resolution: int = 10) -> MidpointSearch:
    """Scan two-point networks M over {0, 1} for a midpoint between the Dirac networks x and y.

    Deviation of M is max(|GW(X, M) - g/2|, |GW(Y, M) - g/2|) with g = GW(X, Y),
    each distance computed by ``brute_force_gw``.
    """
    p = check_p(p)
    space = Discrete((0, 1))
    X, Y = one_point(space, x_value), one_point(space, y_value)
    target = brute_force_gw(X, Y, p, resolution) / 2.0
    best = (math.inf, None, None)
    count = 0
    for w in weights:
        w = float(w)
        for labels in itertools.product((0, 1), repeat=4):
            M = ZNetwork(space, np.array([w, 1.0 - w]), [list(labels[:2]), list(labels[2:])])
            dev = max(abs(brute_force_gw(X, M, p, resolution) - target),
                      abs(brute_force_gw(Y, M, p, resolution) - target))
            count += 1
            if dev < best[0]:
                best = (dev, w, labels)
    return MidpointSearch(target, best[0], best[1], best[2], count)


# -- path sampling ---------------------------------------------------------------

@dataclass
class PathSpec:
    kind: str
    start: ZNetwork
    end: ZNetwork | None = None
    fill: Any = None
    coupling: Any = None
    times: tuple = (0.0, 0.5, 1.0)

    def __post_init__(self):
        if self.kind not in ("mixture", "contraction", "geodesic"):
            raise ValueError("kind must be mixture, contraction or geodesic")
        times = tuple(_unit(t) for t in self.times)
        if list(times) != sorted(times):
            raise ValueError("sample times must be sorted")
        self.times = times


def sample_path(spec: PathSpec) -> list[ZNetwork]:
    if spec.kind == "mixture":
        return [mixture_path(spec.start, spec.end, spec.fill, t) for t in spec.times]
    if spec.kind == "contraction":
        return [contraction_path(spec.start, spec.fill, t) for t in spec.times]
    return [geodesic_interpolate(spec.start, spec.end, spec.coupling, t) for t in spec.times]
