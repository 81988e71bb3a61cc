"""Landmark embeddings into R^n and the two-sided estimate they give for Z-GW.

A landmark set Q = (q_1, ..., q_n) sends a kernel value z to (d_Z(z, q_k))_k in
(R^n, l^r).  With H the largest distance from an observed kernel value to its
nearest landmark,

    n^(-1/r) GW(X_Q, Y_Q) <= GW^Z(X, Y) <= GW(X_Q, Y_Q) + H.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .bounds import bound_report
from .gw import SolveConfig, _check_pair, gw_exact_dirac, solve_gw
from .metric_spaces import EuclideanLr, MetricSpace
from .network import ZNetwork, is_dirac
from .transport import check_p

__all__ = ["LandmarkSet", "SandwichReport", "embed_rn", "landmark_fps", "one_sided_hausdorff", "sandwich"]


@dataclass(frozen=True, eq=False)
class LandmarkSet:
    space: MetricSpace
    points: tuple

    def __post_init__(self):
        pts = tuple(self.space.check(q) for q in self.points)
        if not pts:
            raise ValueError("landmark set is empty")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)


def _landmarks(net_space: MetricSpace, Q: Any) -> LandmarkSet:
    if isinstance(Q, LandmarkSet):
        if Q.space != net_space:
            raise ValueError("landmarks live in a different space")
        return Q
    return LandmarkSet(net_space, tuple(Q))


def embed_rn(net: ZNetwork, Q: Any, r: float = math.inf) -> ZNetwork:
    """Network over (R^|Q|, l^r) with kernel entries (d_Z(omega(i, i'), q_k))_k."""
    Q = _landmarks(net.space, Q)
    r = check_p(r)
    coords = net.space.pairwise(net.kernel_values(), list(Q.points)).reshape(net.n, net.n, len(Q))
    return ZNetwork(EuclideanLr(len(Q), r), net.weights, list(coords), net.labels)


def one_sided_hausdorff(space: MetricSpace, values: Sequence[Any], Q: Any) -> float:
    """max over values z of the distance from z to its nearest landmark."""
    if len(values) == 0:
        raise ValueError("no values given")
    pts = Q.points if isinstance(Q, LandmarkSet) else tuple(Q)
    return float(space.pairwise(list(values), list(pts)).min(axis=1).max())


def landmark_fps(space: MetricSpace, values: Sequence[Any], k: int, seed: int = 0,
                 start: int | None = None) -> LandmarkSet:
    """Farthest-point sampling: start at a seeded (or given) index, then add max-min points.

    Ties go to the lowest index.
    """
    values = list(values)
    if not values:
        raise ValueError("cannot select landmarks from an empty set")
    if not 1 <= k <= len(values):
        raise ValueError(f"k must lie in [1, {len(values)}]")
    if start is None:
        start = int(np.random.default_rng(seed).integers(len(values)))
    chosen = [start]
    nearest = space.pairwise(values, [values[start]])[:, 0]
    while len(chosen) < k:
        nxt = int(np.argmax(nearest))
        chosen.append(nxt)
        nearest = np.minimum(nearest, space.pairwise(values, [values[nxt]])[:, 0])
    return LandmarkSet(space, tuple(values[i] for i in chosen))


@dataclass
class SandwichReport:
    rn_value: float
    rn_lower: float
    lower: float
    upper: float
    hausdorff_term: float
    r: float
    n: int
    exact: bool

    @property
    def consistent(self) -> bool:
        return self.lower <= self.upper


def sandwich(netX: ZNetwork, netY: ZNetwork, Q: Any, p: float, r: float = math.inf,
             config: SolveConfig | None = None) -> SandwichReport:
    """Certified interval [lower, upper] for GW^Z from the landmark embedding.

    ``lower`` uses a lower bound on the R^n distance (exact for Dirac pairs) and
    ``upper`` the solver's upper bound plus the empirical Hausdorff term over all
    kernel values of both networks.
    """
    p, r = check_p(p), check_p(r)
    _check_pair(netX, netY)
    Q = _landmarks(netX.space, Q)
    EX, EY = embed_rn(netX, Q, r), embed_rn(netY, Q, r)
    if is_dirac(EX) or is_dirac(EY):
        rn_value = gw_exact_dirac(EX, EY, p).value
        rn_lower, exact = rn_value, True
    else:
        cfg = config or SolveConfig(p=p)
        if cfg.p != p:
            raise ValueError("config exponent differs from p")
        rn_value = solve_gw(EX, EY, cfg).value
        rn_lower, exact = bound_report(EX, EY, p).best, False
    hterm = one_sided_hausdorff(netX.space, netX.kernel_values() + netY.kernel_values(), Q)
    factor = 1.0 if r == math.inf else len(Q) ** (-1.0 / r)
    return SandwichReport(rn_value, rn_lower, factor * rn_lower, rn_value + hterm, hterm, r, len(Q), exact)
