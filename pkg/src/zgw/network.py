"""Finite Z-networks (X, omega, mu), attributed-graph ingestion and pointwise invariants."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Sequence

import numpy as np

from .metric_spaces import (
    Cone, ConePoint, MetricSpace, Real, SpaceError, WeightedProduct, require_same_space,
    space_from_json,
)
from .transport import Coupling, check_p

__all__ = [
    "WEIGHT_TOL", "ZNetwork", "AttributedGraph", "FusedParams",
    "size", "eccentricity_out", "eccentricity_in", "blow_up", "collapse_coupling",
    "diagonal_coupling", "from_attributed_graph_fused", "from_edge_attributed_cone",
    "one_point", "is_dirac",
]

WEIGHT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ZNetwork:
    """Finite carrier with probability weights and a kernel of points in ``space``.

    The kernel is an (n, n) object array and need not be symmetric.
    """

    space: MetricSpace
    weights: np.ndarray
    kernel: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        w = np.array(self.weights, dtype=float).ravel()
        n = w.size
        if n == 0:
            raise ValueError("network needs at least one point")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("weights must be finite and nonnegative")
        if abs(w.sum() - 1.0) > WEIGHT_TOL:
            raise ValueError(f"weights sum to {w.sum()!r}, not 1")
        rows = list(self.kernel)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise SpaceError(f"kernel must be {n}x{n}")
        kern = np.empty((n, n), dtype=object)
        for i, row in enumerate(rows):
            for j, pt in enumerate(row):
                kern[i, j] = self.space.check(pt)
        labels = tuple(self.labels) if len(self.labels) else tuple(range(n))
        if len(labels) != n:
            raise ValueError("labels must have one entry per point")
        w.setflags(write=False)
        kern.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "kernel", kern)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_matrix(cls, space: MetricSpace, kernel: Any, weights: Any = None,
                    labels: Sequence[Any] = ()) -> "ZNetwork":
        """Build from a nested kernel; weights default to uniform."""
        rows = [list(r) for r in kernel]
        n = len(rows)
        if weights is None:
            weights = np.full(n, 1.0 / n)
        return cls(space, weights, rows, tuple(labels))

    @property
    def n(self) -> int:
        return self.weights.size

    @cached_property
    def stacked(self) -> Any:
        """Kernel entries stacked in row-major order."""
        return self.space.stack(list(self.kernel.ravel()))

    def kernel_values(self) -> list:
        return list(self.kernel.ravel())

    def distances_to(self, z0: Any) -> np.ndarray:
        """(n, n) matrix of d_Z(omega(i, i'), z0)."""
        anchor = self.space.stack([z0])
        other = self.space.take(anchor, np.zeros(self.n * self.n, dtype=int))
        return self.space.paired(self.stacked, other).reshape(self.n, self.n)

    def with_weights(self, weights: Any) -> "ZNetwork":
        return ZNetwork(self.space, weights, self.kernel, self.labels)

    # -- JSON -----------------------------------------------------------------
    def to_json(self) -> dict:
        sp = self.space
        return {
            "space": sp.to_json(),
            "labels": list(self.labels),
            "weights": [float(w) for w in self.weights],
            "kernel": [[sp.point_to_json(pt) for pt in row] for row in self.kernel],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ZNetwork":
        if not isinstance(obj, dict):
            raise SpaceError("network JSON must be an object")
        try:
            space = space_from_json(obj["space"])
            kernel = [[space.point_from_json(pt) for pt in row] for row in obj["kernel"]]
            weights = obj.get("weights")
            if weights is None:
                weights = np.full(len(kernel), 1.0 / len(kernel))
            return cls(space, np.asarray(weights, dtype=float), kernel, tuple(obj.get("labels", ())))
        except (KeyError, TypeError) as exc:
            raise SpaceError(f"malformed network JSON: {exc}") from exc


def one_point(space: MetricSpace, value: Any, label: Any = 0) -> ZNetwork:
    return ZNetwork(space, np.ones(1), [[value]], (label,))


def is_dirac(net: ZNetwork) -> bool:
    """True when a single point carries all the mass."""
    return int(np.count_nonzero(net.weights > 0)) == 1


def _lp_rows(dist: np.ndarray, mu: np.ndarray, p: float) -> np.ndarray:
    """Weighted L^p norm of each row of ``dist`` against ``mu``."""
    if p == math.inf:
        live = mu > 0
        return dist[:, live].max(axis=1)
    return ((dist ** p) @ mu) ** (1.0 / p)


def size(net: ZNetwork, p: float, z0: Any) -> float:
    """L^p(mu x mu) norm of d_Z(omega, z0)."""
    p = check_p(p)
    dist = net.distances_to(z0)
    mu = net.weights
    if p == math.inf:
        live = mu > 0
        return float(dist[np.ix_(live, live)].max())
    return float((mu @ (dist ** p) @ mu) ** (1.0 / p))


def eccentricity_out(net: ZNetwork, p: float, z0: Any) -> np.ndarray:
    return _lp_rows(net.distances_to(z0), net.weights, check_p(p))


def eccentricity_in(net: ZNetwork, p: float, z0: Any) -> np.ndarray:
    return _lp_rows(net.distances_to(z0).T, net.weights, check_p(p))


def blow_up(net: ZNetwork, multiplicities: Sequence[int]) -> ZNetwork:
    """Split point i into m_i equal-weight copies and pull the kernel back."""
    mult = np.asarray(multiplicities)
    if mult.shape != (net.n,) or not np.issubdtype(mult.dtype, np.integer) or np.any(mult < 1):
        raise ValueError("multiplicities must be positive integers, one per point")
    origin = np.repeat(np.arange(net.n), mult)
    weights = net.weights[origin] / mult[origin]
    kernel = net.kernel[np.ix_(origin, origin)]
    counters = np.concatenate([np.arange(m) for m in mult])
    labels = tuple(f"{net.labels[i]}.{c}" for i, c in zip(origin, counters))
    return ZNetwork(net.space, weights, kernel, labels)


def collapse_coupling(net: ZNetwork, multiplicities: Sequence[int]) -> Coupling:
    """Coupling between ``net`` and ``blow_up(net, m)`` induced by the collapse map."""
    mult = np.asarray(multiplicities, dtype=int)
    origin = np.repeat(np.arange(net.n), mult)
    blown_w = net.weights[origin] / mult[origin]
    plan = np.zeros((net.n, origin.size))
    plan[origin, np.arange(origin.size)] = blown_w
    return Coupling(plan, net.weights, blown_w)


def diagonal_coupling(mu: Any) -> Coupling:
    mu = np.asarray(mu, dtype=float)
    return Coupling(np.diag(mu), mu, mu)


# -- attributed graphs ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AttributedGraph:
    """Graph with node features in ``node_space``, edge weights phi and edge features.

    ``edge_features`` maps ordered pairs (i, j) to points of ``edge_space`` and is
    defined exactly where phi > 0.
    """

    node_space: MetricSpace
    edge_space: MetricSpace
    features: tuple
    phi: np.ndarray
    edge_features: dict = field(default_factory=dict)
    weights: np.ndarray | None = None

    def __post_init__(self):
        feats = tuple(self.node_space.check(f) for f in self.features)
        n = len(feats)
        phi = np.array(self.phi, dtype=float).reshape(n, n) if n else np.zeros((0, 0))
        if np.any(phi < 0) or not np.all(np.isfinite(phi)):
            raise ValueError("edge weights must be finite and nonnegative")
        edges = {(int(i), int(j)): self.edge_space.check(v) for (i, j), v in self.edge_features.items()}
        expected = {(int(i), int(j)) for i, j in zip(*np.nonzero(phi > 0))}
        if set(edges) != expected:
            raise ValueError("edge features must be given exactly on the edges (phi > 0)")
        w = np.full(n, 1.0 / n) if self.weights is None else np.array(self.weights, dtype=float).ravel()
        if w.size != n or np.any(w < 0) or abs(w.sum() - 1.0) > WEIGHT_TOL:
            raise ValueError("node weights must be a probability vector over the nodes")
        phi.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "edge_features", edges)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return len(self.features)

    def to_json(self) -> dict:
        return {
            "node_space": self.node_space.to_json(),
            "edge_space": self.edge_space.to_json(),
            "features": [self.node_space.point_to_json(f) for f in self.features],
            "phi": self.phi.tolist(),
            "edge_features": [{"from": i, "to": j, "value": self.edge_space.point_to_json(v)}
                              for (i, j), v in sorted(self.edge_features.items())],
            "weights": self.weights.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AttributedGraph":
        try:
            node_space = space_from_json(obj["node_space"])
            edge_space = space_from_json(obj["edge_space"])
            edges = {(int(e["from"]), int(e["to"])): edge_space.point_from_json(e["value"])
                     for e in obj.get("edge_features", [])}
            return cls(node_space, edge_space,
                       tuple(node_space.point_from_json(f) for f in obj["features"]),
                       np.asarray(obj["phi"], dtype=float), edges, obj.get("weights"))
        except (KeyError, TypeError) as exc:
            raise SpaceError(f"malformed attributed graph JSON: {exc}") from exc


@dataclass(frozen=True)
class FusedParams:
    alpha: float = 0.5
    beta: float = 0.5
    q: float = 1.0

    def __post_init__(self):
        a, b, q = float(self.alpha), float(self.beta), float(self.q)
        if not (0 <= a <= 1 and 0 <= b <= 1 and a + b <= 1 + 1e-12):
            raise ValueError("need alpha, beta in [0, 1] with alpha + beta <= 1")
        if not (1 <= q < math.inf):
            raise ValueError("q must lie in [1, inf)")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "q", q)

    def space(self, node_space: MetricSpace, edge_space: MetricSpace) -> WeightedProduct:
        node_weight = max(0.0, 1.0 - self.alpha - self.beta)
        return WeightedProduct(((node_space, node_weight), (edge_space, self.alpha), (Real(), self.beta)), self.q)


def from_attributed_graph_fused(g: AttributedGraph, params: FusedParams, fill: Any) -> ZNetwork:
    """Flatten into a network over node-space x edge-space x R with weighted l^q mixing.

    Entry (x, x') is (psi(x), edge feature or ``fill`` off the edge set, phi(x, x')).
    """
    fill = g.edge_space.check(fill)
    n = g.n
    kernel = [[(g.features[i], g.edge_features.get((i, j), fill), float(g.phi[i, j]))
               for j in range(n)] for i in range(n)]
    return ZNetwork(params.space(g.node_space, g.edge_space), g.weights, kernel)


def from_edge_attributed_cone(g: AttributedGraph, default_base: Any = None) -> ZNetwork:
    """Network over the cone of the edge space: [feature, phi] on edges, apex elsewhere.

    The apex base is the first edge feature in row-major order, or ``default_base``
    when the graph has no edges.
    """
    if g.edge_features:
        base = g.edge_features[min(g.edge_features)]
    elif default_base is not None:
        base = g.edge_space.check(default_base)
    else:
        raise ValueError("graph has no edges; supply default_base")
    apex = ConePoint(base, 0.0)
    n = g.n
    kernel = [[ConePoint(g.edge_features[(i, j)], float(g.phi[i, j])) if (i, j) in g.edge_features else apex
               for j in range(n)] for i in range(n)]
    return ZNetwork(Cone(g.edge_space), g.weights, kernel)


def same_space(a: ZNetwork, b: ZNetwork) -> MetricSpace:
    return require_same_space(a.space, b.space)
