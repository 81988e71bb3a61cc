"""Target metric spaces (Z, d_Z) that network kernels take values in.

Every space is a frozen dataclass, so two descriptors are compatible exactly when
they compare equal.  Points are plain values:

    Real, LambdaInf, LambdaQ      float
    EuclideanLr, DampedSup,
    SlackInterleaving             1-d float ndarray
    Orthogonal                    (d, d) float ndarray
    Cone                          ConePoint(base, radius)
    WeightedProduct               tuple with one component per factor
    Empirical1D                   Empirical(support, weights)
    Discrete                      str or int label

Distances are evaluated in batches.  ``stack`` packs a sequence of points into an
array representation, ``take`` re-indexes a stack and ``paired`` returns the
elementwise distances between two stacks of equal length.  ``pairwise`` and
``distance`` are thin wrappers over these three.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

__all__ = [
    "SpaceError", "IncompatibleSpaces", "NonGeodesicSpace",
    "ConePoint", "Empirical",
    "MetricSpace", "Real", "LambdaInf", "LambdaQ", "EuclideanLr", "WeightedProduct",
    "Cone", "Orthogonal", "Empirical1D", "SlackInterleaving", "DampedSup", "Discrete",
    "space_from_json", "number_to_json", "number_from_json",
    "distance", "cone_distance", "slack_interleaving_distance", "damped_sup_distance",
    "geodesic_point", "hausdorff_distance", "require_same_space",
]

WEIGHT_SUM_TOL = 1e-12
ORTHOGONAL_TOL = 1e-9
# pairs evaluated per block in ``pairwise``
_BLOCK = 1 << 18


class SpaceError(ValueError):
    """A point does not conform to its space, or a space has bad parameters."""


class IncompatibleSpaces(ValueError):
    """Two objects live over structurally different target spaces."""


class NonGeodesicSpace(ValueError):
    """Geodesics are not available for this space."""


def number_to_json(x: float) -> float | str:
    x = float(x)
    if math.isfinite(x):
        return x
    if math.isnan(x):
        return "nan"
    return "inf" if x > 0 else "-inf"


def number_from_json(x: Any) -> float:
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf", "infinity"):
            return math.inf
        if s in ("-inf", "-infinity"):
            return -math.inf
    try:
        return float(x)
    except (TypeError, ValueError) as exc:
        raise SpaceError(f"not a number: {x!r}") from exc


def _finite(x: Any, what: str = "value") -> float:
    try:
        v = float(x)
    except (TypeError, ValueError) as exc:
        raise SpaceError(f"{what} must be a real number, got {x!r}") from exc
    if not math.isfinite(v):
        raise SpaceError(f"{what} must be finite, got {v}")
    return v


def _frozen_array(x: Any, shape: tuple[int, ...] | None = None, what: str = "point") -> np.ndarray:
    try:
        arr = np.array(x, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SpaceError(f"{what} is not a real array: {x!r}") from exc
    if shape is not None and arr.shape != shape:
        raise SpaceError(f"{what} has shape {arr.shape}, expected {shape}")
    if not np.all(np.isfinite(arr)):
        raise SpaceError(f"{what} has non-finite entries")
    arr.setflags(write=False)
    return arr


def _grid(values: Sequence[float], positive: bool = False) -> tuple[float, ...]:
    g = tuple(_finite(v, "grid value") for v in values)
    if not g:
        raise SpaceError("sample grid is empty")
    if any(b <= a for a, b in zip(g, g[1:])):
        raise SpaceError("sample grid must be strictly increasing")
    if positive and g[0] <= 0:
        raise SpaceError("sample grid must be positive")
    return g


@dataclass(frozen=True)
class ConePoint:
    """Class [base, radius] in the cone over a base space; radius 0 is the apex."""

    base: Any
    radius: float


class Empirical:
    """Finitely supported probability measure on the real line.

    Support is stored sorted, tied atoms are merged and zero-weight atoms dropped.
    """

    __slots__ = ("support", "weights")

    def __init__(self, support: Sequence[float], weights: Sequence[float] | None = None):
        x = np.asarray(support, dtype=float).ravel()
        if x.size == 0:
            raise SpaceError("empirical measure needs at least one atom")
        w = np.full(x.size, 1.0 / x.size) if weights is None else np.asarray(weights, dtype=float).ravel()
        if w.shape != x.shape:
            raise SpaceError("support and weights differ in length")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(w))):
            raise SpaceError("empirical measure has non-finite entries")
        if np.any(w < 0):
            raise SpaceError("negative weight in empirical measure")
        if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise SpaceError(f"empirical weights sum to {w.sum()!r}, not 1")
        keep = w > 0
        x, w = x[keep], w[keep]
        uniq, inv = np.unique(x, return_inverse=True)
        merged = np.bincount(inv, weights=w, minlength=uniq.size)
        # rounding-level sums are left alone so reconstruction from stored weights is exact
        if abs(merged.sum() - 1.0) > 8 * np.finfo(float).eps * merged.size:
            merged = merged / merged.sum()
        uniq.setflags(write=False)
        merged.setflags(write=False)
        self.support = uniq
        self.weights = merged

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Empirical):
            return NotImplemented
        return np.array_equal(self.support, other.support) and np.array_equal(self.weights, other.weights)

    def __hash__(self) -> int:
        return hash((self.support.tobytes(), self.weights.tobytes()))

    def __repr__(self) -> str:
        return f"Empirical(support={self.support.tolist()}, weights={self.weights.tolist()})"


class MetricSpace:
    """Base class.  Subclasses override ``check``, ``stack``/``take``/``paired`` and JSON."""

    kind: str = ""
    geodesic_space: bool = False

    # -- points ---------------------------------------------------------------
    def check(self, point: Any) -> Any:
        return point

    def stack(self, points: Sequence[Any]) -> Any:
        out = np.empty(len(points), dtype=object)
        for i, p in enumerate(points):
            out[i] = self.check(p)
        return out

    def take(self, stacked: Any, idx: np.ndarray) -> Any:
        return stacked[idx]

    def paired(self, a: Any, b: Any) -> np.ndarray:
        raise NotImplementedError

    # -- distances ------------------------------------------------------------
    def distance(self, a: Any, b: Any) -> float:
        return float(self.paired(self.stack([a]), self.stack([b]))[0])

    def pairwise(self, A: Sequence[Any], B: Sequence[Any]) -> np.ndarray:
        """Distance matrix between two point sequences."""
        na, nb = len(A), len(B)
        out = np.empty((na, nb))
        if na == 0 or nb == 0:
            return out
        sa, sb = self.stack(A), self.stack(B)
        rows = max(1, _BLOCK // nb)
        jb = np.arange(nb)
        for start in range(0, na, rows):
            ia = np.arange(start, min(na, start + rows))
            ii = np.repeat(ia, nb)
            jj = np.tile(jb, ia.size)
            out[ia] = self.paired(self.take(sa, ii), self.take(sb, jj)).reshape(ia.size, nb)
        return out

    def geodesic(self, a: Any, b: Any, t: float) -> Any:
        raise NonGeodesicSpace(f"{self.kind} spaces do not provide geodesics")

    def random_point(self, rng: np.random.Generator) -> Any:
        raise NotImplementedError

    # -- serialization --------------------------------------------------------
    def to_json(self) -> dict:
        return {"kind": self.kind}

    def point_to_json(self, point: Any) -> Any:
        return number_to_json(point)

    def point_from_json(self, obj: Any) -> Any:
        return self.check(obj)


class _ScalarSpace(MetricSpace):
    nonnegative = False

    def check(self, point: Any) -> float:
        v = _finite(point)
        if self.nonnegative and v < 0:
            raise SpaceError(f"{self.kind} points must be nonnegative, got {v}")
        return v

    def stack(self, points):
        return np.array([self.check(p) for p in points], dtype=float)

    def point_from_json(self, obj):
        return self.check(number_from_json(obj))


@dataclass(frozen=True)
class Real(_ScalarSpace):
    """The real line with |a - b|."""

    kind = "Real"
    geodesic_space = True

    def paired(self, a, b):
        return np.abs(a - b)

    def geodesic(self, a, b, t):
        a, b = self.check(a), self.check(b)
        return a + t * (b - a)

    def random_point(self, rng):
        if rng.random() < 0.3:
            return float(rng.integers(-3, 4))
        return float(rng.normal(scale=2.0))


@dataclass(frozen=True)
class LambdaInf(_ScalarSpace):
    """Nonnegative reals with the ultrametric max{a, b} for a != b, 0 otherwise."""

    kind = "LambdaInf"
    nonnegative = True

    def paired(self, a, b):
        return np.where(a == b, 0.0, np.maximum(a, b))

    def random_point(self, rng):
        if rng.random() < 0.5:
            return float(rng.integers(0, 4))
        return float(rng.uniform(0, 4))


@dataclass(frozen=True)
class LambdaQ(_ScalarSpace):
    """Nonnegative reals with the snowflake metric |a^q - b^q|^(1/q)."""

    q: float = 2.0
    kind = "LambdaQ"
    nonnegative = True

    def __post_init__(self):
        q = _finite(self.q, "q")
        if q < 1:
            raise SpaceError("LambdaQ needs q >= 1")
        object.__setattr__(self, "q", q)

    def paired(self, a, b):
        return np.abs(a ** self.q - b ** self.q) ** (1.0 / self.q)

    def random_point(self, rng):
        return float(rng.uniform(0, 3))

    def to_json(self):
        return {"kind": self.kind, "q": self.q}


@dataclass(frozen=True)
class EuclideanLr(MetricSpace):
    """R^n with the l^r distance, r in [1, inf]."""

    n: int = 1
    r: float = 2.0
    kind = "EuclideanLr"
    geodesic_space = True

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise SpaceError("EuclideanLr needs dimension n >= 1")
        r = float(self.r)
        if not r >= 1:
            raise SpaceError("EuclideanLr needs r in [1, inf]")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "r", r)

    def check(self, point):
        return _frozen_array(point, (self.n,), "vector")

    def stack(self, points):
        out = np.empty((len(points), self.n))
        for i, p in enumerate(points):
            out[i] = self.check(p)
        return out

    def paired(self, a, b):
        diff = np.abs(a - b)
        r = self.r
        if r == math.inf:
            return diff.max(axis=1)
        if r == 1:
            return diff.sum(axis=1)
        if r == 2:
            return np.sqrt((diff * diff).sum(axis=1))
        return (diff ** r).sum(axis=1) ** (1.0 / r)

    def geodesic(self, a, b, t):
        # straight segment; for r in {1, inf} this fixes one of many geodesics
        a, b = self.check(a), self.check(b)
        return _frozen_array(a + t * (b - a))

    def random_point(self, rng):
        return _frozen_array(rng.normal(size=self.n))

    def to_json(self):
        return {"kind": self.kind, "n": self.n, "r": number_to_json(self.r)}

    def point_to_json(self, point):
        return [float(v) for v in point]


@dataclass(frozen=True)
class Orthogonal(MetricSpace):
    """O(d) with the Frobenius distance inherited from R^(d x d)."""

    d: int = 2
    kind = "Orthogonal"

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise SpaceError("Orthogonal needs d >= 1")
        object.__setattr__(self, "d", int(self.d))

    def check(self, point):
        m = _frozen_array(point, (self.d, self.d), "matrix")
        if np.abs(m.T @ m - np.eye(self.d)).max() > ORTHOGONAL_TOL:
            raise SpaceError("matrix is not orthogonal")
        return m

    def stack(self, points):
        out = np.empty((len(points), self.d, self.d))
        for i, p in enumerate(points):
            out[i] = self.check(p)
        return out

    def paired(self, a, b):
        diff = a - b
        return np.sqrt((diff * diff).sum(axis=(1, 2)))

    def random_point(self, rng):
        q, r = np.linalg.qr(rng.normal(size=(self.d, self.d)))
        q = q * np.sign(np.diag(r))
        if rng.random() < 0.5:
            q[:, 0] = -q[:, 0]
        return self.check(q)

    def to_json(self):
        return {"kind": self.kind, "d": self.d}

    def point_to_json(self, point):
        return [[float(v) for v in row] for row in point]


@dataclass(frozen=True)
class Discrete(MetricSpace):
    """Finite label alphabet with the discrete 0/1 metric."""

    alphabet: tuple = ("0", "1")
    kind = "Discrete"

    def __post_init__(self):
        alpha = tuple(self.alphabet)
        if not alpha:
            raise SpaceError("Discrete needs a nonempty alphabet")
        if len(set(alpha)) != len(alpha):
            raise SpaceError("Discrete alphabet has duplicates")
        object.__setattr__(self, "alphabet", alpha)

    def check(self, point):
        if isinstance(point, (bool, np.bool_)) or point not in self.alphabet:
            raise SpaceError(f"label {point!r} not in alphabet {self.alphabet}")
        return point

    def paired(self, a, b):
        return np.array([x != y for x, y in zip(a, b)], dtype=float)

    def random_point(self, rng):
        return self.alphabet[int(rng.integers(len(self.alphabet)))]

    def to_json(self):
        return {"kind": self.kind, "alphabet": list(self.alphabet)}

    def point_to_json(self, point):
        return point


@dataclass(frozen=True)
class Empirical1D(MetricSpace):
    """Finitely supported probability measures on R with the Wasserstein-p distance."""

    p: float = 1.0
    kind = "Empirical1D"

    def __post_init__(self):
        p = _finite(self.p, "Wasserstein order")
        if p < 1:
            raise SpaceError("Empirical1D needs p >= 1")
        object.__setattr__(self, "p", p)

    def check(self, point):
        if isinstance(point, Empirical):
            return point
        if isinstance(point, dict):
            return Empirical(point.get("support", ()), point.get("weights"))
        if isinstance(point, (tuple, list)) and len(point) == 2:
            return Empirical(point[0], point[1])
        raise SpaceError(f"not an empirical measure: {point!r}")

    def stack(self, points):
        pts = [self.check(p) for p in points]
        width = max((len(p.support) for p in pts), default=1)
        levels = np.ones((len(pts), width))
        atoms = np.empty((len(pts), width))
        for i, pt in enumerate(pts):
            k = len(pt.support)
            c = np.cumsum(pt.weights)
            c[-1] = 1.0
            levels[i, :k] = c
            atoms[i, :k] = pt.support
            atoms[i, k:] = pt.support[-1]
        return levels, atoms

    def take(self, stacked, idx):
        return stacked[0][idx], stacked[1][idx]

    def paired(self, a, b):
        # quantile functions are step functions; integrate |Qa - Qb|^p over the merged steps
        lev_a, at_a = a
        lev_b, at_b = b
        cuts = np.sort(np.concatenate([lev_a, lev_b], axis=1), axis=1)
        lower = np.concatenate([np.zeros((cuts.shape[0], 1)), cuts[:, :-1]], axis=1)
        width = cuts - lower
        mid = 0.5 * (cuts + lower)
        ia = np.minimum((lev_a[:, None, :] < mid[:, :, None]).sum(axis=2), lev_a.shape[1] - 1)
        ib = np.minimum((lev_b[:, None, :] < mid[:, :, None]).sum(axis=2), lev_b.shape[1] - 1)
        qa = np.take_along_axis(at_a, ia, axis=1)
        qb = np.take_along_axis(at_b, ib, axis=1)
        # sequential sum: padded zero-width steps must not change the rounding
        cost = np.cumsum(width * np.abs(qa - qb) ** self.p, axis=1)[:, -1]
        return np.maximum(cost, 0.0) ** (1.0 / self.p)

    def random_point(self, rng):
        k = int(rng.integers(1, 5))
        return Empirical(rng.uniform(0, 3, size=k), rng.dirichlet(np.ones(k)))

    def to_json(self):
        return {"kind": self.kind, "p": self.p}

    def point_to_json(self, point):
        return {"support": point.support.tolist(), "weights": point.weights.tolist()}


class _SampledSpace(MetricSpace):
    grid: tuple = ()
    nonnegative = False

    def check(self, point):
        f = _frozen_array(point, (len(self.grid),), "sampled function")
        if self.nonnegative and np.any(f < 0):
            raise SpaceError(f"{self.kind} functions must be nonnegative")
        return f

    def stack(self, points):
        out = np.empty((len(points), len(self.grid)))
        for i, p in enumerate(points):
            out[i] = self.check(p)
        return out

    def point_to_json(self, point):
        return [float(v) for v in point]


@dataclass(frozen=True)
class SlackInterleaving(_SampledSpace):
    """Nonnegative functions on a shared time grid with the slack-interleaving distance.

    The distance is the least eps such that for every grid time t and both orders
    (i, j), some grid time s with |s - t| <= eps has f_i(s) <= f_j(t) + slack * eps.
    Each single constraint is monotone in eps, so the infimum is the maximum over
    constraints of the least eps satisfying it, which is computed exactly.  With
    slack 0 the distance may be infinite.
    """

    slack: float = 1.0
    grid: tuple = (0.0, 1.0)
    kind = "SlackInterleaving"
    nonnegative = True

    def __post_init__(self):
        lam = _finite(self.slack, "slack")
        if lam < 0:
            raise SpaceError("slack must be nonnegative")
        object.__setattr__(self, "slack", lam)
        object.__setattr__(self, "grid", _grid(self.grid))

    def paired(self, a, b):
        g = np.asarray(self.grid)
        gap = np.abs(g[:, None] - g[None, :])  # (s, t)
        k = len(g)
        out = np.zeros(a.shape[0])
        rows = max(1, (1 << 22) // (k * k))
        for start in range(0, a.shape[0], rows):
            sl = slice(start, start + rows)
            eps = np.zeros(a[sl].shape[0])
            for f, h in ((a[sl], b[sl]), (b[sl], a[sl])):
                excess = f[:, :, None] - h[:, None, :]  # f(s) - h(t)
                if self.slack > 0:
                    need = np.maximum(gap[None], np.maximum(excess, 0.0) / self.slack)
                else:
                    need = np.where(excess <= 0, gap[None], np.inf)
                eps = np.maximum(eps, need.min(axis=1).max(axis=1))
            out[sl] = eps
        return out

    def random_point(self, rng):
        return _frozen_array(rng.uniform(0, 2, size=len(self.grid)))

    def to_json(self):
        return {"kind": self.kind, "slack": self.slack, "grid": list(self.grid)}


@dataclass(frozen=True)
class DampedSup(_SampledSpace):
    """Functions on a positive time grid with max_k exp(-2/t_k) |f1(t_k) - f2(t_k)|."""

    grid: tuple = (1.0,)
    kind = "DampedSup"

    def __post_init__(self):
        object.__setattr__(self, "grid", _grid(self.grid, positive=True))

    def paired(self, a, b):
        damp = np.exp(-2.0 / np.asarray(self.grid))
        return (damp[None, :] * np.abs(a - b)).max(axis=1)

    def random_point(self, rng):
        return _frozen_array(rng.uniform(0.1, 3, size=len(self.grid)))

    def to_json(self):
        return {"kind": self.kind, "grid": list(self.grid)}


@dataclass(frozen=True)
class Cone(MetricSpace):
    """Euclidean cone over a base space; all radius-0 points form the apex."""

    base: MetricSpace = Real()
    kind = "Cone"

    def __post_init__(self):
        if not isinstance(self.base, MetricSpace):
            raise SpaceError("Cone base must be a metric space")

    def check(self, point):
        if isinstance(point, ConePoint):
            base, radius = point.base, point.radius
        elif isinstance(point, dict):
            base, radius = point.get("base"), point.get("radius")
        elif isinstance(point, (tuple, list)) and len(point) == 2:
            base, radius = point
        else:
            raise SpaceError(f"not a cone point: {point!r}")
        r = _finite(radius, "cone radius")
        if r < 0:
            raise SpaceError("cone radius must be nonnegative")
        return ConePoint(self.base.check(base), r)

    def stack(self, points):
        pts = [self.check(p) for p in points]
        return self.base.stack([p.base for p in pts]), np.array([p.radius for p in pts], dtype=float)

    def take(self, stacked, idx):
        return self.base.take(stacked[0], idx), stacked[1][idx]

    def paired(self, a, b):
        angle = np.minimum(self.base.paired(a[0], b[0]), math.pi)
        r, s = a[1], b[1]
        sq = r * r + s * s - 2.0 * r * s * np.cos(angle)
        return np.sqrt(np.maximum(sq, 0.0))

    def random_point(self, rng):
        radius = 0.0 if rng.random() < 0.2 else float(rng.exponential())
        return ConePoint(self.base.random_point(rng), radius)

    def to_json(self):
        return {"kind": self.kind, "base": self.base.to_json()}

    def point_to_json(self, point):
        return {"base": self.base.point_to_json(point.base), "radius": float(point.radius)}

    def point_from_json(self, obj):
        if not isinstance(obj, dict):
            raise SpaceError(f"cone point must be an object, got {obj!r}")
        return self.check(ConePoint(self.base.point_from_json(obj.get("base")),
                                    number_from_json(obj.get("radius"))))


@dataclass(frozen=True)
class WeightedProduct(MetricSpace):
    """Product of spaces with the weighted l^q combination (sum_k w_k d_k^q)^(1/q)."""

    factors: tuple = ()
    q: float = 1.0
    kind = "WeightedProduct"

    def __post_init__(self):
        facs = []
        for item in self.factors:
            space, weight = item
            if not isinstance(space, MetricSpace):
                raise SpaceError("product factor must be a metric space")
            w = _finite(weight, "product weight")
            if w < 0:
                raise SpaceError("product weights must be nonnegative")
            facs.append((space, w))
        if not facs:
            raise SpaceError("WeightedProduct needs at least one factor")
        q = _finite(self.q, "q")
        if q < 1:
            raise SpaceError("WeightedProduct needs q in [1, inf)")
        object.__setattr__(self, "factors", tuple(facs))
        object.__setattr__(self, "q", q)

    @property
    def geodesic_space(self) -> bool:
        return all(s.geodesic_space for s, _ in self.factors)

    def check(self, point):
        if not isinstance(point, (tuple, list)) or len(point) != len(self.factors):
            raise SpaceError(f"product point must have {len(self.factors)} components")
        return tuple(s.check(c) for (s, _), c in zip(self.factors, point))

    def stack(self, points):
        pts = [self.check(p) for p in points]
        return tuple(s.stack([p[k] for p in pts]) for k, (s, _) in enumerate(self.factors))

    def take(self, stacked, idx):
        return tuple(s.take(part, idx) for (s, _), part in zip(self.factors, stacked))

    def paired(self, a, b):
        total = 0.0
        for (space, w), pa, pb in zip(self.factors, a, b):
            total = total + w * space.paired(pa, pb) ** self.q
        return np.asarray(total, dtype=float) ** (1.0 / self.q)

    def geodesic(self, a, b, t):
        if not self.geodesic_space:
            raise NonGeodesicSpace("product has a non-geodesic factor")
        a, b = self.check(a), self.check(b)
        return tuple(s.geodesic(x, y, t) for (s, _), x, y in zip(self.factors, a, b))

    def random_point(self, rng):
        return tuple(s.random_point(rng) for s, _ in self.factors)

    def to_json(self):
        return {"kind": self.kind, "q": self.q,
                "factors": [{"space": s.to_json(), "weight": w} for s, w in self.factors]}

    def point_to_json(self, point):
        return [s.point_to_json(c) for (s, _), c in zip(self.factors, point)]

    def point_from_json(self, obj):
        if not isinstance(obj, list) or len(obj) != len(self.factors):
            raise SpaceError("product point must be a list with one entry per factor")
        return tuple(s.point_from_json(c) for (s, _), c in zip(self.factors, obj))


def space_from_json(obj: Any) -> MetricSpace:
    """Build a space from its JSON descriptor ``{"kind": ..., params}``."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SpaceError(f"space descriptor must be an object with a 'kind': {obj!r}")
    kind = obj["kind"]
    try:
        if kind == "Real":
            return Real()
        if kind == "LambdaInf":
            return LambdaInf()
        if kind == "LambdaQ":
            return LambdaQ(q=number_from_json(obj["q"]))
        if kind == "EuclideanLr":
            return EuclideanLr(n=int(obj["n"]), r=number_from_json(obj.get("r", 2.0)))
        if kind == "Orthogonal":
            return Orthogonal(d=int(obj["d"]))
        if kind == "Discrete":
            return Discrete(alphabet=tuple(obj["alphabet"]))
        if kind == "Empirical1D":
            return Empirical1D(p=number_from_json(obj.get("p", 1.0)))
        if kind == "SlackInterleaving":
            return SlackInterleaving(slack=number_from_json(obj["slack"]), grid=tuple(obj["grid"]))
        if kind == "DampedSup":
            return DampedSup(grid=tuple(obj["grid"]))
        if kind == "Cone":
            return Cone(base=space_from_json(obj["base"]))
        if kind == "WeightedProduct":
            factors = tuple((space_from_json(f["space"]), number_from_json(f["weight"])) for f in obj["factors"])
            return WeightedProduct(factors=factors, q=number_from_json(obj.get("q", 1.0)))
    except (KeyError, TypeError) as exc:
        raise SpaceError(f"malformed {kind} descriptor: {obj!r}") from exc
    raise SpaceError(f"unknown space kind {kind!r}")


def require_same_space(a: MetricSpace, b: MetricSpace) -> MetricSpace:
    if a != b:
        raise IncompatibleSpaces(f"spaces differ: {a!r} vs {b!r}")
    return a


# -- functional interface ------------------------------------------------------

def distance(space: MetricSpace, a: Any, b: Any) -> float:
    return space.distance(a, b)


def cone_distance(base: MetricSpace, a: Any, b: Any) -> float:
    return Cone(base).distance(a, b)


def slack_interleaving_distance(space: SlackInterleaving, f1: Any, f2: Any) -> float:
    if not isinstance(space, SlackInterleaving):
        raise IncompatibleSpaces("expected a SlackInterleaving space")
    return space.distance(f1, f2)


def damped_sup_distance(space: DampedSup, f1: Any, f2: Any) -> float:
    if not isinstance(space, DampedSup):
        raise IncompatibleSpaces("expected a DampedSup space")
    return space.distance(f1, f2)


def geodesic_point(space: MetricSpace, a: Any, b: Any, t: float) -> Any:
    """Point at fraction t along the fixed geodesic from a to b."""
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    if not space.geodesic_space:
        raise NonGeodesicSpace(f"{space.kind} spaces do not provide geodesics")
    return space.geodesic(a, b, t)


def hausdorff_distance(space: MetricSpace, A: Sequence[Any], B: Sequence[Any]) -> float:
    if len(A) == 0 or len(B) == 0:
        raise ValueError("Hausdorff distance needs nonempty sets")
    d = space.pairwise(A, B)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))
