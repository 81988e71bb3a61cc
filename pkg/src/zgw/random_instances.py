"""Random conforming spaces, networks and couplings for tests and experiments."""
from __future__ import annotations

import numpy as np

from .metric_spaces import (
    Cone, DampedSup, Discrete, Empirical1D, EuclideanLr, LambdaInf, LambdaQ, MetricSpace, Orthogonal, Real,
    SlackInterleaving, WeightedProduct,
)
from .network import ZNetwork
from .transport import Coupling, _emd

__all__ = ["variant_spaces", "geodesic_spaces", "random_network", "random_dirac", "random_coupling"]


def variant_spaces() -> dict[str, MetricSpace]:
    """One representative space per variant."""
    return {
        "Real": Real(),
        "LambdaInf": LambdaInf(),
        "LambdaQ": LambdaQ(2.5),
        "EuclideanLr": EuclideanLr(3, 1.5),
        "WeightedProduct": WeightedProduct(((Real(), 0.5), (EuclideanLr(2, 1.0), 1.0), (Discrete(("a", "b")), 0.3)),
                                           q=2.0),
        "Cone": Cone(Real()),
        "Orthogonal": Orthogonal(3),
        "Empirical1D": Empirical1D(2.0),
        "SlackInterleaving": SlackInterleaving(0.5, (0.0, 0.5, 1.5, 2.0)),
        "DampedSup": DampedSup((0.5, 1.0, 2.0, 4.0)),
        "Discrete": Discrete(("a", "b", "c")),
    }


def geodesic_spaces() -> dict[str, MetricSpace]:
    return {
        "Real": Real(),
        "EuclideanL1": EuclideanLr(2, 1.0),
        "EuclideanL2": EuclideanLr(3, 2.0),
        "EuclideanLinf": EuclideanLr(2, float("inf")),
        "Product": WeightedProduct(((Real(), 0.7), (EuclideanLr(2, 3.0), 0.4)), q=1.5),
    }


def random_network(space: MetricSpace, n: int, rng: np.random.Generator, uniform: bool = False) -> ZNetwork:
    kernel = [[space.random_point(rng) for _ in range(n)] for _ in range(n)]
    weights = np.full(n, 1.0 / n) if uniform else rng.dirichlet(np.ones(n))
    return ZNetwork(space, weights, kernel)


def random_dirac(space: MetricSpace, n: int, rng: np.random.Generator) -> ZNetwork:
    """n points, all mass on one of them."""
    kernel = [[space.random_point(rng) for _ in range(n)] for _ in range(n)]
    weights = np.zeros(n)
    weights[int(rng.integers(n))] = 1.0
    return ZNetwork(space, weights, kernel)


def random_coupling(mu: np.ndarray, nu: np.ndarray, rng: np.random.Generator) -> Coupling:
    """Random mixture of the product coupling and two random LP vertices."""
    mu, nu = np.asarray(mu, dtype=float), np.asarray(nu, dtype=float)
    n, m = mu.size, nu.size
    w = rng.dirichlet(np.ones(3))
    plan = (w[0] * np.outer(mu, nu) + w[1] * _emd(rng.random((n, m)), mu, nu)
            + w[2] * _emd(rng.random((n, m)), mu, nu))
    return Coupling(plan, mu, nu)
