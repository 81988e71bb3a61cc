"""Polynomial-time lower bounds on the Z-GW distance.

    tlb   transport of row (or column) pushforwards, then OT on that cost
    flb   1-d Wasserstein distance between eccentricity distributions
    szlb  difference of sizes
    slb   Wasserstein distance between the full kernel pushforwards

All four are halved so they compare directly with GW.  For every pair of
networks szlb <= flb <= tlb <= GW and slb <= GW.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .gw import _check_pair, distance_tensor
from .network import ZNetwork, eccentricity_in, eccentricity_out, size
from .transport import Coupling, check_p, solve_ot_1d, wasserstein_from_cost

__all__ = ["SLB_SIZE_CAP", "ORDER_TOL", "BoundReport", "tlb", "flb", "szlb", "slb", "bound_report"]

SLB_SIZE_CAP = 64
ORDER_TOL = 1e-9
DIRECTIONS = ("out", "in")


def _direction(direction: str) -> str:
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    return direction


def tlb(netX: ZNetwork, netY: ZNetwork, p: float, direction: str = "out") -> tuple[float, Coupling]:
    """Half the optimal transport value for the cost C(x, y) = W_p(row pushforwards)."""
    p = check_p(p)
    _check_pair(netX, netY, cap=max(netX.n, netY.n))
    T = distance_tensor(netX, netY)
    if _direction(direction) == "in":
        T = T.transpose(1, 0, 3, 2)
    mu, nu = netX.weights, netY.weights
    C = np.empty((netX.n, netY.n))
    for x in range(netX.n):
        for y in range(netY.n):
            C[x, y] = wasserstein_from_cost(T[x, :, y, :], mu, nu, p)[1]
    coupling, value = wasserstein_from_cost(C, mu, nu, p)
    return value / 2.0, coupling


def flb(netX: ZNetwork, netY: ZNetwork, p: float, z0: Any, direction: str = "out") -> float:
    """Half the 1-d W_p between the eccentricity distributions about z0."""
    p = check_p(p)
    _check_pair(netX, netY, cap=max(netX.n, netY.n))
    ecc = eccentricity_out if _direction(direction) == "out" else eccentricity_in
    return solve_ot_1d(ecc(netX, p, z0), netX.weights, ecc(netY, p, z0), netY.weights, p) / 2.0


def szlb(netX: ZNetwork, netY: ZNetwork, p: float, z0: Any) -> float:
    p = check_p(p)
    _check_pair(netX, netY, cap=max(netX.n, netY.n))
    return abs(size(netX, p, z0) - size(netY, p, z0)) / 2.0


def slb(netX: ZNetwork, netY: ZNetwork, p: float, cap: int = SLB_SIZE_CAP) -> tuple[float, Coupling]:
    """Half W_p between the kernel pushforwards of mu x mu and nu x nu.

    The coupling is over flattened kernel entries (n^2 x m^2).
    """
    p = check_p(p)
    _check_pair(netX, netY, cap=max(netX.n, netY.n))
    if netX.n > cap or netY.n > cap:
        raise ValueError(f"second lower bound is limited to networks of size <= {cap}")
    n, m = netX.n, netY.n
    cost = distance_tensor(netX, netY).reshape(n * n, m * m)
    a = np.outer(netX.weights, netX.weights).ravel()
    b = np.outer(netY.weights, netY.weights).ravel()
    coupling, value = wasserstein_from_cost(cost, a, b, p)
    return value / 2.0, coupling


@dataclass
class BoundReport:
    tlb: float
    flb: float
    szlb: float
    slb: float | None
    z0: Any
    p: float
    direction: str = "out"
    tlb_coupling: Coupling | None = None
    slb_coupling: Coupling | None = None
    ordering_violations: list = field(default_factory=list)

    @property
    def best(self) -> float:
        """Largest of the computed bounds."""
        return max(v for v in (self.tlb, self.flb, self.szlb, self.slb) if v is not None)


def bound_report(netX: ZNetwork, netY: ZNetwork, p: float, z0: Any = None, direction: str = "out",
                 include_slb: bool = True) -> BoundReport:
    """All four bounds; z0 defaults to the first kernel entry of netX.

    The second bound is skipped (None) when either network exceeds its size cap.
    """
    p = check_p(p)
    if z0 is None:
        z0 = netX.kernel[0, 0]
    z0 = netX.space.check(z0)
    t_val, t_cpl = tlb(netX, netY, p, direction)
    f_val = flb(netX, netY, p, z0, direction)
    s_val = szlb(netX, netY, p, z0)
    sl_val, sl_cpl = None, None
    if include_slb and max(netX.n, netY.n) <= SLB_SIZE_CAP:
        sl_val, sl_cpl = slb(netX, netY, p)
    violations = []
    if t_val < f_val - ORDER_TOL:
        violations.append(f"tlb {t_val!r} < flb {f_val!r}")
    if f_val < s_val - ORDER_TOL:
        violations.append(f"flb {f_val!r} < szlb {s_val!r}")
    return BoundReport(t_val, f_val, s_val, sl_val, z0, p, direction, t_cpl, sl_cpl, violations)
