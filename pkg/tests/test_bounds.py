import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from conftest import VARIANTS, seeds, variant_names

from zgw.bounds import bound_report, flb, slb, szlb, tlb
from zgw.gw import SolveConfig, gw_exact_dirac, solve_gw
from zgw.metric_spaces import Real
from zgw.network import one_point
from zgw.random_instances import random_dirac, random_network

P_VALUES = (1.0, 2.0, math.inf)


def test_identical_networks_zero(rng):
    for space in VARIANTS.values():
        X = random_network(space, 3, rng)
        for p in P_VALUES:
            rep = bound_report(X, X, p)
            assert (rep.tlb, rep.flb, rep.szlb, rep.slb) == (0.0, 0.0, 0.0, 0.0)
            assert not rep.ordering_violations


def test_one_point_values():
    a, b = one_point(Real(), 3.0), one_point(Real(), 1.0)
    for p in P_VALUES:
        assert tlb(a, b, p)[0] == 1.0
        assert flb(a, b, p, 0.0) == 1.0
        assert szlb(a, b, p, 0.0) == 1.0
        assert slb(a, b, p)[0] == 1.0


def test_direction_validation(rng):
    X = random_network(Real(), 2, rng)
    with pytest.raises(ValueError):
        tlb(X, X, 2, direction="sideways")


def test_slb_cap(rng):
    X = random_network(Real(), 3, rng)
    with pytest.raises(ValueError):
        slb(X, X, 2, cap=2)
    rep = bound_report(X, X, 2, include_slb=False)
    assert rep.slb is None and rep.best == 0.0


def test_default_basepoint(rng):
    X, Y = random_network(Real(), 3, rng), random_network(Real(), 2, rng)
    assert bound_report(X, Y, 2).z0 == X.kernel[0, 0]


@given(variant_names, seeds)
def test_dirac_instances_tight(name, seed):
    space = VARIANTS[name]
    rng = np.random.default_rng(seed)
    X, Y = random_dirac(space, 3, rng), random_dirac(space, 2, rng)
    for p in P_VALUES:
        exact = gw_exact_dirac(X, Y, p).value
        rep = bound_report(X, Y, p)
        assert rep.tlb == pytest.approx(exact, abs=1e-12)
        assert rep.slb == pytest.approx(exact, abs=1e-12)


@given(variant_names, seeds, st.sampled_from(P_VALUES), st.sampled_from(["out", "in"]))
def test_hierarchy(name, seed, p, direction):
    space = VARIANTS[name]
    rng = np.random.default_rng(seed)
    X = random_network(space, int(rng.integers(1, 5)), rng)
    Y = random_network(space, int(rng.integers(1, 5)), rng)
    z0 = space.random_point(rng)
    rep = bound_report(X, Y, p, z0, direction)
    assert not rep.ordering_violations
    assert rep.szlb <= rep.flb + 1e-9 <= rep.tlb + 2e-9
    value = solve_gw(X, Y, SolveConfig(p=p, restarts=2)).value
    assert rep.tlb <= value + 1e-9
    assert rep.slb <= value + 1e-9


@given(seeds)
def test_both_directions_below_solver(seed):
    rng = np.random.default_rng(seed)
    X, Y = random_network(Real(), 3, rng), random_network(Real(), 3, rng)
    value = solve_gw(X, Y, SolveConfig(p=1, restarts=2)).value
    for direction in ("out", "in"):
        assert tlb(X, Y, 1, direction)[0] <= value + 1e-9


def test_one_d_flb_formula():
    a, b = one_point(Real(), -2.0), one_point(Real(), 4.0)
    assert flb(a, b, 2, 0.0) == 1.0
