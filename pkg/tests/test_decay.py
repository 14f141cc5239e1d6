import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from markovia.errors import ConfigError, DomainError
from markovia.gaussian import (
    ARCovariance,
    DecayEnvelope,
    IndependentCovariance,
    LatticeKernel,
    g_recursion,
    lattice_g_moments,
    lattice_moment,
    power_geometric_sum,
    validate_envelope,
)


@given(st.floats(0.0, 6.0), st.floats(0.05, 0.8), st.integers(0, 20))
def test_power_geometric_sum_bounds_the_series(q, r, t0):
    direct = math.fsum((1 + t) ** q * r**t for t in range(t0, t0 + 3000))
    bound = power_geometric_sum(q, r, t0)
    assert bound >= direct * (1 - 1e-12)
    assert bound <= direct * (1 + 1e-9) + 1e-300


def test_power_geometric_sum_edges():
    assert power_geometric_sum(3.0, 1.0) == math.inf
    assert power_geometric_sum(3.0, 0.0) == 1.0
    assert power_geometric_sum(3.0, 0.0, 1) == 0.0
    assert power_geometric_sum(0.0, 0.5) == pytest.approx(2.0)
    with pytest.raises(DomainError):
        power_geometric_sum(1.0, -0.5)


def test_ar_envelope_constants():
    env = DecayEnvelope.ar(0.4)
    assert env.c == pytest.approx(2.5)
    assert env.rho == pytest.approx(0.6)
    env = DecayEnvelope.ar(0.1, order=3)
    assert env.rho == pytest.approx(0.9 ** (1 / 3))
    assert env.c == pytest.approx(1 / (1 - 0.9 ** (2 / 3)))


def test_ar_envelope_dominates_higher_order_models():
    m = ARCovariance.stationary([0.4, -0.3], 0.2)
    validate_envelope(m, DecayEnvelope.ar(0.2, order=2))


def test_envelope_violation_is_reported():
    m = ARCovariance.stationary([0.5], 0.4)
    with pytest.raises(DomainError, match="envelope violated"):
        g_recursion(m, DecayEnvelope("geometric", c=0.5, rho=0.5), K=20)


def test_envelope_config():
    env = DecayEnvelope.from_config({"kind": "gaussian", "c": 1.0, "scale": 2.0})
    assert env(0) == pytest.approx(1.0)
    assert env(2) == pytest.approx(math.exp(-2.0))
    a, rho = env.majorant()
    assert all(env(t) <= a * rho**t for t in range(30))
    with pytest.raises(ConfigError):
        DecayEnvelope.from_config({"kind": "cauchy"})
    with pytest.raises(ConfigError):
        DecayEnvelope.from_config({"kind": "geometric", "c": -1.0})


def test_ar1_recursion_is_finite_and_monotone():
    m = ARCovariance.stationary([0.5], 0.4)
    table = g_recursion(m, DecayEnvelope("geometric", c=2.0, rho=0.5), K=200, eps=0.5)
    assert len(table.levels) == 5
    assert table.levels[0].shape == (200, 200)
    assert table.statuses == ["finite"] * 5
    assert table.finite
    assert table.monotone()
    assert [r["level"] for r in table.rows()] == [0, 1, 2, 3, 4]


def test_diagonal_envelope_has_closed_form_levels():
    table = g_recursion(IndependentCovariance(), DecayEnvelope("diagonal", c=1.0), K=10)
    for level, value in enumerate([1.0, 2.0, 6.0, 42.0, 1806.0]):
        np.testing.assert_allclose(table.levels[level], value * np.eye(10))
        np.testing.assert_allclose(table.weighted[level], value * np.arange(1, 11) ** 0.5)


def test_zero_and_divergent_envelopes():
    zero = g_recursion(None, DecayEnvelope("zero"), K=8)
    assert zero.finite
    assert all(np.all(g == 0) for g in zero.levels)
    divergent = g_recursion(None, DecayEnvelope("geometric", c=0.1, rho=1.0), K=8)
    assert divergent.status(0) == "infinite"
    assert not divergent.finite
    with pytest.raises(DomainError):
        g_recursion(None, DecayEnvelope("zero"), K=1)


@pytest.mark.parametrize("dimension,scale", [(1, 1.0), (1, 2.0), (2, 1.0), (2, 0.5)])
def test_lattice_mass_matches_theta_function(dimension, scale):
    theta = float(mpmath.jtheta(3, 0, mpmath.exp(-1 / scale))) ** dimension
    mass = lattice_moment(LatticeKernel(dimension, 2.0, scale), 0.0)
    assert mass >= theta * (1 - 1e-12)
    assert mass == pytest.approx(theta, rel=1e-10)


def test_lattice_moments_follow_the_recursion():
    moments = lattice_g_moments(LatticeKernel(2, 2.0, 1.0), eps=0.5)
    assert moments.q == 1.0
    assert moments.finite
    assert len(moments.rows()) == 5
    for n in range(4):
        assert moments.moments[n + 1] == pytest.approx(moments.moments[n] * (1 + moments.moments[n]))
        assert moments.moments[n] >= moments.mass[n]
    with pytest.raises(DomainError):
        lattice_g_moments(LatticeKernel(2, 2.0, 1.0), eps=-1.0)
