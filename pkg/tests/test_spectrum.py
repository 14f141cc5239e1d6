import math

import mpmath
import numpy as np
import pytest

from markovia.config import Settings
from markovia.errors import DomainError, SizeError
from markovia.gaussian import (
    ARCovariance,
    DecayEnvelope,
    DiagDominantCovariance,
    ExplicitCovariance,
    IndependentCovariance,
    LatticeKernel,
    MovingAverageCovariance,
    eigen_bounds,
    fourier_symbol_min,
    verify_gaussian_conditions,
)
from markovia.report import Verdict


def by_name(report):
    return {c.name: c for c in report.checks}


@pytest.mark.parametrize("scale", [0.5, 1.0, 2.0])
def test_symbol_floor_brackets_theta_minimum(scale):
    q = mpmath.exp(-1 / scale)
    true_min = float(mpmath.jtheta(3, mpmath.pi / 2, q))
    true_max = float(mpmath.jtheta(3, 0, q))
    analysis = fourier_symbol_min(1, scale)
    assert analysis.certified
    assert analysis.m_g <= true_min
    assert analysis.m_g >= true_min - 1e-3
    assert analysis.sample_min >= true_min - 1e-11
    assert analysis.g_max >= true_max
    assert analysis.argmin == pytest.approx(math.pi, abs=0.05)


def test_two_dimensional_floor():
    analysis = fourier_symbol_min(2, 1.0)
    assert analysis.m_f == pytest.approx(analysis.m_g**2)
    assert analysis.m_f == pytest.approx(0.0904, abs=1e-3)
    assert analysis.to_dict()["certified"] is True


def test_symbol_argument_checks():
    with pytest.raises(DomainError):
        fourier_symbol_min(2, 0.0)
    with pytest.raises(DomainError):
        fourier_symbol_min(0, 1.0)
    with pytest.raises(DomainError):
        fourier_symbol_min(2, 1.0, grid_n=16)
    with pytest.raises(DomainError):
        fourier_symbol_min(2, 1.0, order=1)


@pytest.mark.parametrize("dimension", [1, 2])
@pytest.mark.parametrize("radius", [1, 2, 3])
def test_lattice_cubes_sit_inside_the_symbol_range(dimension, radius):
    analysis = fourier_symbol_min(dimension, 1.0)
    cube = (2 * radius + 1) ** dimension
    eig = np.linalg.eigvalsh(LatticeKernel(dimension, 2.0, 1.0).leading(cube))
    assert eig[0] >= analysis.m_f - 1e-10
    assert eig[-1] <= analysis.M_f + 1e-10


def test_eigen_bounds_interlace():
    trace = eigen_bounds(MovingAverageCovariance(0.5), [5, 10, 20, 40])
    assert [r["n"] for r in trace.rows] == [5, 10, 20, 40]
    assert trace.interlacing_ok
    assert trace.row_sum_ok
    mins = [r["lambda_min"] for r in trace.rows]
    assert mins == sorted(mins, reverse=True)
    assert trace.lambda_max <= 1 + 0.25 + 2 * 0.5 + 1e-12


def test_eigen_bounds_limits():
    with pytest.raises(DomainError):
        eigen_bounds(IndependentCovariance(), [])
    with pytest.raises(DomainError):
        eigen_bounds(IndependentCovariance(), [0, 3])
    with pytest.raises(SizeError):
        eigen_bounds(IndependentCovariance(), [20], Settings(eigen_cap=10))


def test_lattice_kernel_is_supported():
    report = verify_gaussian_conditions(LatticeKernel(2, 2.0, 1.0), [9, 25, 49])
    checks = by_name(report)
    assert report.verdict is Verdict.SUPPORTED
    assert checks["symbol sandwich"].verdict is Verdict.SUPPORTED
    assert checks["g_n summability (eps=0.5)"].verdict is Verdict.SUPPORTED
    assert "symbol" in report.traces
    assert {r["eps"] for r in report.traces["decay"]} == {0.5}


def test_ar_model_is_supported():
    m = ARCovariance.stationary([0.5], 0.4)
    report = verify_gaussian_conditions(m, [10, 20, 40])
    checks = by_name(report)
    assert report.verdict is Verdict.SUPPORTED
    for name in ["AR variance bound", "AR precision banding", "AR eigenvalue floor"]:
        assert checks[name].verdict is Verdict.SUPPORTED
    assert len(report.traces["decay"]) == 5


@pytest.mark.parametrize("betas", [[0.0, 0.94], [0.0, 0.0, 0.94], [0.5, -0.44]])
def test_ar_variance_stays_below_inverse_margin(betas):
    m = ARCovariance.stationary(betas, 0.05)
    check = by_name(verify_gaussian_conditions(m, [10, 40]))["AR variance bound"]
    assert check.verdict is Verdict.SUPPORTED
    assert check.values["bound"] == pytest.approx(20.0)
    assert check.values["variance_max"] <= 20.0


def test_impulse_bound_can_exceed_inverse_margin_at_order_three():
    m = ARCovariance.stationary([0.0, 0.0, 0.94], 0.05)
    assert m.variance_bound(40) > 1 / m.delta
    assert m.leading(40).diagonal().max() <= 1 / m.delta


def test_ar_model_with_explicit_envelope_and_two_exponents():
    m = ARCovariance.stationary([0.5], 0.4)
    envelope = DecayEnvelope("geometric", c=2.0, rho=0.5)
    report = verify_gaussian_conditions(m, [10], envelope=envelope, K=60, eps=(0.5, 1.0))
    names = [c.name for c in report.checks]
    assert "g_n summability (eps=0.5)" in names
    assert "g_n summability (eps=1.0)" in names
    assert report.verdict is Verdict.SUPPORTED


def test_divergent_envelope_refutes_summability():
    report = verify_gaussian_conditions(
        IndependentCovariance(), [4], envelope=DecayEnvelope("geometric", c=1.0, rho=1.0), K=20
    )
    assert by_name(report)["g_n summability (eps=0.5)"].verdict is Verdict.REFUTED
    assert report.verdict is Verdict.REFUTED


def test_envelope_violation_is_inconclusive():
    report = verify_gaussian_conditions(
        IndependentCovariance(2.0), [4], envelope=DecayEnvelope("diagonal", c=1.0), K=20
    )
    assert by_name(report)["g_n summability (eps=0.5)"].verdict is Verdict.INCONCLUSIVE


def test_independent_model_has_constant_spectrum():
    report = verify_gaussian_conditions(IndependentCovariance(), [5, 10])
    assert by_name(report)["constant spectrum"].verdict is Verdict.SUPPORTED
    assert report.verdict is Verdict.SUPPORTED


def test_moving_average_lacks_a_certificate():
    report = verify_gaussian_conditions(MovingAverageCovariance(0.5), [10, 20])
    checks = by_name(report)
    assert checks["positive definite blocks"].verdict is Verdict.SUPPORTED
    assert checks["eigenvalue floor"].verdict is Verdict.INCONCLUSIVE
    assert checks["g_n summability"].verdict is Verdict.INCONCLUSIVE
    assert report.verdict is Verdict.INCONCLUSIVE


def test_indefinite_explicit_matrix_is_refuted():
    m = ExplicitCovariance.from_matrix([[1.0, 2.0], [2.0, 1.0]])
    report = verify_gaussian_conditions(m, [2])
    assert by_name(report)["positive definite blocks"].verdict is Verdict.REFUTED
    assert report.verdict is Verdict.REFUTED


def test_dominant_kernel_uses_gershgorin_floor():
    m = DiagDominantCovariance.from_lattice(LatticeKernel(1, 1.0, 0.5))
    report = verify_gaussian_conditions(m, [10, 30])
    assert by_name(report)["Gershgorin floor"].verdict is Verdict.SUPPORTED
