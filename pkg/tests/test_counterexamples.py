import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import norm

from markovia.counterexamples import (
    ParityProcessSpec,
    ThetaShiftSpec,
    expected_cross_cov,
    ma_shift_verdicts,
    mixture_conditional_cov,
    parity_from_config,
    parity_pmf,
    parity_verdicts,
    posterior_spread,
    theta_shift_from_config,
    theta_shift_relation,
    theta_shift_verdicts,
)
from markovia.errors import ConfigError, DomainError, ModelClassError, SizeError
from markovia.gaussian import ma_precision_entry
from markovia.graphoid import equivalence_audit, pairwise_graph, relation_from_discrete
from markovia.report import Verdict


def by_name(report):
    return {c.name: c for c in report.checks}


def test_parity_pmf_is_normalized():
    pmf = parity_pmf(ParityProcessSpec(M=8))
    assert pmf.shape == (2**9,)
    assert pmf.sum() == pytest.approx(1.0)
    assert pmf.min() == 0.0


def test_parity_signatures_at_seven():
    report = parity_verdicts(ParityProcessSpec(M=7, p=0.25))
    checks = by_name(report)
    assert checks["X0 ⊥ X1 | rest and X0 ⊥ X2 | rest"].verdict is Verdict.PASS
    joint = checks["X0 ⊥ (X1, X2) | X3..XM fails"]
    assert joint.verdict is Verdict.PASS
    assert joint.values["p_equal"] == pytest.approx(0.75)
    assert checks["finite sub-tuples satisfy P5"].verdict is Verdict.PASS
    assert report.verdict.exit_code == 0


@pytest.mark.parametrize("M", range(7, 15))
def test_parity_joint_gap_persists_at_every_truncation(M):
    report = parity_verdicts(ParityProcessSpec(M=M))
    rows = [row for row in report.traces["parity"] if row["param"] == M]
    stats = {row["statistic"]: row["value"] for row in rows}
    assert stats["joint_gap"] > 0.05
    assert stats["pairwise_gap_01"] <= 1e-12
    assert stats["pairwise_gap_02"] <= 1e-12
    assert {row["param"] for row in report.traces["parity"]} == set(range(7, M + 1))


@pytest.mark.slow
def test_parity_relation_audit_withdraws_the_pairwise_implication():
    r = relation_from_discrete(parity_pmf(ParityProcessSpec(M=7)))
    audit = equivalence_audit(r, pairwise_graph(r))
    checks = by_name(audit)
    assert not audit.has_failures()
    assert checks["P* holds"].values["holds"]
    assert not checks["G* holds"].values["holds"]
    assert checks["P*⇒G*"].verdict is Verdict.INCONCLUSIVE


def test_parity_with_tiny_tail_still_fails_jointly():
    report = parity_verdicts(ParityProcessSpec(M=7, p=0.25, tail=1e-9))
    assert by_name(report)["X0 ⊥ (X1, X2) | X3..XM fails"].verdict is Verdict.PASS


def test_fair_latent_coin_removes_the_counterexample():
    report = parity_verdicts(ParityProcessSpec(M=7, p=0.5))
    joint = by_name(report)["X0 ⊥ (X1, X2) | X3..XM fails"]
    assert joint.verdict is Verdict.FAIL
    assert joint.values["p_equal"] == pytest.approx(0.5)
    assert report.verdict is Verdict.FAIL


def test_parity_spec_validation():
    with pytest.raises(DomainError):
        ParityProcessSpec(M=6)
    with pytest.raises(DomainError):
        ParityProcessSpec(p=1.0)
    with pytest.raises(DomainError):
        ParityProcessSpec(M=8, tail=(0.1, 0.2))
    with pytest.raises(SizeError):
        parity_pmf(ParityProcessSpec(M=17))
    spec = parity_from_config({"M": 9, "p": 0.3, "tail": [0.1] * 6})
    assert spec.tail_parameters() == (0.1,) * 6
    assert spec.truncated(7).tail == (0.1,) * 4


def test_iid_shift_covariances():
    spec = ThetaShiftSpec(n=6)
    assert spec.covariance()[0, 1] == pytest.approx(0.25)
    assert spec.covariance()[0, 0] == pytest.approx(1.25)
    # Oracle access to θ leaves the independent base.
    assert spec.base_covariance()[0, 1] == 0.0
    values = [expected_cross_cov(spec, 1, 2, range(3, 3 + k)) for k in range(5)]
    assert values[0] == pytest.approx(0.25)
    assert all(v > 0 for v in values)
    assert all(b < a for a, b in zip(values, values[1:]))


def test_posterior_spread_against_direct_integration():
    w = 0.3

    def integrand(y):
        one, zero = w * norm.pdf(y - 1), (1 - w) * norm.pdf(y)
        pi = one / (one + zero)
        return (one + zero) * pi * (1 - pi)

    direct, _ = quad(integrand, -np.inf, np.inf, epsabs=1e-13)
    assert posterior_spread(w, 1.0) == pytest.approx(direct, rel=1e-8)
    assert posterior_spread(w, 0.0) == pytest.approx(w * (1 - w))
    assert posterior_spread(w, 40.0) < posterior_spread(w, 4.0)


def test_pointwise_conditional_cov():
    spec = ThetaShiftSpec(n=4)
    averaged = mixture_conditional_cov(spec, [1, 2], [3])
    at_zero = mixture_conditional_cov(spec, [1, 2], [3], [0.5])
    # y = 1/2 makes both θ values equally likely.
    assert at_zero[0, 1] == pytest.approx(0.25)
    assert averaged[0, 1] < 0.25
    with pytest.raises(DomainError):
        mixture_conditional_cov(spec, [1, 2], [2])
    with pytest.raises(DomainError):
        mixture_conditional_cov(spec, [1, 5])
    with pytest.raises(DomainError):
        mixture_conditional_cov(spec, [1, 2], [3], [0.1, 0.2])


def test_theta_shift_report():
    report = theta_shift_verdicts(ThetaShiftSpec(n=6))
    checks = by_name(report)
    assert checks["cov(Y1, Y2) is nonzero"].values["cov"] == pytest.approx(0.25)
    assert checks["pairwise graph is complete at every finite truncation"].values["edges"] == 15
    assert report.verdict is Verdict.PASS
    stats = {row["statistic"] for row in report.traces["theta_shift"]}
    assert stats == {"cond_cov_12", "posterior_variance"}


def test_theta_shift_relation_has_no_pairwise_independence():
    relation = theta_shift_relation(ThetaShiftSpec(n=5))
    graph = pairwise_graph(relation)
    assert len(graph.edges()) == 10
    assert not relation.holds({1}, {2}, {3, 4, 5})


def test_ma_shift_report():
    spec = ThetaShiftSpec(base="ma", alpha=0.5, n=6)
    report = ma_shift_verdicts(spec)
    checks = by_name(report)
    precision = checks["closed-form precision matches inversion"]
    assert precision.values["entry_13_size4"] == pytest.approx(0.3125)
    assert precision.verdict is Verdict.PASS
    assert checks["no pairwise independence among A"].verdict is Verdict.PASS
    assert report.verdict is Verdict.PASS
    assert ma_precision_entry(0.01, 6, 1, 4) == pytest.approx(-1e-6, rel=1e-3)


def test_shift_preconditions():
    with pytest.raises(ModelClassError):
        theta_shift_verdicts(ThetaShiftSpec(base="ma"))
    with pytest.raises(ModelClassError):
        ma_shift_verdicts(ThetaShiftSpec(base="iid"))
    with pytest.raises(SizeError):
        theta_shift_verdicts(ThetaShiftSpec(n=13))
    with pytest.raises(DomainError):
        ThetaShiftSpec(alpha=1.0)
    with pytest.raises(DomainError):
        ThetaShiftSpec(base="ar")
    with pytest.raises(ConfigError):
        theta_shift_from_config({"weight": 2.0})
    assert theta_shift_from_config({"base": "ma", "n": 8}).n == 8
