import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from markovia.config import Settings
from markovia.discrete import (
    Regime,
    chain_ising,
    chain_summable,
    finite_ising,
    ising_conditional,
    ising_convergence,
    ising_convergence_report,
    ising_exact,
    ising_fmvn,
    ising_from_config,
    marginal_consistency,
    qualifying_index,
    sparse_chain,
)
from markovia.errors import ConfigError, DomainError, SizeError
from markovia.report import Verdict

COUPLINGS = {(1, 2): 0.5, (2, 3): -0.3, (1, 4): 0.8}
FIELDS = [0.2, -0.1, 0.4, -0.6]


def brute_pmf(size, couplings, fields):
    weights = []
    for idx in range(2**size):
        x = [(idx >> k) & 1 for k in range(size)]
        log_w = sum(h * xk for h, xk in zip(fields, x))
        log_w += sum(t * x[i - 1] * x[j - 1] for (i, j), t in couplings.items())
        weights.append(math.exp(log_w))
    total = sum(weights)
    return np.array([w / total for w in weights])


@st.composite
def small_models(draw):
    size = draw(st.integers(2, 6))
    pairs = list(itertools.combinations(range(1, size + 1), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    couplings = {e: draw(st.floats(-1.5, 1.5)) for e in chosen}
    fields = draw(st.lists(st.floats(-1.5, 1.5), min_size=size, max_size=size))
    return size, couplings, fields


def test_exact_pmf_matches_enumeration():
    m = finite_ising(4, COUPLINGS, FIELDS)
    np.testing.assert_allclose(ising_exact(m, 4), brute_pmf(4, COUPLINGS, FIELDS), rtol=1e-12)


@given(small_models())
def test_exact_pmf_matches_enumeration_on_random_models(model):
    size, couplings, fields = model
    m = finite_ising(size, couplings, fields)
    pmf = ising_exact(m, size)
    assert pmf.sum() == pytest.approx(1.0)
    np.testing.assert_allclose(pmf, brute_pmf(size, couplings, fields), rtol=1e-10)


@given(small_models())
def test_fmvn_matches_marginal_ratio(model):
    size, couplings, fields = model
    m = finite_ising(size, couplings, fields)
    for mm in range(1, size + 1):
        assert marginal_consistency(m, mm, size) <= 1e-12


def test_conditional_matches_the_joint():
    m = finite_ising(4, COUPLINGS, FIELDS)
    tensor = np.reshape(ising_exact(m, 4), (2,) * 4, order="F")
    for x1, x3, x4 in itertools.product((0, 1), repeat=3):
        expected = tensor[x1, 1, x3, x4] / tensor[x1, :, x3, x4].sum()
        got = ising_conditional(m, 2, {1: x1, 3: x3, 4: x4})
        assert got == pytest.approx(expected)
    with pytest.raises(DomainError):
        ising_conditional(m, 2, {1: 0})


def test_fmvn_with_fields_only_is_the_prefix_weight():
    m = finite_ising(5, {}, [0.3, -0.7, 0.1, 0.0, 0.2])
    assert ising_fmvn(m, 1, [1], 5) == pytest.approx(math.exp(0.3))
    assert ising_fmvn(m, 2, [1, 1], 4) == pytest.approx(math.exp(0.3 - 0.7))
    assert ising_fmvn(m, 2, [0, 0], 4) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        ising_fmvn(m, 2, [1], 4)
    with pytest.raises(DomainError):
        ising_fmvn(m, 3, [1, 0, 2], 4)


def test_enumeration_cap():
    m = chain_summable(0.5)
    with pytest.raises(SizeError):
        ising_exact(m, 6, Settings(enumeration_cap=5))
    with pytest.raises(SizeError):
        ising_convergence(m, 2, 6, Settings(enumeration_cap=5))


def test_chain_summable_parameters():
    m = chain_summable(0.5)
    assert m.regime is Regime.SUMMABLE
    assert m.total_mass() == pytest.approx(1.0)
    assert m.coupling(1, 2) == pytest.approx(0.5)
    assert m.coupling(1, 3) == 0.0
    assert m.field_at(4) == 0.0
    assert m.beta(3) == pytest.approx(0.125)
    assert qualifying_index(m, 2) == 3


def test_summable_convergence_report_passes():
    report = ising_convergence_report(chain_summable(0.5), 2, 12)
    checks = {c.name: c for c in report.checks}
    assert checks["f_m identity"].verdict is Verdict.PASS
    assert checks["|α_n − 1| ≤ 2β_n"].verdict is Verdict.PASS
    assert checks["marginal sandwich"].verdict is Verdict.PASS
    assert checks["marginal sandwich"].values["constant"] == pytest.approx(math.e**2)
    assert checks["limit of f_m"].verdict is Verdict.SUPPORTED
    assert report.verdict.exit_code == 0
    assert len(report.traces["ising"]) == 4 * 11


def test_limit_interval_contains_later_values():
    m = chain_summable(0.5)
    early = ising_convergence(m, 2, 10)
    late = ising_convergence(m, 2, 16)
    for v, (lo, hi) in early.limits.items():
        assert lo <= late.traces[v][-1] <= hi
    assert late.bounds_ok


def test_alpha_stays_in_coupling_band():
    m = chain_ising(lambda i: 0.9 * 0.6**i, field=lambda k: 0.0, mass_bound=2.0)
    result = ising_convergence(m, 1, 10)
    for v, alphas in result.alphas.items():
        for n, alpha in zip(result.ns, alphas):
            if n >= result.qualifying_from:
                beta = m.beta(n)
                assert math.exp(-beta) - 1e-12 <= alpha <= math.exp(beta) + 1e-12


def test_finite_model_limits_are_exact():
    m = chain_ising(lambda i: 0.4, field=lambda k: -0.2, size=6)
    assert m.regime is Regime.FINITE
    result = ising_convergence(m, 2, 6)
    for v, (lo, hi) in result.limits.items():
        assert lo == pytest.approx(result.traces[v][-1])
        assert hi == pytest.approx(result.traces[v][-1])
    with pytest.raises(DomainError):
        ising_convergence(m, 2, 7)


def test_short_horizon_is_inconclusive():
    m = finite_ising(4, {(1, 4): 0.5})
    report = ising_convergence_report(m, 1, 3)
    checks = {c.name: c for c in report.checks}
    assert checks["|α_n − 1| ≤ 2β_n"].verdict is Verdict.INCONCLUSIVE
    assert checks["limit of f_m"].verdict is Verdict.INCONCLUSIVE
    assert report.verdict is Verdict.INCONCLUSIVE


def test_sparse_chain_has_no_sandwich():
    m = sparse_chain(shift=0.0, coupling=0.5)
    assert m.field_at(3) == pytest.approx(-2 * math.log(3))
    assert m.coupling(2, 3) == pytest.approx(-0.5)
    result = ising_convergence(m, 1, 10)
    assert result.sandwich_ok is None
    lo, hi = result.limits[(1,)]
    assert hi / lo == pytest.approx(math.exp(2 / 10))


def test_regime_validation():
    with pytest.raises(DomainError):
        chain_summable(1.0)
    with pytest.raises(DomainError):
        chain_ising(lambda i: 0.1)
    with pytest.raises(DomainError):
        chain_ising(lambda i: 0.5**i, mass_bound=0.1)
    with pytest.raises(DomainError, match="divergent"):
        chain_ising(lambda i: 1 / i, mass_bound=1000.0)
    with pytest.raises(DomainError):
        sparse_chain(shift=-1.0)
    with pytest.raises(DomainError):
        finite_ising(3, {(1, 1): 0.5})
    with pytest.raises(DomainError):
        finite_ising(3, {(1, 4): 0.5})


def test_ising_from_config():
    assert ising_from_config({"family": "chain", "rate": 0.5}).regime is Regime.SUMMABLE
    finite = ising_from_config({"family": "chain", "rate": 0.5, "nodes": 5})
    assert finite.size == 5
    sparse = ising_from_config({"family": "sparse", "coupling": 0.5})
    assert sparse.regime is Regime.SPARSE
    explicit = ising_from_config(
        {"family": "explicit", "nodes": 3, "edges": [[1, 2, 0.5]], "field": [0.1, 0.2, 0.3]}
    )
    assert explicit.coupling(1, 2) == 0.5
    assert explicit.field_at(3) == pytest.approx(0.3)
    with pytest.raises(ConfigError):
        ising_from_config({"family": "explicit"})
    with pytest.raises(ConfigError):
        ising_from_config({"family": "chain", "rate": 0.5, "mass_bound": 0.01})
    with pytest.raises(ConfigError):
        ising_from_config({"family": "potts"})
