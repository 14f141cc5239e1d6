import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from markovia.config import Settings
from markovia.counterexamples import coin_mixture_pmf
from markovia.discrete import (
    MarkovChainSpec,
    chain_dcp_bound,
    chain_dcp_report,
    chain_dcp_trials,
    chain_from_config,
    chain_marginal,
    chain_pmf,
    conditional_prefix,
    cylinder_event,
    dcp_trace,
    dcp_variance,
    last_one_tail,
    random_chain_spec,
    random_tail_event,
)
from markovia.errors import ConfigError, DomainError, SizeError
from markovia.report import Verdict

TWO_STATE = MarkovChainSpec(0.5, (0.8, 0.7, 0.65, 0.6), (0.3, 0.35, 0.4, 0.45))

unit = st.floats(0.05, 0.95)


@st.composite
def chains(draw, length=6):
    return MarkovChainSpec(
        draw(unit),
        tuple(draw(st.lists(unit, min_size=length, max_size=length))),
        tuple(draw(st.lists(unit, min_size=length, max_size=length))),
    )


def path_probability(c, path):
    """Product of the initial and transition probabilities along one path."""
    prob = c.pi1 if path[0] else 1 - c.pi1
    for k in range(1, len(path)):
        up = c.p_at(k) if path[k - 1] else c.t_at(k)
        prob *= up if path[k] else 1 - up
    return prob


def test_pmf_matches_path_enumeration():
    n = 6
    pmf = chain_pmf(TWO_STATE, n)
    for path in itertools.product((0, 1), repeat=n):
        index = sum(x << k for k, x in enumerate(path))
        assert pmf[index] == pytest.approx(path_probability(TWO_STATE, path), rel=1e-12)


@given(chains(), st.integers(1, 8))
def test_marginal_matches_pmf(c, n):
    pmf = chain_pmf(c, n)
    assert pmf.sum() == pytest.approx(1.0)
    ones = (np.arange(2**n) >> (n - 1)) & 1
    assert chain_marginal(c, n) == pytest.approx(pmf[ones == 1].sum())


def test_sequences_repeat_their_last_value():
    assert TWO_STATE.p_at(4) == 0.6
    assert TWO_STATE.p_at(9) == 0.6
    assert TWO_STATE.t_at(1) == 0.3
    assert TWO_STATE.gap(2) == pytest.approx(0.35)
    assert TWO_STATE.divergence_sums(3) == pytest.approx([0.5, 1.15, 1.9])
    with pytest.raises(DomainError):
        TWO_STATE.p_at(0)


def test_spec_validation_and_config():
    with pytest.raises(DomainError):
        MarkovChainSpec(1.0, (0.5,), (0.5,))
    with pytest.raises(DomainError):
        MarkovChainSpec(0.5, (), (0.5,))
    with pytest.raises(DomainError):
        MarkovChainSpec.homogeneous(0.5, 0.5, 0.0)
    spec = chain_from_config({"pi1": 0.5, "p": 0.8, "t": [0.3, 0.4]})
    assert spec.p == (0.8,)
    assert spec.t == (0.3, 0.4)
    assert spec.to_dict() == {"pi1": 0.5, "p": [0.8], "t": [0.3, 0.4]}
    with pytest.raises(ConfigError):
        chain_from_config({"pi1": 0.5, "p": 0.8})
    with pytest.raises(ConfigError):
        chain_from_config({"pi1": 0.5, "p": [], "t": 0.3})
    with pytest.raises(ConfigError):
        chain_from_config({"pi1": 0.5, "p": 1.5, "t": 0.3})


def test_random_specs_are_reproducible():
    a = random_chain_spec(np.random.default_rng(3), 5)
    b = random_chain_spec(np.random.default_rng(3), 5)
    assert a == b
    assert len(a.p) == 5
    assert all(0.05 <= x <= 0.95 for x in a.p + a.t)


def test_enumeration_cap():
    with pytest.raises(SizeError):
        chain_pmf(TWO_STATE, 6, Settings(enumeration_cap=5))


def test_events_and_prefix_conditionals():
    n = 5
    event = cylinder_event(n, {2: 1, 4: 0})
    states = np.arange(2**n)
    assert np.array_equal(event, (((states >> 1) & 1) == 1) & (((states >> 3) & 1) == 0))

    tail = random_tail_event(n, 3, np.random.default_rng(0))
    for high in range(2 ** (n - 2)):
        block = tail[(states >> 2) == high]
        assert np.all(block == block[0])

    prefix = conditional_prefix(chain_pmf(TWO_STATE, n), 2, [4], [1])
    assert prefix.sum() == pytest.approx(1.0)
    assert prefix.shape == (4,)


def test_last_one_tail_matches_complement():
    n = 6
    pmf = chain_pmf(TWO_STATE, n)
    none_late = sum(
        path_probability(TWO_STATE, path)
        for path in itertools.product((0, 1), repeat=n)
        if not any(path[3:])
    )
    assert last_one_tail(pmf, 4) == pytest.approx(1 - none_late)
    assert last_one_tail(pmf, 4, [1], [1]) <= 1.0


def test_variance_vanishes_for_independent_coordinates():
    c = MarkovChainSpec.homogeneous(0.4, 0.6, 0.6)
    pmf = chain_pmf(c, 6)
    for n_prime in range(3, 7):
        assert dcp_variance(pmf, cylinder_event(6, {n_prime: 1}), 2) == pytest.approx(0.0, abs=1e-15)
    assert chain_dcp_bound(c, 2, 4) == 0.0


def test_variance_of_next_coordinate():
    # P(X_3 = 1 | X_2) is p_2 or t_2, so the variance is π_2(1 − π_2)(p_2 − t_2)².
    pmf = chain_pmf(TWO_STATE, 4)
    pi2 = chain_marginal(TWO_STATE, 2)
    expected = pi2 * (1 - pi2) * TWO_STATE.gap(2) ** 2
    assert dcp_variance(pmf, cylinder_event(4, {3: 1}), 2) == pytest.approx(expected)


@given(chains(), st.integers(0, 2**16))
def test_random_draws_respect_the_product_bound(c, seed):
    rows = chain_dcp_trials(c, 7, 10, np.random.default_rng(seed))
    assert len(rows) == 10
    for row in rows:
        assert row["variance"] <= row["bound"] + 1e-12
        assert 1 <= row["m"] < row["n_prime"] <= 7


def test_chain_report_passes():
    report = chain_dcp_report(TWO_STATE, 10, 40, np.random.default_rng(5))
    assert report.verdict is Verdict.PASS
    assert len(report.traces["dcp"]) == 40
    assert report.notes


def test_chain_trace_decays_geometrically():
    pmf = chain_pmf(TWO_STATE, 10)
    rows = dcp_trace(pmf, 2, range(3, 11))
    values = [r["variance"] for r in rows]
    assert all(b < a for a, b in zip(values, values[1:]))
    for row in rows:
        assert row["variance"] <= chain_dcp_bound(TWO_STATE, 2, row["n_prime"])


def test_coin_mixture_trace_does_not_decay():
    pmf = coin_mixture_pmf(8, 0.2, 0.8)
    assert pmf.sum() == pytest.approx(1.0)
    values = [r["variance"] for r in dcp_trace(pmf, 2, range(3, 9))]
    assert min(values) > 0.01
    assert max(values) - min(values) < 1e-12


def test_dcp_argument_errors():
    pmf = np.zeros(8)
    pmf[0] = pmf[7] = 0.5
    event = cylinder_event(3, {3: 1})
    with pytest.raises(DomainError):
        dcp_variance(pmf, event, 1, [1, 2], [1, 0])
    with pytest.raises(DomainError):
        dcp_variance(pmf, event[:4], 1)
    with pytest.raises(DomainError):
        dcp_variance(pmf, event, 4)
    with pytest.raises(DomainError):
        dcp_variance(pmf, event, 1, [1], [2])
    with pytest.raises(DomainError):
        chain_dcp_bound(TWO_STATE, 3, 3)
    with pytest.raises(DomainError):
        random_tail_event(3, 4, np.random.default_rng(0))
    # X3 copies X1, so P(X3 = 1 | X1) = X1.
    assert math.isclose(dcp_variance(pmf, event, 1), 0.25)
