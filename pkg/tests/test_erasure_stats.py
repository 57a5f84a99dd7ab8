import itertools
import math

import numpy as np
import pytest
from scipy import stats

from common import config
from common.utils.exceptions import InvalidParameterError, TruncationError
from erasure_stats import negbin
from erasure_stats import (
    ChannelSpec,
    beta_k,
    chernoff_tail,
    chernoff_tilt,
    conditional_mean,
    conditional_mean_table,
    log_mgf,
    max_nb_cdf,
    max_nb_moments,
    nb_cdf,
    nb_cdf_table,
    nb_moments,
    nb_pmf,
    nb_pmf_table,
    nb_sf,
)


def _enumerate_patterns(k: int, delta: float, length: int):
    """
    Every erasure pattern of ``length`` symbols with its probability.

    Returns the running count of received symbols per pattern (one column
    per prefix length) and the pattern probabilities.
    """
    received = np.array(list(itertools.product((0, 1), repeat=length)), dtype=np.int64)
    hits = received.sum(axis=1)
    weights = (1.0 - delta) ** hits * delta ** (length - hits)
    return np.cumsum(received, axis=1), weights


@pytest.mark.parametrize("k", [1, 5, 40])
@pytest.mark.parametrize("delta", [0.1, 0.5, 0.9])
def test_pmf_and_cdf_match_scipy(k, delta):
    """
    Test that the recurrence-built PMF and CDF agree with scipy.

    scipy counts failures before the k-th success, so its argument is
    shifted by k.
    """
    spec = ChannelSpec(k, delta)
    n_max = k + 300
    failures = np.arange(0, n_max - k + 1)
    np.testing.assert_allclose(
        nb_pmf_table(spec, n_max), stats.nbinom.pmf(failures, k, 1.0 - delta), rtol=1e-9, atol=1e-300
    )
    np.testing.assert_allclose(
        nb_cdf_table(spec, n_max), stats.nbinom.cdf(failures, k, 1.0 - delta), rtol=1e-10, atol=1e-15
    )


@pytest.mark.parametrize("k", [1, 2, 3, 4])
@pytest.mark.parametrize("delta", [0.25, 0.5])
def test_cdf_matches_exhaustive_erasure_patterns(k, delta):
    """
    Test that F_k(n) equals the total probability of the erasure patterns
    in which at least k of the first n symbols are received.
    """
    spec = ChannelSpec(k, delta)
    running, weights = _enumerate_patterns(k, delta, k + 10)
    for n in range(k, k + 11):
        decoded = running[:, n - 1] >= k
        assert nb_cdf(spec, n) == pytest.approx(math.fsum(weights[decoded]), abs=1e-12)


@pytest.mark.parametrize("k", list(range(1, 21)))
@pytest.mark.parametrize("delta", [0.1, 0.25, 0.3, 0.5])
def test_cdf_matches_exact_pattern_counts(k, delta, decoding_slots):
    """
    Test F_k(n) for n up to k+12 against the exact probability, summed over
    erasure patterns grouped by received count, that symbol n or an earlier
    one completes the update.
    """
    spec = ChannelSpec(k, delta)
    slots = decoding_slots(k, delta, k + 12)
    for n in range(k, k + 13):
        assert nb_cdf(spec, n) == pytest.approx(float(sum(slots[:n])), abs=1e-12)


def test_single_values_are_table_entries(small_channel):
    """
    Test that nb_pmf and nb_cdf return the last entry of the matching table,
    bit for bit, so sweeps and single calls never disagree.
    """
    for n in (5, 6, 17, 60):
        assert nb_pmf(small_channel, n) == nb_pmf_table(small_channel, n)[-1]
        assert nb_cdf(small_channel, n) == nb_cdf_table(small_channel, 200)[n - small_channel.k]


def test_values_below_k(small_channel):
    """
    Test that fewer than k slots can never deliver an update.
    """
    assert nb_pmf(small_channel, 4) == 0.0
    assert nb_cdf(small_channel, 0) == 0.0
    assert nb_sf(small_channel, 3) == 1.0
    assert len(nb_cdf_table(small_channel, 4)) == 0


def test_survival_matches_scipy_and_keeps_the_deep_tail():
    """
    Test that nb_sf follows scipy and stays positive where 1 - F cancels to zero.
    """
    spec = ChannelSpec(10, 0.1)
    ns = np.arange(10, 120)
    np.testing.assert_allclose(nb_sf(spec, ns), stats.nbinom.sf(ns - 10, 10, 0.9), rtol=1e-9, atol=0)
    assert 1.0 - nb_cdf(spec, 200) == 0.0
    assert nb_sf(spec, 200) > 0.0
    assert nb_sf(spec, 200) == pytest.approx(stats.nbinom.sf(190, 10, 0.9), rel=1e-6)


def test_survival_rejects_non_integers(small_channel):
    """Test that nb_sf refuses a fractional threshold."""
    with pytest.raises(InvalidParameterError):
        nb_sf(small_channel, 7.5)


@pytest.mark.parametrize("k,delta", [(1, 0.5), (10, 0.3), (1000, 0.1)])
def test_moments_match_scipy(k, delta):
    """Test the closed-form mean and variance against scipy (shifted by k)."""
    summary = nb_moments(ChannelSpec(k, delta))
    mean, var = stats.nbinom.stats(k, 1.0 - delta, moments="mv")
    assert summary.mu_k == pytest.approx(float(mean) + k, rel=1e-12)
    assert summary.sigma2_k == pytest.approx(float(var), rel=1e-12)
    assert summary.sigma_k == pytest.approx(math.sqrt(float(var)), rel=1e-12)


def test_lossless_channel_is_deterministic(lossless_channel):
    """
    Test that with delta = 0 every update takes exactly k slots.
    """
    pmf = nb_pmf_table(lossless_channel, 12)
    assert pmf[0] == 1.0
    assert not pmf[1:].any()
    assert nb_cdf(lossless_channel, 5) == 1.0
    assert nb_sf(lossless_channel, 9) == 0.0
    assert conditional_mean(lossless_channel, 9) == 5.0
    assert nb_moments(lossless_channel).sigma2_k == 0.0


@pytest.mark.parametrize(
    "k,delta",
    [(0, 0.1), (-3, 0.1), (3, 1.0), (3, -0.1), (3, 1.5), (2.5, 0.1), (True, 0.1), (3, float("nan"))],
)
def test_invalid_channels_are_rejected(k, delta):
    """Test that a channel outside k >= 1, 0 <= delta < 1 cannot be built."""
    with pytest.raises(InvalidParameterError):
        ChannelSpec(k, delta)


def test_invalid_parameter_error_is_a_value_error():
    """Test that callers catching ValueError still see parameter errors."""
    with pytest.raises(ValueError, match="delta"):
        ChannelSpec(3, 1.0)


def test_conditional_mean_below_k_is_rejected(small_channel):
    """Test that a packet shorter than k has no conditional delivery slot."""
    with pytest.raises(InvalidParameterError, match="n >= k"):
        conditional_mean(small_channel, 4)


@pytest.mark.parametrize("delta", [0.1, 0.3, 0.5, 0.7])
def test_conditional_mean_properties(delta):
    """
    Test the properties of mu_tilde_n for k = 1..30, n = k..k+200.

    It is nondecreasing, never above min(n, k/(1-delta)), equals k at n = k,
    has a closed form at n = k+1, and matches the direct definition
    sum(x p(x)) / sum(p(x)).
    """
    for k in range(1, 31):
        spec = ChannelSpec(k, delta)
        n_max = k + 200
        table = conditional_mean_table(spec, n_max)
        ns = np.arange(k, n_max + 1)

        assert np.all(np.diff(table) >= 0.0)
        assert np.all(table <= np.minimum(ns, k / (1.0 - delta)))
        assert table[0] == k
        assert table[1] == pytest.approx(k + k * delta / (1.0 + k * delta), rel=1e-12)

        pmf = stats.nbinom.pmf(ns - k, k, 1.0 - delta)
        direct = np.cumsum(ns * pmf) / np.cumsum(pmf)
        np.testing.assert_allclose(table, direct, rtol=1e-10)


def test_conditional_mean_approaches_mean_for_long_packets():
    """Test that mu_tilde_n tends to k/(1-delta) as the packet grows."""
    spec = ChannelSpec(20, 0.4)
    assert conditional_mean(spec, 2000) == pytest.approx(spec.mu, rel=1e-12)


@pytest.mark.parametrize("k", [1, 5, 20])
@pytest.mark.parametrize("delta", [0.1, 0.5])
def test_chernoff_bound_dominates_the_tail(k, delta):
    """
    Test that the optimised Chernoff bound is never below P[X >= n] (hence
    never below 1 - F_k(n)) for every n above the mean.
    """
    spec = ChannelSpec(k, delta)
    start = math.floor(spec.mu) + 1
    for n in range(start, k + 201):
        bound = chernoff_tail(spec, n)
        assert nb_sf(spec, n - 1) <= bound * (1.0 + 1e-12)
        assert 1.0 - nb_cdf(spec, n) <= bound * (1.0 + 1e-12)


def test_chernoff_tilt_is_the_minimiser():
    """
    Test that moving the tilt away from s* only loosens the bound, and
    that s* equals ln((1 + w/delta)/(1 + w)) with n = (1 + w) k/(1-delta).
    """
    spec = ChannelSpec(100, 0.2)
    n = 140
    tilt = chernoff_tilt(spec, n)

    def log_bound(s):
        return -s * n + log_mgf(spec, s)

    assert log_bound(tilt.s_star) == pytest.approx(tilt.log_bound, abs=1e-9)
    for shift in (-0.02, -0.005, 0.005, 0.02):
        assert log_bound(tilt.s_star + shift) > tilt.log_bound

    w = n / spec.mu - 1.0
    assert tilt.s_star == pytest.approx(math.log((1.0 + w / spec.delta) / (1.0 + w)), rel=1e-12)


def test_chernoff_below_the_mean_is_trivial(small_channel):
    """Test that for n <= k/(1-delta) the bound is 1 with zero tilt."""
    tilt = chernoff_tilt(small_channel, 7)
    assert (tilt.s_star, tilt.log_bound) == (0.0, 0.0)
    assert chernoff_tail(small_channel, 7) == 1.0


def test_chernoff_on_a_lossless_channel(lossless_channel):
    """Test that the tail above k is empty when nothing is erased."""
    assert chernoff_tail(lossless_channel, 6) == 0.0


def test_log_mgf_diverges_past_the_radius(small_channel):
    """Test that the MGF is only defined for delta * e^s < 1."""
    with pytest.raises(InvalidParameterError):
        log_mgf(small_channel, -math.log(small_channel.delta) + 0.01)


def test_beta_k_value_and_preconditions():
    """
    Test beta_k = exp(eta0/(1-delta)) sqrt(pi delta/(2k)) and its guards.
    """
    spec = ChannelSpec(1000, 0.25)
    expected = math.exp(0.1 / 0.75) * math.sqrt(math.pi * 0.25 / 2000.0)
    assert beta_k(spec, 0.1) == pytest.approx(expected, rel=1e-14)
    with pytest.raises(InvalidParameterError):
        beta_k(spec, 0.0)
    with pytest.raises(InvalidParameterError):
        beta_k(ChannelSpec(1000, 0.0), 0.1)


def test_max_of_one_is_the_delivery_time():
    """Test that with a single monitor the moments are those of X_k."""
    spec = ChannelSpec(100, 0.2)
    summary = nb_moments(spec)
    moments = max_nb_moments(spec, 1)
    assert moments.ey == pytest.approx(summary.mu_k, rel=1e-10)
    assert moments.ey2 == pytest.approx(summary.sigma2_k + summary.mu_k ** 2, rel=1e-10)


def test_max_moments_on_a_lossless_channel(lossless_channel):
    """Test that the maximum of deterministic delivery times is k."""
    moments = max_nb_moments(lossless_channel, 7)
    assert (moments.ey, moments.ey2) == (5.0, 25.0)
    assert moments.tail_bound == 0.0


def test_max_moments_certified_remainder():
    """
    Test that the reported remainder bounds really cover what the truncated
    sums leave out, and that they meet the requested tolerance.
    """
    spec = ChannelSpec(100, 0.2)
    moments = max_nb_moments(spec, 4, tol=1e-10)
    assert moments.tail_bound <= 1e-10 * moments.ey
    assert moments.tail_bound_sq <= 1e-10 * moments.ey2

    ys = np.arange(moments.truncation_point + 1, moments.truncation_point + 2000)
    terms = -np.expm1(4 * np.log1p(-nb_sf(spec, ys)))
    assert math.fsum(terms) <= moments.tail_bound
    assert math.fsum((2.0 * ys + 1.0) * terms) <= moments.tail_bound_sq


def test_max_moments_match_the_cdf_route():
    """
    Test E[Y] against a sum of 1 - F_k(y)^m built from the CDF table.
    """
    spec = ChannelSpec(30, 0.3)
    moments = max_nb_moments(spec, 8)
    ys = np.arange(spec.k, 600)
    cdf = nb_cdf_table(spec, 599)
    direct = spec.k + math.fsum(1.0 - cdf ** 8)
    assert moments.ey == pytest.approx(direct, rel=1e-9)
    assert max_nb_cdf(spec, 8, 50) == nb_cdf(spec, 50) ** 8
    assert ys[-1] > moments.truncation_point


def test_max_moments_match_monte_carlo():
    """
    Test (k=100, delta=0.2, m=4) against sample moments of simulated maxima.
    """
    spec = ChannelSpec(100, 0.2)
    moments = max_nb_moments(spec, 4)
    rng = np.random.default_rng(7)
    y = (rng.negative_binomial(100, 0.8, size=(400000, 4)) + 100).max(axis=1).astype(float)
    assert abs(y.mean() - moments.ey) <= 4 * y.std(ddof=1) / math.sqrt(len(y))
    y2 = y * y
    assert abs(y2.mean() - moments.ey2) <= 4 * y2.std(ddof=1) / math.sqrt(len(y2))


def test_max_moments_grow_with_the_number_of_monitors():
    """Test that E[Y] increases with m."""
    spec = ChannelSpec(50, 0.3)
    values = [max_nb_moments(spec, m).ey for m in (1, 2, 4, 16, 256)]
    assert values == sorted(values)
    assert len(set(values)) == len(values)


def test_max_moments_give_up_after_the_allowed_rounds(monkeypatch):
    """Test that TruncationError is raised when no round is allowed."""
    monkeypatch.setattr(config, "MAX_TRUNCATION_ROUNDS", 0)
    with pytest.raises(TruncationError):
        max_nb_moments(ChannelSpec(10, 0.3), 2)


def test_max_moments_validate_arguments(small_channel):
    """Test that m >= 1 and tol > 0 are enforced."""
    with pytest.raises(InvalidParameterError):
        max_nb_moments(small_channel, 0)
    with pytest.raises(InvalidParameterError):
        max_nb_moments(small_channel, 2, tol=0.0)


@pytest.mark.parametrize(
    "k,delta,x,expected",
    [(1, 0.5, 3, 0.125), (5, 0.0, 5, 1.0), (3, 0.2, 4, 0.3072)],
)
def test_pmf_examples(k, delta, x, expected):
    """Test hand-computed delivery-time probabilities."""
    assert nb_pmf(ChannelSpec(k, delta), x) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize(
    "k,delta,n,expected",
    [(5, 0.3, 4, 0.0), (5, 0.3, 5, 0.16807), (2, 0.5, 3, 0.5)],
)
def test_cdf_examples(k, delta, n, expected):
    """Test hand-computed decoding probabilities."""
    assert nb_cdf(ChannelSpec(k, delta), n) == pytest.approx(expected, rel=1e-13)


def test_moment_examples():
    """Test the mean and variance of a geometric and a long update."""
    geometric = nb_moments(ChannelSpec(1, 0.5))
    assert (geometric.mu_k, geometric.sigma2_k) == (2.0, 2.0)
    summary = nb_moments(ChannelSpec(1000, 0.1))
    assert summary.mu_k == pytest.approx(1111.1111111, rel=1e-9)
    assert summary.sigma2_k == pytest.approx(123.45679012, rel=1e-9)


def test_conditional_mean_examples():
    """Test mu_tilde at n = k+1 (kdelta = 3) and for a very long packet."""
    spec = ChannelSpec(10, 0.3)
    assert conditional_mean(spec, 11) == pytest.approx(10.75, rel=1e-13)
    assert conditional_mean(spec, 10000) == pytest.approx(10 / 0.7, abs=1e-9)


def test_max_moments_example_with_one_monitor():
    """Test (k=100, delta=0.2, m=1): E[Y] = 125 and E[Y^2] = 31.25 + 125^2."""
    moments = max_nb_moments(ChannelSpec(100, 0.2), 1, tol=1e-10)
    assert moments.ey == pytest.approx(125.0, rel=1e-10)
    assert moments.ey2 == pytest.approx(15656.25, rel=1e-10)


def test_chernoff_examples():
    """
    Test the Chernoff bound on a geometric tail and on a long update.
    """
    assert chernoff_tail(ChannelSpec(10, 0.3), 10) == 1.0
    assert chernoff_tail(ChannelSpec(1, 0.5), 20) >= 0.5 ** 19
    spec = ChannelSpec(100, 0.1)
    assert 1.0 - nb_cdf(spec, 129) <= chernoff_tail(spec, 130)


def test_beta_k_examples():
    """Test beta_k at two channels and its 1/sqrt(k) scaling."""
    spec = ChannelSpec(1000, 0.1)
    assert beta_k(spec, 0.1) == pytest.approx(0.014006, abs=5e-7)
    assert beta_k(ChannelSpec(4000, 0.1), 0.1) == pytest.approx(beta_k(spec, 0.1) / 2.0, rel=1e-13)
    assert beta_k(ChannelSpec(50, 0.4), 0.01) == pytest.approx(0.11398, abs=5e-6)


def test_cdf_reaches_one_and_its_complement_keeps_shrinking():
    """
    Test (k=20, delta=0.5) far into the tail: 1 - F_k(n) stays under the
    Chernoff bound, F_k reaches 1 exactly and never decreases, and the
    survival function keeps decreasing strictly.
    """
    spec = ChannelSpec(20, 0.5)
    for n in range(41, 221):
        assert 1.0 - nb_cdf(spec, n) <= chernoff_tail(spec, n)
    table = nb_cdf_table(spec, 220)
    assert table[-1] == 1.0
    assert np.all(np.diff(table) >= 0.0)
    tail = nb_sf(spec, np.arange(20, 221))
    assert np.all(np.diff(tail) < 0.0)
    assert tail[-1] == pytest.approx(stats.nbinom.sf(200, 20, 0.5), rel=1e-9)


def test_scalar_calls_share_cached_tables():
    """
    Test that a loop of single-point calls builds one table per size class
    instead of one per call.
    """
    spec = ChannelSpec(7, 0.35)
    negbin._cdf_table.cache_clear()
    for n in range(7, 508):
        nb_cdf(spec, n)
    assert negbin._cdf_table.cache_info().misses <= 4


@pytest.mark.filterwarnings("error::RuntimeWarning")
def test_max_moments_when_the_survival_rounds_to_one():
    """
    Test that P[X > k] = 1 in double precision (k=1000, delta=0.1) gives
    finite moments without a floating-point warning.
    """
    spec = ChannelSpec(1000, 0.1)
    assert nb_sf(spec, 1000) == 1.0
    moments = max_nb_moments(spec, 4, tol=1e-10)
    assert math.isfinite(moments.ey) and moments.ey > spec.mu
