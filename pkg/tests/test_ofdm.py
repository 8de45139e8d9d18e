import math

import numpy as np
import pytest

from rislink import (
    ConfigurationError,
    FrequencyChannel,
    OfdmParams,
    achievable_rate,
    composite_channel,
    noise_power,
)


def random_freq(k, n, seed):
    rng = np.random.default_rng(seed)
    direct = (rng.standard_normal(k) + 1j * rng.standard_normal(k)) / np.sqrt(2)
    cascade = (rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n))) / np.sqrt(2)
    return FrequencyChannel(direct=direct, cascade=cascade)


class TestCompositeChannel:
    def test_zero_surface_returns_direct(self):
        freq = random_freq(8, 3, 0)
        # all-zero test vector bypasses unit-modulus checks by design
        h = composite_channel(freq, np.zeros(3, complex))
        np.testing.assert_array_equal(h, freq.direct)

    def test_coherent_doubling_single_element(self):
        direct = np.abs(np.random.default_rng(1).standard_normal(6)) + 0j
        freq = FrequencyChannel(direct=direct, cascade=direct[:, None])
        h = composite_channel(freq, np.array([1.0 + 0j]))
        np.testing.assert_allclose(np.abs(h), 2 * np.abs(direct), rtol=1e-14)

    def test_matches_elementwise_summation(self):
        freq = random_freq(12, 5, 2)
        theta = np.exp(2j * np.pi * np.random.default_rng(3).random(5))
        h = composite_channel(freq, theta)
        for n in range(12):
            expected = freq.direct[n]
            for i in range(5):
                expected += freq.cascade[n, i] * theta[i]
            assert h[n] == pytest.approx(expected, rel=1e-12)

    def test_dimension_mismatch(self):
        freq = random_freq(8, 3, 0)
        with pytest.raises(ValueError):
            composite_channel(freq, np.ones(4, complex))


class TestNoisePower:
    def test_zero_db_identity(self):
        freq = random_freq(16, 2, 4)
        sigma2 = noise_power(freq, OfdmParams(num_subcarriers=16, ref_snr_db=0.0))
        assert sigma2 == pytest.approx(np.mean(np.abs(freq.direct) ** 2), rel=1e-14)

    def test_db_scaling(self):
        freq = random_freq(16, 2, 5)
        s0 = noise_power(freq, OfdmParams(num_subcarriers=16, ref_snr_db=0.0))
        s10 = noise_power(freq, OfdmParams(num_subcarriers=16, ref_snr_db=10.0))
        assert s0 / s10 == pytest.approx(10.0, rel=1e-12)

    def test_closed_form_half(self):
        freq = FrequencyChannel(direct=np.ones(8, complex), cascade=np.ones((8, 1), complex))
        sigma2 = noise_power(freq, OfdmParams(num_subcarriers=8, ref_snr_db=3.0103))
        assert sigma2 == pytest.approx(0.5, abs=1e-6)

    def test_zero_direct_rejected(self):
        freq = FrequencyChannel(direct=np.zeros(8, complex), cascade=np.ones((8, 1), complex))
        with pytest.raises(ValueError):
            noise_power(freq, OfdmParams(num_subcarriers=8))


class TestAchievableRate:
    def test_unit_snr_closed_form(self):
        params = OfdmParams(num_subcarriers=1000, cp_len=32, bandwidth=1e7, ref_snr_db=0.0)
        result = achievable_rate(np.ones(1000, complex), 1.0, params)
        expected = 10.0 * 1000 / 1032  # log2(2) = 1 on every subcarrier
        assert result.rate_mbps == pytest.approx(expected, rel=1e-12)
        assert abs(result.rate_mbps - 9.6899) < 1e-3

    def test_zero_channel(self):
        params = OfdmParams(num_subcarriers=64, cp_len=16)
        result = achievable_rate(np.zeros(64, complex), 1.0, params)
        assert result.rate_mbps == 0.0
        assert np.all(result.snr_per_subcarrier == 0.0)

    def test_matches_per_subcarrier_summation(self):
        rng = np.random.default_rng(6)
        k = 50
        h = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        sigma2 = 0.7
        params = OfdmParams(num_subcarriers=k, cp_len=8, bandwidth=5e6)
        result = achievable_rate(h, sigma2, params)
        acc = 0.0
        for n in range(k):
            acc += math.log2(1.0 + abs(h[n]) ** 2 / sigma2)
        expected = 1e-6 * (k / (k + 8)) * (5e6 / k) * acc
        assert result.rate_mbps == pytest.approx(expected, rel=1e-10)

    def test_monotone_in_channel_magnitude(self):
        rng = np.random.default_rng(7)
        params = OfdmParams(num_subcarriers=32, cp_len=4)
        for seed in range(5):
            gen = np.random.default_rng(seed)
            h = gen.standard_normal(32) + 1j * gen.standard_normal(32)
            boost = 1.0 + gen.random(32)  # elementwise magnitude increase
            r1 = achievable_rate(h, 1.3, params).rate_mbps
            r2 = achievable_rate(h * boost, 1.3, params).rate_mbps
            assert r2 >= r1

    def test_scaling_invariance(self):
        rng = np.random.default_rng(8)
        h = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        params = OfdmParams(num_subcarriers=64, cp_len=16)
        base = achievable_rate(h, 2.0, params).rate_mbps
        for g in (3.0, 0.01, 1.5 - 2.5j):
            scaled = achievable_rate(h * g, 2.0 * abs(g) ** 2, params).rate_mbps
            assert scaled == pytest.approx(base, rel=1e-12)

    def test_cp_overhead_factor(self):
        rng = np.random.default_rng(9)
        h = rng.standard_normal(128) + 1j * rng.standard_normal(128)
        with_cp = achievable_rate(h, 1.0, OfdmParams(num_subcarriers=128, cp_len=32))
        no_cp = achievable_rate(h, 1.0, OfdmParams(num_subcarriers=128, cp_len=0))
        assert no_cp.rate_mbps / with_cp.rate_mbps == pytest.approx(160 / 128, rel=1e-12)

    def test_bad_inputs(self):
        params = OfdmParams(num_subcarriers=8)
        with pytest.raises(ValueError):
            achievable_rate(np.ones(8, complex), 0.0, params)
        with pytest.raises(ValueError):
            achievable_rate(np.ones(9, complex), 1.0, params)
        with pytest.raises(ConfigurationError):
            OfdmParams(num_subcarriers=0)
        with pytest.raises(ConfigurationError):
            OfdmParams(bandwidth=-1.0)
