import math

import numpy as np
import pytest

from rislink import (
    ChannelParams,
    ChannelRealization,
    ConfigurationError,
    SystemGeometry,
    element_positions,
    fspl_amplitude,
    gen_cascaded_channel,
    gen_direct_channel,
    path_loss_fspl,
    realize_channel,
    tap_variance_profile,
    to_frequency_domain,
)

BS_UAV_DIST = 316.86
UAV_IOT_DIST = 101.98


def fspl_oracle(distance, freq):
    # independent closed-form evaluation of free-space path loss
    return 20.0 * math.log10(4.0 * math.pi * distance * freq / 3e8)


class TestPathLoss:
    def test_scenario_distances(self):
        got = path_loss_fspl(BS_UAV_DIST, 2e9)
        assert got == pytest.approx(fspl_oracle(BS_UAV_DIST, 2e9), rel=1e-12)
        assert abs(got - 88.48) < 5e-3

        got = path_loss_fspl(UAV_IOT_DIST, 2e9)
        assert got == pytest.approx(fspl_oracle(UAV_IOT_DIST, 2e9), rel=1e-12)
        assert abs(got - 78.63) < 5e-3

    def test_distance_doubling_identity(self):
        for d in (1.0, 37.5, 300.0, 1e4):
            diff = path_loss_fspl(2 * d, 2e9) - path_loss_fspl(d, 2e9)
            assert diff == pytest.approx(20.0 * math.log10(2.0), abs=1e-12)

    def test_amplitude_gain_relation(self):
        amp = fspl_amplitude(300.0, 2e9)
        assert amp == pytest.approx(10.0 ** (-path_loss_fspl(300.0, 2e9) / 20.0), rel=1e-14)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            path_loss_fspl(0.0, 2e9)
        with pytest.raises(ValueError):
            path_loss_fspl(-5.0, 2e9)
        with pytest.raises(ValueError):
            path_loss_fspl(100.0, 0.0)

    def test_vectorized(self):
        out = path_loss_fspl(np.array([100.0, 200.0]), 2e9)
        assert out.shape == (2,)


class TestGeometry:
    def test_defaults_match_scenario(self):
        g = SystemGeometry()
        assert g.bs_pos == (20.0, -300.0, 0.0)
        assert g.uav_pos == (0.0, 0.0, 100.0)
        assert g.iot_pos == (20.0, 0.0, 0.0)
        assert g.carrier_freq == 2e9
        # half-wavelength pitch at 2 GHz
        assert g.spacing == pytest.approx(0.075)

    def test_coincident_positions_rejected(self):
        with pytest.raises(ConfigurationError):
            SystemGeometry(bs_pos=(0, 0, 0), uav_pos=(0, 0, 0))

    def test_bad_scalars_rejected(self):
        with pytest.raises(ConfigurationError):
            SystemGeometry(carrier_freq=0.0)
        with pytest.raises(ConfigurationError):
            SystemGeometry(element_spacing=-1.0)
        with pytest.raises(ConfigurationError):
            SystemGeometry(panel_normal="w")


class TestElementPositions:
    def test_single_element_at_center(self):
        g = SystemGeometry()
        pts = element_positions(g, 1)
        assert pts.shape == (1, 3)
        np.testing.assert_allclose(pts[0], g.uav_pos)

    def test_2x2_grid_spacing(self):
        g = SystemGeometry(element_spacing=0.4)
        pts = element_positions(g, 4)
        dists = np.array(
            [np.linalg.norm(pts[i] - pts[j]) for i in range(4) for j in range(i + 1, 4)]
        )
        assert np.min(dists) == pytest.approx(0.4)

    def test_centroid_n400(self):
        g = SystemGeometry()
        pts = element_positions(g, 400)
        centroid = pts.mean(axis=0)
        assert np.max(np.abs(centroid - np.asarray(g.uav_pos))) < 1e-9

    def test_row_major_truncation(self):
        g = SystemGeometry(element_spacing=1.0)
        pts = element_positions(g, 5)  # 3x3 grid truncated
        assert pts.shape == (5, 3)
        # first three points share the first-axis offset (one full row)
        assert np.ptp(pts[:3, 0]) == pytest.approx(0.0)
        assert np.ptp(pts[:3, 1]) == pytest.approx(2.0)

    def test_panel_normal_controls_plane(self):
        g = SystemGeometry(panel_normal="x")
        pts = element_positions(g, 16)
        assert np.ptp(pts[:, 0]) == 0.0  # x held fixed
        assert np.ptp(pts[:, 1]) > 0 and np.ptp(pts[:, 2]) > 0

    def test_rejects_nonpositive_count(self):
        with pytest.raises(ValueError):
            element_positions(SystemGeometry(), 0)


class TestDirectChannel:
    def test_defaults_tap_layout(self):
        params = ChannelParams()
        delays, gains = gen_direct_channel(params, 0.0, np.random.default_rng(0))
        assert delays.size == 23 and gains.size == 23
        assert delays.min() >= 0 and delays.max() < 32
        assert np.all(np.diff(delays) > 0)

    def test_infinite_decay_gives_flat_profile(self):
        params = ChannelParams(decay_const=np.inf)
        var = tap_variance_profile(np.arange(32), params, 0.0)
        assert np.allclose(var, var[0])

    def test_total_power_matches_target(self):
        params = ChannelParams()
        target_db = 3.0
        rng = np.random.default_rng(42)
        total = 0.0
        n_draws = 10_000
        for _ in range(n_draws):
            _, gains = gen_direct_channel(params, target_db, rng)
            total += np.sum(np.abs(gains) ** 2)
        mean_power = total / n_draws
        assert mean_power == pytest.approx(10.0 ** (target_db / 10.0), rel=0.02)

    def test_plus_3db_doubles_mean_power(self):
        params = ChannelParams()
        n_draws = 10_000
        totals = []
        for offset, power_db in ((0, 0.0), (1, 3.0103)):
            rng = np.random.default_rng(777 + offset)
            acc = 0.0
            for _ in range(n_draws):
                _, gains = gen_direct_channel(params, power_db, rng)
                acc += np.sum(np.abs(gains) ** 2)
            totals.append(acc / n_draws)
        assert totals[1] / totals[0] == pytest.approx(2.0, rel=0.02)

    def test_empirical_pdp_shape(self):
        params = ChannelParams()
        rng = np.random.default_rng(5)
        power = np.zeros(params.cp_len)
        counts = np.zeros(params.cp_len)
        for _ in range(10_000):
            delays, gains = gen_direct_channel(params, 0.0, rng)
            power[delays] += np.abs(gains) ** 2
            counts[delays] += 1
        empirical = power / counts
        profile = np.exp(-np.arange(params.cp_len) / params.decay_const)
        scale = empirical.sum() / profile.sum()
        np.testing.assert_allclose(empirical, scale * profile, rtol=0.05)

    def test_determinism(self):
        params = ChannelParams()
        d1, g1 = gen_direct_channel(params, -10.0, np.random.default_rng(123))
        d2, g2 = gen_direct_channel(params, -10.0, np.random.default_rng(123))
        assert np.array_equal(d1, d2) and np.array_equal(g1, g2)

    def test_bad_inputs(self):
        with pytest.raises(ConfigurationError):
            ChannelParams(num_taps=40, cp_len=32)
        with pytest.raises(ValueError):
            gen_direct_channel(ChannelParams(), np.nan, np.random.default_rng(0))


class TestCascadedChannel:
    def test_single_element_amplitude(self):
        g = SystemGeometry()
        params = ChannelParams(num_elements=1)
        gains, delay = gen_cascaded_channel(g, params)
        assert delay == 0
        # oracle: per-hop FSPL amplitudes at the exact element distances
        d1 = np.linalg.norm(np.array(g.uav_pos) - np.array(g.bs_pos))
        d2 = np.linalg.norm(np.array(g.uav_pos) - np.array(g.iot_pos))
        a1 = 10 ** (-fspl_oracle(d1, g.carrier_freq) / 20)
        a2 = 10 ** (-fspl_oracle(d2, g.carrier_freq) / 20)
        assert abs(gains[0]) == pytest.approx(a1 * a2, rel=1e-12)

    def test_far_field_amplitude_spread(self):
        gains, _ = gen_cascaded_channel(SystemGeometry(), ChannelParams(num_elements=400))
        mags = np.abs(gains)
        assert mags.max() / mags.min() - 1.0 < 0.01

    def test_power_budget_normalization(self):
        g = SystemGeometry()
        small, _ = gen_cascaded_channel(g, ChannelParams(num_elements=100))
        large, _ = gen_cascaded_channel(g, ChannelParams(num_elements=200))
        ratio = np.mean(np.abs(small)) / np.mean(np.abs(large))
        assert ratio == pytest.approx(np.sqrt(2.0), rel=0.01)

    def test_rng_purity(self):
        g = SystemGeometry()
        params = ChannelParams(num_elements=16)
        rng = np.random.default_rng(9)
        state_before = rng.bit_generator.state
        gains_with_rng, _ = gen_cascaded_channel(g, params, rng)
        assert rng.bit_generator.state == state_before
        gains_without, _ = gen_cascaded_channel(g, params)
        assert np.array_equal(gains_with_rng, gains_without)

    def test_degenerate_geometry(self):
        # IoT device placed exactly on one grid element
        g = SystemGeometry(element_spacing=0.075, iot_pos=(-0.0375, -0.0375, 100.0))
        with pytest.raises(ValueError):
            gen_cascaded_channel(g, ChannelParams(num_elements=4))


class TestFrequencyDomain:
    def test_single_tap_flat(self):
        real = ChannelRealization(
            tap_delays=[0], tap_gains=[1.0 + 0j], cascade_gains=[0.5 + 0j]
        )
        freq = to_frequency_domain(real, 16)
        np.testing.assert_allclose(freq.direct, np.ones(16))

    def test_single_delayed_tap_unit_magnitude(self):
        real = ChannelRealization(
            tap_delays=[5], tap_gains=[1.0 + 0j], cascade_gains=[1.0 + 0j]
        )
        freq = to_frequency_domain(real, 32)
        np.testing.assert_allclose(np.abs(freq.direct), np.ones(32), rtol=1e-12)

    def test_parseval_against_direct_summation(self):
        params = ChannelParams(num_taps=8, cp_len=12, num_subcarriers=16)
        delays, gains = gen_direct_channel(params, 0.0, np.random.default_rng(3))
        real = ChannelRealization(
            tap_delays=delays, tap_gains=gains, cascade_gains=np.ones(2, complex)
        )
        k = 16
        freq = to_frequency_domain(real, k)
        # oracle: naive double loop over subcarriers and taps
        expected = np.zeros(k, dtype=complex)
        for n in range(k):
            for delay, gain in zip(delays, gains):
                expected[n] += gain * np.exp(-2j * np.pi * n * delay / k)
        np.testing.assert_allclose(freq.direct, expected, rtol=1e-12)
        total = np.sum(np.abs(freq.direct) ** 2)
        assert total == pytest.approx(k * np.sum(np.abs(gains) ** 2), rel=1e-9)

    @pytest.mark.parametrize("k", [32, 64, 200, 1000])
    def test_parseval_property(self, k):
        params = ChannelParams()
        for seed in range(5):
            real = realize_channel(SystemGeometry(), params, seed)
            freq = to_frequency_domain(real, k)
            total = np.sum(np.abs(freq.direct) ** 2)
            tap_power = np.sum(np.abs(real.tap_gains) ** 2)
            assert total == pytest.approx(k * tap_power, rel=1e-9)

    def test_delay_beyond_grid_rejected(self):
        real = ChannelRealization(
            tap_delays=[40], tap_gains=[1.0 + 0j], cascade_gains=[1.0 + 0j]
        )
        with pytest.raises(ValueError):
            to_frequency_domain(real, 32)


class TestRealizeChannel:
    def test_determinism(self):
        g, p = SystemGeometry(), ChannelParams()
        a = realize_channel(g, p, 42)
        b = realize_channel(g, p, 42)
        assert np.array_equal(a.tap_delays, b.tap_delays)
        assert np.array_equal(a.tap_gains, b.tap_gains)
        assert np.array_equal(a.cascade_gains, b.cascade_gains)
        assert a.rng_seed == 42

    def test_shapes(self):
        real = realize_channel(SystemGeometry(), ChannelParams(num_elements=64), 0)
        assert real.num_elements == 64
        assert real.tap_delays.size == 23
        assert real.cascade_delay == 0

    def test_invariants_enforced(self):
        with pytest.raises(ValueError):
            ChannelRealization(
                tap_delays=[3, 3], tap_gains=[1j, 1j], cascade_gains=[1.0 + 0j]
            )
