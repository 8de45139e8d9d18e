"""Radio channel synthesis for the BS -> RIS-on-UAV -> IoT downlink.

The base station reaches the IoT device over two routes: a non-line-of-sight
direct link, modelled as a random tapped delay line with an exponential power
decay profile, and a line-of-sight cascaded link bouncing off the reflective
panel carried by the UAV.  Both are generated in the time domain and converted
to per-subcarrier frequency responses for the OFDM rate computation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import ConfigurationError, check_rng

SPEED_OF_LIGHT = 3e8  # m/s


@dataclass(frozen=True)
class SystemGeometry:
    """3-D positions of the three nodes plus the reflective panel layout.

    Positions are in meters.  ``element_spacing=None`` resolves to half a
    wavelength at ``carrier_freq``.  ``panel_normal`` names the axis the panel
    face is perpendicular to ("z" keeps the elements in the horizontal plane).
    """

    bs_pos: tuple = (20.0, -300.0, 0.0)
    uav_pos: tuple = (0.0, 0.0, 100.0)
    iot_pos: tuple = (20.0, 0.0, 0.0)
    carrier_freq: float = 2e9
    element_spacing: float | None = None
    panel_normal: str = "z"

    def __post_init__(self):
        for name in ("bs_pos", "uav_pos", "iot_pos"):
            pos = np.asarray(getattr(self, name), dtype=float)
            if pos.shape != (3,) or not np.all(np.isfinite(pos)):
                raise ConfigurationError(f"{name} must be a finite 3-vector")
            object.__setattr__(self, name, tuple(pos.tolist()))
        pairs = [("bs_pos", "uav_pos"), ("bs_pos", "iot_pos"), ("uav_pos", "iot_pos")]
        for a, b in pairs:
            if np.allclose(getattr(self, a), getattr(self, b)):
                raise ConfigurationError(f"{a} and {b} must be distinct positions")
        if not self.carrier_freq > 0:
            raise ConfigurationError("carrier_freq must be > 0")
        if self.element_spacing is not None and not self.element_spacing > 0:
            raise ConfigurationError("element_spacing must be > 0")
        if self.panel_normal not in ("x", "y", "z"):
            raise ConfigurationError("panel_normal must be one of 'x', 'y', 'z'")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_freq

    @property
    def spacing(self) -> float:
        """Element pitch in meters (half wavelength unless overridden)."""
        if self.element_spacing is not None:
            return self.element_spacing
        return 0.5 * self.wavelength


@dataclass(frozen=True)
class ChannelParams:
    """Tap-channel and OFDM dimensioning parameters.

    ``nlos_excess_db`` is the extra attenuation of the blocked direct link on
    top of free-space path loss; it sets the average direct tap power.
    """

    num_taps: int = 23
    cp_len: int = 32
    decay_const: float = 8.0
    bandwidth: float = 1e7
    num_subcarriers: int = 1000
    num_elements: int = 400
    nlos_excess_db: float = 65.0

    def __post_init__(self):
        if not 1 <= self.num_taps <= self.cp_len <= self.num_subcarriers:
            raise ConfigurationError(
                "need 1 <= num_taps <= cp_len <= num_subcarriers, got "
                f"{self.num_taps}, {self.cp_len}, {self.num_subcarriers}"
            )
        if not self.decay_const > 0:
            raise ConfigurationError("decay_const must be > 0")
        if not self.bandwidth > 0:
            raise ConfigurationError("bandwidth must be > 0")
        if self.num_elements < 1:
            raise ConfigurationError("num_elements must be >= 1")
        if not np.isfinite(self.nlos_excess_db):
            raise ConfigurationError("nlos_excess_db must be finite")


@dataclass(frozen=True)
class ChannelRealization:
    """One Monte-Carlo draw of all links, in the time domain.

    ``tap_delays``/``tap_gains`` hold the random direct taps; ``cascade_gains``
    holds the frequency-flat per-element BS->element->IoT product gains.
    """

    tap_delays: np.ndarray
    tap_gains: np.ndarray
    cascade_gains: np.ndarray
    cascade_delay: int = 0
    rng_seed: int | None = None

    def __post_init__(self):
        delays = np.asarray(self.tap_delays, dtype=np.int64)
        gains = np.asarray(self.tap_gains, dtype=np.complex128)
        cascade = np.asarray(self.cascade_gains, dtype=np.complex128)
        if delays.ndim != 1 or delays.shape != gains.shape:
            raise ValueError("tap_delays and tap_gains must be matching 1-D arrays")
        if delays.size and np.any(np.diff(delays) <= 0):
            raise ValueError("tap delays must be strictly increasing")
        if delays.size and delays[0] < 0:
            raise ValueError("tap delays must be non-negative")
        if cascade.ndim != 1 or cascade.size < 1:
            raise ValueError("cascade_gains must be a non-empty 1-D array")
        object.__setattr__(self, "tap_delays", delays)
        object.__setattr__(self, "tap_gains", gains)
        object.__setattr__(self, "cascade_gains", cascade)

    @property
    def num_elements(self) -> int:
        return self.cascade_gains.size


@dataclass(frozen=True)
class FrequencyChannel:
    """Per-subcarrier view: direct response (K,) and cascade matrix (K, N)."""

    direct: np.ndarray
    cascade: np.ndarray

    def __post_init__(self):
        direct = np.asarray(self.direct, dtype=np.complex128)
        cascade = np.asarray(self.cascade, dtype=np.complex128)
        if direct.ndim != 1 or cascade.ndim != 2:
            raise ValueError("direct must be 1-D and cascade 2-D")
        if cascade.shape[0] != direct.shape[0]:
            raise ValueError("direct and cascade disagree on subcarrier count")
        object.__setattr__(self, "direct", direct)
        object.__setattr__(self, "cascade", cascade)

    @property
    def num_subcarriers(self) -> int:
        return self.direct.size

    @property
    def num_elements(self) -> int:
        return self.cascade.shape[1]


def path_loss_fspl(distance, freq):
    """Free-space path loss in dB: 20*log10(4*pi*d*f/c).

    Accepts scalars or arrays; the corresponding amplitude gain used by the
    channel generators is ``10**(-dB/20)``.
    """
    distance = np.asarray(distance, dtype=float)
    freq = np.asarray(freq, dtype=float)
    if np.any(distance <= 0):
        raise ValueError("distance must be > 0")
    if np.any(freq <= 0):
        raise ValueError("freq must be > 0")
    loss = (
        20.0 * np.log10(distance)
        + 20.0 * np.log10(freq)
        + 20.0 * np.log10(4.0 * np.pi / SPEED_OF_LIGHT)
    )
    return float(loss) if loss.ndim == 0 else loss


def fspl_amplitude(distance, freq):
    """Amplitude gain of an unobstructed link: 10**(-FSPL_dB/20)."""
    return 10.0 ** (-np.asarray(path_loss_fspl(distance, freq)) / 20.0)


_PLANE_AXES = {"z": (0, 1), "y": (0, 2), "x": (1, 2)}


def element_positions(geometry: SystemGeometry, n_elements: int) -> np.ndarray:
    """Positions of the reflective elements as an (N, 3) array.

    The elements sit on a ceil(sqrt(N)) x ceil(sqrt(N)) grid centered on the
    UAV position, truncated row-major to N, with ``geometry.spacing`` pitch in
    the plane perpendicular to ``geometry.panel_normal``.
    """
    if n_elements < 1:
        raise ValueError("n_elements must be >= 1")
    side = int(np.ceil(np.sqrt(n_elements)))
    offsets = (np.arange(side) - (side - 1) / 2.0) * geometry.spacing
    first, second = np.meshgrid(offsets, offsets, indexing="ij")
    ax_a, ax_b = _PLANE_AXES[geometry.panel_normal]
    points = np.tile(np.asarray(geometry.uav_pos, dtype=float), (side * side, 1))
    points[:, ax_a] += first.ravel()
    points[:, ax_b] += second.ravel()
    return points[:n_elements]


def tap_variance_profile(delays, params: ChannelParams, avg_power_db: float) -> np.ndarray:
    """Per-tap variances for the given delays under the exponential profile.

    The profile weight at delay tau is exp(-tau/decay_const), scaled so the
    expected total power over a random draw of ``num_taps`` delays equals
    10**(avg_power_db/10).  Scaling by the draw-averaged profile mass (rather
    than per-draw) keeps the variance at each delay exactly proportional to
    the profile.
    """
    delays = np.asarray(delays, dtype=float)
    target = 10.0 ** (float(avg_power_db) / 10.0)
    all_weights = np.exp(-np.arange(params.cp_len) / params.decay_const)
    expected_mass = (params.num_taps / params.cp_len) * all_weights.sum()
    return target * np.exp(-delays / params.decay_const) / expected_mass


def gen_direct_channel(
    params: ChannelParams, avg_power_db: float, rng
) -> tuple[np.ndarray, np.ndarray]:
    """Draw the NLoS direct link: random tap delays with Rayleigh gains.

    Returns ``(delays, gains)`` with ``num_taps`` distinct delays drawn
    uniformly without replacement from [0, cp_len), sorted, and
    circularly-symmetric complex Gaussian gains following the exponential
    power decay profile.
    """
    if not np.isfinite(avg_power_db):
        raise ValueError("avg_power_db must be finite")
    if params.num_taps > params.cp_len:
        raise ConfigurationError("num_taps must not exceed cp_len")
    rng = check_rng(rng)
    delays = np.sort(rng.choice(params.cp_len, size=params.num_taps, replace=False))
    variances = tap_variance_profile(delays, params, avg_power_db)
    scale = np.sqrt(variances / 2.0)
    gains = scale * (
        rng.standard_normal(params.num_taps) + 1j * rng.standard_normal(params.num_taps)
    )
    return delays.astype(np.int64), gains


def gen_cascaded_channel(
    geometry: SystemGeometry, params: ChannelParams, rng=None
) -> tuple[np.ndarray, int]:
    """Deterministic LoS cascade: per-element BS->element->IoT product gains.

    Element i contributes ``(1/sqrt(N)) * A1_i * A2_i * exp(-j*2*pi*(d1_i+d2_i)/lambda)``
    with per-hop FSPL amplitudes evaluated at the element's own distances.  The
    1/sqrt(N) factor fixes the aggregate reflected-power budget so aperture gain
    does not grow with the element count.  ``rng`` is accepted for generator
    interface symmetry but never consumed (pure LoS, no fading); the cascade is
    mapped to sample delay 0.
    """
    n = params.num_elements
    positions = element_positions(geometry, n)
    bs = np.asarray(geometry.bs_pos)
    iot = np.asarray(geometry.iot_pos)
    d1 = np.linalg.norm(positions - bs, axis=1)
    d2 = np.linalg.norm(positions - iot, axis=1)
    if np.any(d1 <= 0) or np.any(d2 <= 0):
        raise ValueError("geometry is degenerate: a node coincides with the panel")
    amp = fspl_amplitude(d1, geometry.carrier_freq) * fspl_amplitude(d2, geometry.carrier_freq)
    phase = np.exp(-2j * np.pi * (d1 + d2) / geometry.wavelength)
    gains = amp * phase / np.sqrt(n)
    return gains, 0


def direct_avg_power_db(geometry: SystemGeometry, params: ChannelParams) -> float:
    """Average direct-link power in dB: -(FSPL(BS-IoT) + NLoS excess)."""
    d = float(np.linalg.norm(np.asarray(geometry.bs_pos) - np.asarray(geometry.iot_pos)))
    return -(path_loss_fspl(d, geometry.carrier_freq) + params.nlos_excess_db)


def realize_channel(
    geometry: SystemGeometry, params: ChannelParams, seed: int
) -> ChannelRealization:
    """Draw one complete channel realization from an integer seed."""
    rng = np.random.default_rng(seed)
    delays, gains = gen_direct_channel(params, direct_avg_power_db(geometry, params), rng)
    cascade, cascade_delay = gen_cascaded_channel(geometry, params)
    return ChannelRealization(
        tap_delays=delays,
        tap_gains=gains,
        cascade_gains=cascade,
        cascade_delay=cascade_delay,
        rng_seed=int(seed),
    )


def to_frequency_domain(realization: ChannelRealization, num_subcarriers: int) -> FrequencyChannel:
    """DFT the tap channel onto a K-point subcarrier grid.

    ``H_d[n] = sum_l gain_l * exp(-j*2*pi*n*tau_l/K)`` and the cascade matrix
    carries each element's flat gain rotated by the (zero) cascade delay.
    """
    k = int(num_subcarriers)
    if k < 1:
        raise ValueError("num_subcarriers must be >= 1")
    if realization.tap_delays.size and realization.tap_delays.max() >= k:
        raise ValueError("tap delay exceeds the subcarrier grid size")
    if realization.cascade_delay >= k:
        raise ValueError("cascade delay exceeds the subcarrier grid size")
    n = np.arange(k)
    twiddle = np.exp(-2j * np.pi * np.outer(n, realization.tap_delays) / k)
    direct = twiddle @ realization.tap_gains
    ramp = np.exp(-2j * np.pi * n * realization.cascade_delay / k)
    cascade = ramp[:, None] * realization.cascade_gains[None, :]
    return FrequencyChannel(direct=direct, cascade=cascade)
