"""Per-subcarrier SNR and achievable rate for a configured surface."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import FrequencyChannel
from .validation import ConfigurationError, as_complex_array


@dataclass(frozen=True)
class OfdmParams:
    """OFDM dimensioning plus the reference average SNR of the direct link."""

    num_subcarriers: int = 1000
    cp_len: int = 32
    bandwidth: float = 1e7
    ref_snr_db: float = 10.0

    def __post_init__(self):
        if self.num_subcarriers < 1:
            raise ConfigurationError("num_subcarriers must be >= 1")
        if self.cp_len < 0:
            raise ConfigurationError("cp_len must be >= 0")
        if not self.bandwidth > 0:
            raise ConfigurationError("bandwidth must be > 0")
        if not np.isfinite(self.ref_snr_db):
            raise ConfigurationError("ref_snr_db must be finite")


@dataclass(frozen=True)
class RateResult:
    rate_mbps: float
    snr_per_subcarrier: np.ndarray


def composite_channel(freq: FrequencyChannel, theta) -> np.ndarray:
    """Combined response H[n] = direct[n] + sum_i cascade[n, i] * theta[i].

    ``theta`` is not checked for unit modulus here so test vectors (e.g. an
    all-zero surface) can be pushed through.
    """
    theta = as_complex_array(theta, "theta", ndim=1)
    if theta.size != freq.num_elements:
        raise ValueError(
            f"theta has {theta.size} coefficients but the channel has "
            f"{freq.num_elements} elements"
        )
    return freq.direct + freq.cascade @ theta


def noise_power(freq: FrequencyChannel, params: OfdmParams) -> float:
    """Noise variance that puts the direct link at the reference average SNR."""
    mean_power = float(np.mean(np.abs(freq.direct) ** 2))
    if mean_power == 0.0:
        raise ValueError("direct channel is identically zero; reference SNR undefined")
    return mean_power / 10.0 ** (params.ref_snr_db / 10.0)


def achievable_rate(h, sigma2: float, params: OfdmParams) -> RateResult:
    """Sum-rate in Mbit/s over the subcarrier grid, including CP overhead.

    rate = 1e-6 * (K/(K+cp)) * (B/K) * sum_n log2(1 + |H_n|^2 / sigma2)
    """
    h = as_complex_array(h, "h", ndim=1)
    if not sigma2 > 0:
        raise ValueError("sigma2 must be > 0")
    if h.size != params.num_subcarriers:
        raise ValueError(
            f"h has {h.size} entries but params specify {params.num_subcarriers} subcarriers"
        )
    snr = np.abs(h) ** 2 / sigma2
    k = params.num_subcarriers
    cp_factor = k / (k + params.cp_len)
    rate_mbps = 1e-6 * cp_factor * (params.bandwidth / k) * float(np.sum(np.log2(1.0 + snr)))
    return RateResult(rate_mbps=rate_mbps, snr_per_subcarrier=snr)
