"""System configuration and Rayleigh-faded channel gain sampling.

The downlink has a base station with ``n_bs`` antennas, a primary user with
``m_pu`` antennas and a secondary user with ``k_su`` antennas.  Only squared
channel magnitudes matter downstream, so a channel realization is a pair of
nonnegative gain matrices whose entries are i.i.d. exponential:
``h[n, m] ~ Exp(omega_h)`` and ``g[n, k] ~ Exp(omega_g)`` (rate
parameterization, mean ``1/omega``).

Sampling is driven by counter-based Philox substreams so that the draws for
trial ``t`` are a pure function of ``(master_seed, purpose, point, t)``.
Results are therefore independent of how trials are batched into blocks or
spread across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ConfigurationError",
    "SystemConfig",
    "LinkBudget",
    "ChannelRealization",
    "TrialStream",
    "CHANNEL_PURPOSE",
    "SELECTION_PURPOSE",
    "derive_config",
    "transmit_snr",
    "sample_channels",
    "sample_gain_block",
]

# Substream purposes.  Channel gains and the random-selection scheme's
# antenna draws come from disjoint substreams so that adding or removing a
# scheme never perturbs the channel sequence.
CHANNEL_PURPOSE = 1
SELECTION_PURPOSE = 2


class ConfigurationError(ValueError):
    """Raised for invalid or non-finite system parameters."""


@dataclass(frozen=True)
class SystemConfig:
    """Immutable parameter set for one experiment.

    ``omega_h`` and ``omega_g`` are the exponential rate parameters of the
    per-antenna gains (the reciprocal of the mean gain).  Thresholds are
    linear-scale SINR/SNR values.
    """

    n_bs: int
    m_pu: int
    k_su: int
    omega_h: float
    omega_g: float
    gamma_p_th: float
    gamma_s_th: float

    def __post_init__(self) -> None:
        for name in ("n_bs", "m_pu", "k_su"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ConfigurationError(f"{name} must be an integer >= 1, got {v!r}")
        for name in ("omega_h", "omega_g", "gamma_p_th", "gamma_s_th"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ConfigurationError(f"{name} must be finite and > 0, got {v!r}")

    @property
    def gains_per_trial(self) -> int:
        return self.n_bs * (self.m_pu + self.k_su)


@dataclass(frozen=True)
class LinkBudget:
    """Distances, path loss and power levels defining the link geometry."""

    d_p: float
    d_s: float
    epsilon: float
    noise_power_dbm: float
    tx_power_dbm: float

    def __post_init__(self) -> None:
        for name in ("d_p", "d_s", "epsilon"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ConfigurationError(f"{name} must be finite and > 0, got {v!r}")
        for name in ("noise_power_dbm", "tx_power_dbm"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigurationError(f"{name} must be finite")


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of the gain matrices: ``h`` is (N, M), ``g`` is (N, K)."""

    h: np.ndarray
    g: np.ndarray

    def __post_init__(self) -> None:
        if self.h.ndim != 2 or self.g.ndim != 2 or self.h.shape[0] != self.g.shape[0]:
            raise ConfigurationError(
                f"gain matrices must be 2-D with a shared first axis, "
                f"got {self.h.shape} and {self.g.shape}"
            )
        if (self.h < 0).any() or (self.g < 0).any():
            raise ConfigurationError("channel gains must be nonnegative")


def path_loss_rate(distance_m: float, epsilon: float) -> float:
    """Exponential rate parameter ``d**epsilon`` implied by the distance model."""
    try:
        rate = distance_m**epsilon
    except OverflowError:
        raise ConfigurationError(
            f"path loss {distance_m!r}**{epsilon!r} overflows"
        ) from None
    if not (math.isfinite(rate) and rate > 0):
        raise ConfigurationError(
            f"path loss d**epsilon = {rate!r} is not a positive finite rate"
        )
    return rate


def transmit_snr(tx_power_dbm: float, noise_power_dbm: float) -> float:
    """Linear transmit SNR from power levels in dBm.

    Both powers convert as ``x dBm = 10**(x/10) mW``, so the ratio reduces to
    a single dB difference.
    """
    rho = 10.0 ** ((tx_power_dbm - noise_power_dbm) / 10.0)
    if not (math.isfinite(rho) and rho > 0):
        raise ConfigurationError(f"transmit SNR {rho!r} is not positive and finite")
    return rho


def derive_config(
    budget: LinkBudget,
    antennas: tuple[int, int, int],
    thresholds: tuple[float, float],
) -> tuple[SystemConfig, float]:
    """Build a :class:`SystemConfig` plus the linear transmit SNR.

    The gain rates come from the distance model (``omega = d**epsilon``) and
    the transmit SNR from the dBm difference of transmit and noise power.
    """
    n_bs, m_pu, k_su = antennas
    gamma_p_th, gamma_s_th = thresholds
    config = SystemConfig(
        n_bs=n_bs,
        m_pu=m_pu,
        k_su=k_su,
        omega_h=path_loss_rate(budget.d_p, budget.epsilon),
        omega_g=path_loss_rate(budget.d_s, budget.epsilon),
        gamma_p_th=gamma_p_th,
        gamma_s_th=gamma_s_th,
    )
    return config, transmit_snr(budget.tx_power_dbm, budget.noise_power_dbm)


def _inverse_cdf_exponential(u: np.ndarray, rate: float) -> np.ndarray:
    # Inverse-CDF sampling; 1-u is uniform on (0, 1] so the log argument
    # never hits zero.
    return -np.log1p(-u) / rate


@dataclass(frozen=True)
class TrialStream:
    """Counter-based random substream addressed by trial index.

    Each trial owns a fixed window of ``doubles_per_trial`` uniform draws
    (rounded up to the Philox block size of 4), so ``uniforms(start, count)``
    returns the same values no matter how a range of trials is split into
    calls.
    """

    master_seed: int
    purpose: int
    point_index: int
    doubles_per_trial: int
    scheme_tag: int | None = None

    def _key(self) -> np.random.SeedSequence:
        # SeedSequence zero-pads its entropy pool, so a fixed-length tuple is
        # used with 0 reserved for "no scheme" to keep all keys distinct.
        tag = 0 if self.scheme_tag is None else self.scheme_tag + 1
        entropy = (
            self.master_seed & 0xFFFFFFFFFFFFFFFF,
            self.purpose,
            self.point_index,
            tag,
        )
        return np.random.SeedSequence(entropy=entropy)

    def uniforms(self, start_trial: int, count: int) -> np.ndarray:
        """Uniform(0,1) draws for trials ``start_trial .. start_trial+count-1``.

        Returns an array of shape ``(count, doubles_per_trial)`` whose row
        ``i`` depends only on the stream identity and ``start_trial + i``.
        """
        padded = -(-self.doubles_per_trial // 4) * 4  # Philox emits 4 words/step
        bitgen = np.random.Philox(seed=self._key())
        bitgen.advance(start_trial * (padded // 4))
        u = np.random.Generator(bitgen).random((count, padded))
        return u[:, : self.doubles_per_trial]


def sample_channels(config: SystemConfig, rng: np.random.Generator) -> ChannelRealization:
    """Draw one channel realization from an ordinary generator."""
    h = _inverse_cdf_exponential(rng.random((config.n_bs, config.m_pu)), config.omega_h)
    g = _inverse_cdf_exponential(rng.random((config.n_bs, config.k_su)), config.omega_g)
    return ChannelRealization(h=h, g=g)


def sample_gain_block(
    config: SystemConfig,
    stream: TrialStream,
    start_trial: int,
    count: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized draw of ``count`` realizations starting at ``start_trial``.

    Returns ``(h, g)`` with shapes ``(count, N, M)`` and ``(count, N, K)``.
    Trial ``t`` consumes its own contiguous window of uniforms: first the
    ``N*M`` entries of ``h`` (row-major), then the ``N*K`` entries of ``g``.
    """
    n, m, k = config.n_bs, config.m_pu, config.k_su
    if stream.doubles_per_trial != config.gains_per_trial:
        raise ConfigurationError(
            f"stream supplies {stream.doubles_per_trial} doubles per trial, "
            f"config needs {config.gains_per_trial}"
        )
    u = stream.uniforms(start_trial, count)
    h = _inverse_cdf_exponential(u[:, : n * m], config.omega_h).reshape(count, n, m)
    g = _inverse_cdf_exponential(u[:, n * m :], config.omega_g).reshape(count, n, k)
    return h, g
