"""Closed-form outage analysis for the subset-based selection scheme.

Everything here is an exact or asymptotic expression over order statistics
of exponential gains.  For one BS antenna the best PU-side gain has CDF
``(1 - exp(-omega_h x))**M`` and the best SU-side gain has CDF
``(1 - exp(-omega_g x))**K``; the bottleneck of the two drives feasibility.

Two reduced thresholds recur, both scaled by the transmit SNR ``rho``:

* ``c1 = gamma_p_th / rho`` -- the bottleneck gain needed for a positive
  power split;
* ``c2 = gamma_s_th * (gamma_p_th + 1) / rho`` -- the extra SU-side gain
  needed to clear the secondary threshold once served.

The double sums over antenna orders alternate in sign, so they are evaluated
with exact compensated summation (``math.fsum``); binomial coefficients stay
in integer arithmetic until the final product.  Supported antenna counts for
the alternating sums are documented as M, K <= 10.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, exp, expm1, fsum

from .channel import SystemConfig

__all__ = [
    "SumTerms",
    "AnalyticCurve",
    "cdf_row_max_h",
    "cdf_row_max_g",
    "cdf_bottleneck",
    "prob_no_feasible_antenna",
    "marginal_band_prob",
    "crossover_band_prob",
    "subset_size_pmf",
    "outage_probability_asymptotic",
    "outage_probability_high_snr",
    "diversity_order",
    "asymptotic_regime_violated",
    "evaluate_curve",
]


@dataclass(frozen=True)
class SumTerms:
    """Reduced thresholds and per-(m, k) ingredients of the double sums."""

    c1: float
    c2: float
    m_pu: int
    k_su: int
    omega_h: float
    omega_g: float

    @classmethod
    def from_config(cls, config: SystemConfig, rho: float) -> "SumTerms":
        if not rho > 0:
            raise ValueError(f"rho must be positive, got {rho!r}")
        return cls(
            c1=config.gamma_p_th / rho,
            c2=config.gamma_s_th * (config.gamma_p_th + 1.0) / rho,
            m_pu=config.m_pu,
            k_su=config.k_su,
            omega_h=config.omega_h,
            omega_g=config.omega_g,
        )

    def alt_coeff(self, m: int, k: int) -> float:
        """Signed binomial weight ``(-1)**(m+k) * C(M, m) * C(K, k)``."""
        return float((-1) ** (m + k) * comb(self.m_pu, m) * comb(self.k_su, k))

    def rate_sum(self, m: int, k: int) -> float:
        """Combined exponential rate ``m*omega_h + k*omega_g``."""
        return m * self.omega_h + k * self.omega_g

    def threshold_rate(self, m: int, k: int) -> float:
        """Threshold-weighted rate ``m*omega_h*c1 + k*omega_g*c2``."""
        return m * self.omega_h * self.c1 + k * self.omega_g * self.c2


def _require_nonneg(x: float) -> None:
    if x < 0:
        raise ValueError(f"CDF argument must be nonnegative, got {x!r}")


def cdf_row_max_h(x: float, config: SystemConfig) -> float:
    """CDF of the best PU-side gain for one BS antenna."""
    _require_nonneg(x)
    return (-expm1(-config.omega_h * x)) ** config.m_pu


def cdf_row_max_g(x: float, config: SystemConfig) -> float:
    """CDF of the best SU-side gain for one BS antenna."""
    _require_nonneg(x)
    return (-expm1(-config.omega_g * x)) ** config.k_su


def cdf_bottleneck(x: float, config: SystemConfig) -> float:
    """CDF of ``min(best h, best g)`` for one BS antenna.

    ``F = F_h + F_g - F_h*F_g``; this form avoids cancellation when both
    CDFs are small, which is exactly the high-SNR regime of interest.
    """
    fh = cdf_row_max_h(x, config)
    fg = cdf_row_max_g(x, config)
    return fh + fg - fh * fg


def prob_no_feasible_antenna(config: SystemConfig, rho: float) -> float:
    """Probability that no BS antenna supports a positive power split."""
    terms = SumTerms.from_config(config, rho)
    return cdf_bottleneck(terms.c1, config) ** config.n_bs


def _marginal_band_sum(t: SumTerms) -> float:
    parts = []
    for m in range(1, t.m_pu + 1):
        for k in range(1, t.k_su + 1):
            rate = t.rate_sum(m, k)
            parts.append(
                t.alt_coeff(m, k)
                * k * t.omega_g
                * exp(-rate * t.c1)
                * (-expm1(-rate * t.c2))
                / rate
            )
    return fsum(parts)


def marginal_band_prob(config: SystemConfig, rho: float) -> float:
    """Probability the served SU gain lands just above the feasibility cut.

    Exact probability that, for one BS antenna, the best SU-side gain falls
    in ``(c1, c1 + c2)`` while the PU-side best gain is at least as large;
    such an antenna is feasible but the secondary threshold is missed.
    """
    return _marginal_band_sum(SumTerms.from_config(config, rho))


def crossover_band_prob(config: SystemConfig, rho: float) -> float:
    """High-SNR stand-in for the PU-limited miss probability.

    Exact probability that ``c1 < best h < best g < c2`` for one BS antenna;
    at high SNR this replaces the true event in which the secondary threshold
    is missed because the PU-side gain is the bottleneck (whose upper
    boundary depends on the gain itself).  The closed form integrates over
    the ordered region, so it is only meaningful for ``c2 > c1``; the region
    is empty otherwise and the probability is zero.
    """
    t = SumTerms.from_config(config, rho)
    if t.c2 <= t.c1:
        return 0.0
    parts = []
    for m in range(1, t.m_pu + 1):
        for k in range(1, t.k_su + 1):
            rate = t.rate_sum(m, k)
            parts.append(
                t.alt_coeff(m, k)
                * (
                    (m * t.omega_h * exp(-rate * t.c1) + k * t.omega_g * exp(-rate * t.c2))
                    / rate
                    - exp(-t.threshold_rate(m, k))
                )
            )
    return fsum(parts)


def _per_antenna_miss_sum(t: SumTerms) -> float:
    """Fused double sum equal to ``marginal_band_prob + crossover_band_prob``.

    This is the per-antenna weight raised to the subset-size power in the
    asymptotic outage expression.  When ``c2 <= c1`` the crossover region is
    empty and only the marginal band contributes.
    """
    if t.c2 <= t.c1:
        return _marginal_band_sum(t)
    parts = []
    for m in range(1, t.m_pu + 1):
        for k in range(1, t.k_su + 1):
            rate = t.rate_sum(m, k)
            # exp(-rate*c1) - exp(-threshold_rate) without cancellation:
            # threshold_rate - rate*c1 == k*omega_g*(c2 - c1).
            gap = k * t.omega_g * (t.c2 - t.c1)
            head = exp(-rate * t.c1) * (-expm1(-gap))
            tail = k * t.omega_g * exp(-rate * t.c2) * (-expm1(-rate * t.c1)) / rate
            parts.append(t.alt_coeff(m, k) * (head + tail))
    return fsum(parts)


def subset_size_pmf(config: SystemConfig, rho: float, size: int) -> float:
    """Probability that exactly ``size`` BS antennas are feasible."""
    if not 0 <= size <= config.n_bs:
        raise ValueError(f"size must be in [0, {config.n_bs}], got {size}")
    fb = cdf_bottleneck(SumTerms.from_config(config, rho).c1, config)
    n = config.n_bs
    return comb(n, size) * fb ** (n - size) * (1.0 - fb) ** size


def outage_probability_asymptotic(config: SystemConfig, rho: float) -> float:
    """Asymptotic (high-SNR) system outage probability.

    Sum over the number of feasible BS antennas: the no-antenna term is the
    bottleneck CDF to the ``N``, and each feasible antenna independently
    misses the secondary threshold with the per-antenna weight of
    :func:`_per_antenna_miss_sum`.  Returns the raw value, which may exceed
    1 outside the asymptotic regime; callers clamp for reporting.
    """
    t = SumTerms.from_config(config, rho)
    fb = cdf_bottleneck(t.c1, config)
    miss = _per_antenna_miss_sum(t)
    n = config.n_bs
    return fsum(
        comb(n, size) * miss**size * fb ** (n - size) for size in range(n + 1)
    )


def outage_probability_high_snr(config: SystemConfig, rho: float) -> float:
    """Leading-order outage decay ``zeta**N / rho**(N*min(M, K))``."""
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho!r}")
    m, k = config.m_pu, config.k_su
    low = min(m, k)
    scale_h = config.omega_h * config.gamma_p_th
    scale_g = config.omega_g * config.gamma_p_th
    zeta = (
        scale_h**m / rho ** (m - low)
        + scale_g**k / rho ** (k - low)
        - scale_h**m * scale_g**k / rho ** (m + k - low)
    )
    return zeta**config.n_bs / rho ** (config.n_bs * low)


def diversity_order(config: SystemConfig) -> int:
    """Asymptotic log-log outage slope magnitude: ``N * min(M, K)``."""
    return config.n_bs * min(config.m_pu, config.k_su)


def asymptotic_regime_violated(config: SystemConfig, rho: float, raw_value: float) -> bool:
    """Flag transmit SNRs where the asymptotic expression is untrustworthy.

    Triggers when the raw value escapes [0, 1] or when the weaker link's mean
    gain times ``rho`` is within an order of magnitude of the primary
    threshold.
    """
    weaker_mean_snr = rho / max(config.omega_h, config.omega_g)
    return raw_value > 1.0 or raw_value < 0.0 or weaker_mean_snr < 10.0 * config.gamma_p_th


@dataclass(frozen=True)
class AnalyticCurve:
    """Closed-form outage values over a transmit-SNR grid."""

    rho_grid: tuple[float, ...]
    p_outage: tuple[float, ...]
    p_outage_raw: tuple[float, ...]
    p_highsnr: tuple[float, ...]
    regime_violated: tuple[bool, ...]
    diversity: int


def evaluate_curve(config: SystemConfig, rho_grid: list[float]) -> AnalyticCurve:
    """Evaluate the asymptotic and leading-order outage along a SNR grid."""
    if not rho_grid:
        raise ValueError("rho_grid must be nonempty")
    raw = [outage_probability_asymptotic(config, r) for r in rho_grid]
    return AnalyticCurve(
        rho_grid=tuple(float(r) for r in rho_grid),
        p_outage=tuple(min(max(v, 0.0), 1.0) for v in raw),
        p_outage_raw=tuple(raw),
        p_highsnr=tuple(outage_probability_high_snr(config, r) for r in rho_grid),
        regime_violated=tuple(
            asymptotic_regime_violated(config, r, v) for r, v in zip(rho_grid, raw)
        ),
        diversity=diversity_order(config),
    )
