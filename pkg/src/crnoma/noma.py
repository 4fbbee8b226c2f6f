"""Power allocation and SINR/SNR expressions for one antenna triple.

The secondary user is served only while the primary user's QoS constraint
holds: both receivers must decode the primary signal at SINR at least
``gamma_p_th`` while the primary signal is still superimposed.  With
``beta = min(h, g)`` the largest admissible secondary power fraction is

    b = max((beta*rho - gamma_p_th) / ((gamma_p_th + 1) * beta * rho), 0)

and the secondary SNR after interference cancellation is ``b * g * rho``.
All quantities are linear scale; dB conversions happen at the reporting
layer only.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "PowerSplit",
    "LinkState",
    "optimal_power_split",
    "pu_sinr",
    "su_decode_pu_sinr",
    "su_snr",
    "achievable_su_snr",
]


@dataclass(frozen=True)
class PowerSplit:
    """Fraction ``b`` of transmit power given to the secondary user.

    The primary fraction ``a`` is derived so a + b = 1 holds exactly.
    """

    b: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.b < 1.0:
            raise ValueError(f"b must be in [0, 1), got {self.b!r}")

    @property
    def a(self) -> float:
        return 1.0 - self.b


@dataclass(frozen=True)
class LinkState:
    """Selected gains and transmit SNR for a fixed antenna triple."""

    h: float
    g: float
    rho: float

    def __post_init__(self) -> None:
        if self.h < 0 or self.g < 0:
            raise ValueError("gains must be nonnegative")
        if not self.rho > 0:
            raise ValueError("rho must be positive")


def optimal_power_split(link: LinkState, gamma_p_th: float) -> PowerSplit:
    """Largest secondary power fraction compatible with the primary QoS.

    Returns ``b = 0`` when the bottleneck gain cannot support the primary
    threshold at all (including the degenerate ``min(h, g) == 0`` case);
    ``b = 0`` is treated as infeasible downstream.
    """
    beta = min(link.h, link.g)
    if beta <= 0.0:
        return PowerSplit(0.0)
    b = (beta * link.rho - gamma_p_th) / ((gamma_p_th + 1.0) * beta * link.rho)
    return PowerSplit(max(b, 0.0))


def pu_sinr(link: LinkState, split: PowerSplit) -> float:
    """SINR of the primary signal at the primary user (secondary as noise)."""
    return split.a * link.h / (split.b * link.h + 1.0 / link.rho)


def su_decode_pu_sinr(link: LinkState, split: PowerSplit) -> float:
    """SINR of the primary signal at the secondary user, before cancellation."""
    return split.a * link.g / (split.b * link.g + 1.0 / link.rho)


def su_snr(link: LinkState, split: PowerSplit) -> float:
    """SNR of the secondary signal after the primary has been cancelled."""
    return split.b * link.g * link.rho


def achievable_su_snr(link: LinkState, gamma_p_th: float) -> float:
    """Secondary SNR under the optimal power split, zero when infeasible.

    Equals ``su_snr(link, optimal_power_split(link, gamma_p_th))`` up to
    rounding; written directly in the reduced form used by the selection
    schemes.
    """
    beta = min(link.h, link.g)
    if beta * link.rho <= gamma_p_th:
        return 0.0
    return (beta * link.rho - gamma_p_th) / ((gamma_p_th + 1.0) * beta) * link.g
