"""Joint antenna-selection schemes.

Four schemes choose one BS antenna, one PU antenna and one SU antenna per
channel realization:

* ``sjas`` -- three-stage subset search: keep the best gain per BS antenna
  on each side, drop BS antennas that cannot support the primary QoS, then
  pick the survivor with the largest achievable secondary SNR.
* ``es`` -- exhaustive search over all ``N*M*K`` triples.
* ``maxmin`` -- maximize the bottleneck gain ``min(h, g)``.
* ``random`` -- a uniformly random triple.

Every scheme returns a :class:`SelectionOutcome`; an outage is either
infeasibility (no positive power split) or a served secondary SNR below
``gamma_s_th``.  Scalar implementations keep explicit loops (and can count
elementary gain operations); the ``*_block`` variants are vectorized over a
batch of realizations for Monte Carlo use.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .channel import ChannelRealization, SystemConfig
from .noma import LinkState, achievable_su_snr, optimal_power_split

__all__ = [
    "SCHEME_IDS",
    "SelectionOutcome",
    "CandidatePair",
    "BlockOutcome",
    "OpCounter",
    "build_candidates",
    "sjas_select",
    "es_select",
    "maxmin_select",
    "random_select",
    "sjas_select_block",
    "es_select_block",
    "maxmin_select_block",
    "random_select_block",
]

# Canonical scheme identifiers; the tuple order is the conventional table
# row order (weakest to strongest).
SCHEME_IDS = ("random", "maxmin", "es", "sjas")


class OpCounter:
    """Counts elementary gain operations (comparisons + per-pair SNR evals)."""

    __slots__ = ("count",)

    def __init__(self) -> None:
        self.count = 0

    def tick(self, n: int = 1) -> None:
        self.count += n


@dataclass(frozen=True)
class SelectionOutcome:
    """Result of running one scheme on one realization.

    ``triple`` holds zero-based ``(n, m, k)`` indices and is ``None`` when
    the scheme ends up infeasible, in which case ``b = gamma_s = 0`` and the
    trial counts as an outage.
    """

    feasible: bool
    triple: Optional[tuple[int, int, int]]
    b: float
    gamma_s: float
    outage: bool


@dataclass(frozen=True)
class CandidatePair:
    """Per-BS-antenna row maxima with their column indices."""

    n: int
    h_max: float
    m_idx: int
    g_max: float
    k_idx: int
    beta: float


class BlockOutcome(NamedTuple):
    """Vectorized per-trial results: outage flags, secondary SNR, power split."""

    outage: np.ndarray
    gamma_s: np.ndarray
    b: np.ndarray


def _outcome(
    config: SystemConfig,
    rho: float,
    triple: Optional[tuple[int, int, int]],
    h: float,
    g: float,
) -> SelectionOutcome:
    if triple is not None:
        split = optimal_power_split(LinkState(h=h, g=g, rho=rho), config.gamma_p_th)
        if split.b > 0.0:
            gamma_s = achievable_su_snr(LinkState(h=h, g=g, rho=rho), config.gamma_p_th)
            return SelectionOutcome(
                feasible=True,
                triple=triple,
                b=split.b,
                gamma_s=gamma_s,
                outage=gamma_s < config.gamma_s_th,
            )
    return SelectionOutcome(feasible=False, triple=None, b=0.0, gamma_s=0.0, outage=True)


def build_candidates(
    ch: ChannelRealization, ops: OpCounter | None = None
) -> list[CandidatePair]:
    """Stage 1: the best PU-side and SU-side gain for each BS antenna."""
    out = []
    for n in range(ch.h.shape[0]):
        m_idx = 0
        h_max = float(ch.h[n, 0])
        for m in range(1, ch.h.shape[1]):
            if ops is not None:
                ops.tick()
            if ch.h[n, m] > h_max:
                h_max = float(ch.h[n, m])
                m_idx = m
        k_idx = 0
        g_max = float(ch.g[n, 0])
        for k in range(1, ch.g.shape[1]):
            if ops is not None:
                ops.tick()
            if ch.g[n, k] > g_max:
                g_max = float(ch.g[n, k])
                k_idx = k
        if ops is not None:
            ops.tick()  # beta = min(h_max, g_max)
        out.append(
            CandidatePair(
                n=n, h_max=h_max, m_idx=m_idx, g_max=g_max, k_idx=k_idx,
                beta=min(h_max, g_max),
            )
        )
    return out


def sjas_select(
    ch: ChannelRealization,
    config: SystemConfig,
    rho: float,
    ops: OpCounter | None = None,
) -> SelectionOutcome:
    """Subset-based joint selection (three stages over row maxima).

    Operation count is bounded by ``N*(M+K+2)``: stage 1 scans each row once,
    stage 2 is one feasibility test per BS antenna, stage 3 evaluates the
    secondary SNR only for surviving antennas.
    """
    candidates = build_candidates(ch, ops)
    # Stage 2: a candidate is feasible iff beta > gamma_p_th / rho, i.e. its
    # power split would be strictly positive.
    c1 = config.gamma_p_th / rho
    survivors = []
    for cand in candidates:
        if ops is not None:
            ops.tick()
        if cand.beta > c1:
            survivors.append(cand)
    # Stage 3: maximize the achievable secondary SNR; first maximum wins.
    best = None
    best_gamma = -1.0
    for cand in survivors:
        if ops is not None:
            ops.tick(2)  # SNR evaluation + running-argmax comparison
        gamma = achievable_su_snr(
            LinkState(h=cand.h_max, g=cand.g_max, rho=rho), config.gamma_p_th
        )
        if gamma > best_gamma:
            best_gamma = gamma
            best = cand
    if best is None:
        return _outcome(config, rho, None, 0.0, 0.0)
    return _outcome(config, rho, (best.n, best.m_idx, best.k_idx), best.h_max, best.g_max)


def es_select(
    ch: ChannelRealization,
    config: SystemConfig,
    rho: float,
    ops: OpCounter | None = None,
) -> SelectionOutcome:
    """Exhaustive search over all antenna triples for the best secondary SNR."""
    best_triple = None
    best_gamma = 0.0
    for n in range(ch.h.shape[0]):
        for m in range(ch.h.shape[1]):
            for k in range(ch.g.shape[1]):
                if ops is not None:
                    ops.tick(2)
                gamma = achievable_su_snr(
                    LinkState(h=float(ch.h[n, m]), g=float(ch.g[n, k]), rho=rho),
                    config.gamma_p_th,
                )
                if gamma > best_gamma:
                    best_gamma = gamma
                    best_triple = (n, m, k)
    if best_triple is None:
        return _outcome(config, rho, None, 0.0, 0.0)
    n, m, k = best_triple
    return _outcome(config, rho, best_triple, float(ch.h[n, m]), float(ch.g[n, k]))


def maxmin_select(
    ch: ChannelRealization,
    config: SystemConfig,
    rho: float,
    ops: OpCounter | None = None,
    full_search: bool = False,
) -> SelectionOutcome:
    """Maximize the bottleneck gain ``min(h, g)`` over all triples.

    For each BS antenna the bottleneck is maximized by the row maxima, so the
    default path searches the candidate pairs only; this also pins the tie
    rule, since a shared bottleneck on the h side leaves the choice of the
    SU antenna open and the row maxima take the largest secondary gain.
    ``full_search=True`` scans all ``N*M*K`` triples with the same tie
    preference; it exists as the self-check oracle for that reduction.
    """
    if full_search:
        best_triple = None
        best_key = (-1.0, -1.0)
        for n in range(ch.h.shape[0]):
            for m in range(ch.h.shape[1]):
                for k in range(ch.g.shape[1]):
                    if ops is not None:
                        ops.tick(2)
                    g_val = float(ch.g[n, k])
                    key = (min(float(ch.h[n, m]), g_val), g_val)
                    if key > best_key:
                        best_key = key
                        best_triple = (n, m, k)
        assert best_triple is not None
        n, m, k = best_triple
        return _outcome(config, rho, best_triple, float(ch.h[n, m]), float(ch.g[n, k]))
    candidates = build_candidates(ch, ops)
    best = candidates[0]
    for cand in candidates[1:]:
        if ops is not None:
            ops.tick()
        if cand.beta > best.beta:
            best = cand
    return _outcome(config, rho, (best.n, best.m_idx, best.k_idx), best.h_max, best.g_max)


def random_select(
    ch: ChannelRealization,
    config: SystemConfig,
    rho: float,
    rng: np.random.Generator,
) -> SelectionOutcome:
    """Select a uniformly random triple (one uniform draw per call)."""
    n_bs, m_pu = ch.h.shape
    k_su = ch.g.shape[1]
    total = n_bs * m_pu * k_su
    idx = min(int(rng.random() * total), total - 1)
    n, rem = divmod(idx, m_pu * k_su)
    m, k = divmod(rem, k_su)
    return _outcome(config, rho, (n, m, k), float(ch.h[n, m]), float(ch.g[n, k]))


# --- vectorized block implementations -------------------------------------

def _gamma_and_b(
    beta: np.ndarray, g: np.ndarray, rho: float, gamma_p_th: float
) -> tuple[np.ndarray, np.ndarray]:
    """Achievable secondary SNR and power split, zero where infeasible."""
    gamma = np.zeros_like(beta)
    b = np.zeros_like(beta)
    feasible = beta * rho > gamma_p_th
    bf = beta[feasible]
    gamma[feasible] = (bf * rho - gamma_p_th) / ((gamma_p_th + 1.0) * bf) * g[feasible]
    b[feasible] = (bf * rho - gamma_p_th) / ((gamma_p_th + 1.0) * bf * rho)
    return gamma, b


def _pick(
    gamma: np.ndarray, b: np.ndarray, gamma_s_th: float
) -> BlockOutcome:
    """Argmax the secondary SNR along the last axis and flag outages."""
    flat_gamma = gamma.reshape(gamma.shape[0], -1)
    flat_b = b.reshape(b.shape[0], -1)
    idx = np.argmax(flat_gamma, axis=1)
    rows = np.arange(flat_gamma.shape[0])
    gamma_sel = flat_gamma[rows, idx]
    feasible = gamma_sel > 0.0
    b_sel = np.where(feasible, flat_b[rows, idx], 0.0)
    outage = ~feasible | (gamma_sel < gamma_s_th)
    return BlockOutcome(outage=outage, gamma_s=gamma_sel, b=b_sel)


def sjas_select_block(
    h: np.ndarray, g: np.ndarray, config: SystemConfig, rho: float
) -> BlockOutcome:
    h_row = h.max(axis=2)
    g_row = g.max(axis=2)
    beta = np.minimum(h_row, g_row)
    gamma, b = _gamma_and_b(beta, g_row, rho, config.gamma_p_th)
    return _pick(gamma, b, config.gamma_s_th)


def es_select_block(
    h: np.ndarray, g: np.ndarray, config: SystemConfig, rho: float
) -> BlockOutcome:
    beta = np.minimum(h[:, :, :, None], g[:, :, None, :])
    g_full = np.broadcast_to(g[:, :, None, :], beta.shape)
    gamma, b = _gamma_and_b(beta, g_full, rho, config.gamma_p_th)
    return _pick(gamma, b, config.gamma_s_th)


def maxmin_select_block(
    h: np.ndarray, g: np.ndarray, config: SystemConfig, rho: float
) -> BlockOutcome:
    h_row = h.max(axis=2)
    g_row = g.max(axis=2)
    beta = np.minimum(h_row, g_row)
    n_star = np.argmax(beta, axis=1)
    rows = np.arange(beta.shape[0])
    gamma, b = _gamma_and_b(beta[rows, n_star], g_row[rows, n_star], rho, config.gamma_p_th)
    outage = (gamma <= 0.0) | (gamma < config.gamma_s_th)
    return BlockOutcome(outage=outage, gamma_s=gamma, b=b)


def random_select_block(
    h: np.ndarray, g: np.ndarray, config: SystemConfig, rho: float, u: np.ndarray
) -> BlockOutcome:
    """Random triples driven by one uniform per trial from ``u``."""
    n_bs, m_pu, k_su = config.n_bs, config.m_pu, config.k_su
    total = n_bs * m_pu * k_su
    idx = np.minimum((u * total).astype(np.int64), total - 1)
    n, rem = np.divmod(idx, m_pu * k_su)
    m, k = np.divmod(rem, k_su)
    rows = np.arange(h.shape[0])
    h_sel = h[rows, n, m]
    g_sel = g[rows, n, k]
    gamma, b = _gamma_and_b(np.minimum(h_sel, g_sel), g_sel, rho, config.gamma_p_th)
    outage = (gamma <= 0.0) | (gamma < config.gamma_s_th)
    return BlockOutcome(outage=outage, gamma_s=gamma, b=b)
