"""Independent reference implementations used as test oracles.

Everything here is written from the defining events and densities, not from
the package's code paths: selection by brute force over all antenna triples,
probabilities by adaptive 2-D quadrature of the order-statistic densities.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate


def brute_force_best_snr(h, g, rho, gamma_p_th):
    """Best achievable secondary SNR over all triples, by direct enumeration.

    Returns (gamma_s, b, triple); gamma_s = 0 and triple None when no triple
    admits a positive power split.
    """
    best = (0.0, 0.0, None)
    n_bs, m_pu = h.shape
    k_su = g.shape[1]
    for n in range(n_bs):
        for m in range(m_pu):
            for k in range(k_su):
                beta = min(h[n, m], g[n, k])
                if beta * rho <= gamma_p_th:
                    continue
                b = (beta * rho - gamma_p_th) / ((gamma_p_th + 1.0) * beta * rho)
                gamma = b * g[n, k] * rho
                if gamma > best[0]:
                    best = (gamma, b, (n, m, k))
    return best


def brute_force_maxmin(h, g):
    """Triple maximizing min(h, g) by direct enumeration; first maximum wins."""
    best_val = -1.0
    best_triple = None
    n_bs, m_pu = h.shape
    k_su = g.shape[1]
    for n in range(n_bs):
        for m in range(m_pu):
            for k in range(k_su):
                val = min(h[n, m], g[n, k])
                if val > best_val:
                    best_val = val
                    best_triple = (n, m, k)
    return best_val, best_triple


def row_max_pdf(x, omega, count):
    """Density of the maximum of ``count`` iid Exp(omega) variables."""
    return count * omega * np.exp(-omega * x) * (1.0 - np.exp(-omega * x)) ** (count - 1)


def row_max_cdf(x, omega, count):
    return (1.0 - math.exp(-omega * x)) ** count


def bottleneck_cdf(x, omega_h, m_pu, omega_g, k_su):
    """CDF of min(best h, best g) via the survival product."""
    return 1.0 - (1.0 - row_max_cdf(x, omega_h, m_pu)) * (
        1.0 - row_max_cdf(x, omega_g, k_su)
    )


def quad_su_band(omega_h, m_pu, omega_g, k_su, c1, c2, tol=1e-12):
    """Pr(c1 < best g < c1 + c2 and best h >= best g) by quadrature."""

    def integrand(y):
        return row_max_pdf(y, omega_g, k_su) * (1.0 - row_max_cdf(y, omega_h, m_pu))

    value, _ = integrate.quad(integrand, c1, c1 + c2, epsabs=tol, epsrel=tol, limit=200)
    return value


def quad_crossover_box(omega_h, m_pu, omega_g, k_su, c1, c2, tol=1e-12):
    """Pr(c1 < best h < best g < c2) by 2-D quadrature over the triangle."""
    if c2 <= c1:
        return 0.0

    def integrand(y, x):  # scipy order: inner variable first
        return row_max_pdf(x, omega_h, m_pu) * row_max_pdf(y, omega_g, k_su)

    value, _ = integrate.dblquad(
        integrand, c1, c2, lambda x: x, lambda x: c2, epsabs=tol, epsrel=tol
    )
    return value


def mc_exact_crossover(omega_h, m_pu, omega_g, k_su, rho, gamma_p_th, gamma_s_th, rng, samples):
    """Monte Carlo estimate of the exact secondary-threshold miss event in
    which the PU-side best gain is the bottleneck (the event the crossover
    box term approximates at high SNR)."""
    c1 = gamma_p_th / rho
    h = rng.exponential(1.0 / omega_h, size=(samples, m_pu)).max(axis=1)
    g = rng.exponential(1.0 / omega_g, size=(samples, k_su)).max(axis=1)
    upper = gamma_s_th * (gamma_p_th + 1.0) * h / (h * rho - gamma_p_th)
    hit = (h > c1) & (g > h) & (g < upper)
    return hit.mean()
