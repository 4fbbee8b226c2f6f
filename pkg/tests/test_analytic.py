import math
from math import comb, exp

import numpy as np
import pytest

from crnoma.analytic import (
    SumTerms,
    asymptotic_regime_violated,
    cdf_bottleneck,
    cdf_row_max_g,
    cdf_row_max_h,
    crossover_band_prob,
    diversity_order,
    evaluate_curve,
    marginal_band_prob,
    outage_probability_asymptotic,
    outage_probability_high_snr,
    prob_no_feasible_antenna,
    subset_size_pmf,
)
from crnoma.channel import CHANNEL_PURPOSE, SystemConfig, TrialStream, sample_gain_block

from oracles import mc_exact_crossover, quad_crossover_box, quad_su_band

REF_NOISE = -70.0


def rho_of(p_dbm):
    return 10.0 ** ((p_dbm - REF_NOISE) / 10.0)


def config_for(n=1, m=1, k=1, omega_h=1.0, omega_g=1.0, gamma_p=1.0, gamma_s=1.0):
    return SystemConfig(n_bs=n, m_pu=m, k_su=k, omega_h=omega_h, omega_g=omega_g,
                        gamma_p_th=gamma_p, gamma_s_th=gamma_s)


class TestOrderStatisticCdfs:
    def test_at_origin_and_limit(self, reference_config):
        assert cdf_row_max_h(0.0, reference_config) == 0.0
        assert cdf_row_max_g(0.0, reference_config) == 0.0
        assert cdf_row_max_h(1.0, reference_config) == pytest.approx(1.0, abs=1e-12)

    def test_hand_value(self):
        config = config_for(m=2)
        assert cdf_row_max_h(math.log(2.0), config) == pytest.approx(0.25, rel=1e-12)

    def test_rejects_negative_argument(self, reference_config):
        for fn in (cdf_row_max_h, cdf_row_max_g, cdf_bottleneck):
            with pytest.raises(ValueError):
                fn(-1e-9, reference_config)

    def test_bottleneck_single_antenna_hand_value(self):
        # min of two unit-rate exponentials is Exp(2)
        config = config_for()
        assert cdf_bottleneck(1.0, config) == pytest.approx(1.0 - exp(-2.0), rel=1e-9)
        assert cdf_bottleneck(1.0, config) == pytest.approx(0.864664, abs=1e-6)
        assert cdf_bottleneck(0.0, config) == 0.0

    def test_bottleneck_survival_product_identity(self, reference_config):
        for x in np.logspace(-10, -5, 50):
            direct = 1.0 - (1.0 - cdf_row_max_h(x, reference_config)) * (
                1.0 - cdf_row_max_g(x, reference_config)
            )
            assert abs(cdf_bottleneck(x, reference_config) - direct) < 1e-14

    def test_bottleneck_against_sampling(self, reference_config):
        stream = TrialStream(master_seed=31, purpose=CHANNEL_PURPOSE, point_index=0,
                             doubles_per_trial=reference_config.gains_per_trial)
        h, g = sample_gain_block(reference_config, stream, 0, 500_000)
        beta = np.minimum(h.max(axis=2), g.max(axis=2)).ravel()  # 1e6 iid samples
        for x in np.logspace(-8.5, -6.5, 10):
            empirical = (beta <= x).mean()
            assert abs(empirical - cdf_bottleneck(x, reference_config)) < 0.005


class TestNoFeasibleAntenna:
    def test_vanishing_primary_threshold(self, reference_config):
        config = SystemConfig(n_bs=2, m_pu=2, k_su=2, omega_h=reference_config.omega_h,
                              omega_g=reference_config.omega_g, gamma_p_th=1e-12,
                              gamma_s_th=reference_config.gamma_s_th)
        assert prob_no_feasible_antenna(config, rho_of(10.0)) < 1e-10

    def test_hand_value(self):
        # c1 = 0.1 with unit rates: 1 - exp(-0.2)
        config = config_for(gamma_p=1.0)
        assert prob_no_feasible_antenna(config, 10.0) == pytest.approx(
            0.18126924692201818, rel=1e-12)

    def test_against_simulation(self, reference_config):
        rho = rho_of(10.0)
        stream = TrialStream(master_seed=33, purpose=CHANNEL_PURPOSE, point_index=0,
                             doubles_per_trial=reference_config.gains_per_trial)
        h, g = sample_gain_block(reference_config, stream, 0, 1_000_000)
        beta = np.minimum(h.max(axis=2), g.max(axis=2))
        empty = (beta <= reference_config.gamma_p_th / rho).all(axis=1)
        p = prob_no_feasible_antenna(reference_config, rho)
        se = math.sqrt(p * (1 - p) / 1_000_000)
        assert abs(empty.mean() - p) < 3 * se


class TestMarginalBand:
    def test_vanishing_secondary_threshold(self, reference_config):
        config = SystemConfig(n_bs=2, m_pu=2, k_su=2, omega_h=reference_config.omega_h,
                              omega_g=reference_config.omega_g,
                              gamma_p_th=reference_config.gamma_p_th, gamma_s_th=1e-15)
        assert marginal_band_prob(config, rho_of(10.0)) < 1e-7

    @pytest.mark.parametrize("m,k,p_dbm", [
        (1, 1, 0.0), (1, 1, 10.0), (2, 2, 0.0), (2, 2, 10.0), (2, 2, 20.0),
        (4, 2, 10.0), (2, 4, 10.0), (4, 4, 0.0), (1, 4, 20.0), (4, 1, 5.0),
    ])
    def test_matches_quadrature(self, m, k, p_dbm):
        config = SystemConfig(n_bs=2, m_pu=m, k_su=k, omega_h=4.2875e7,
                              omega_g=1.5625e7, gamma_p_th=2**0.5 - 1,
                              gamma_s_th=2**2.5 - 1)
        rho = rho_of(p_dbm)
        t = SumTerms.from_config(config, rho)
        ref = quad_su_band(config.omega_h, m, config.omega_g, k, t.c1, t.c2)
        assert abs(marginal_band_prob(config, rho) - ref) < 1e-8

    def test_against_simulation(self, reference_config):
        rho = rho_of(10.0)
        t = SumTerms.from_config(reference_config, rho)
        stream = TrialStream(master_seed=34, purpose=CHANNEL_PURPOSE, point_index=0,
                             doubles_per_trial=reference_config.gains_per_trial)
        h, g = sample_gain_block(reference_config, stream, 0, 1_000_000)
        hn, gn = h[:, 0, :].max(axis=1), g[:, 0, :].max(axis=1)
        hit = (gn > t.c1) & (gn < t.c1 + t.c2) & (hn >= gn)
        p = marginal_band_prob(reference_config, rho)
        se = math.sqrt(p * (1 - p) / 1_000_000)
        assert abs(hit.mean() - p) < 3 * se


class TestCrossoverBand:
    def test_vanishing_secondary_threshold(self, reference_config):
        config = SystemConfig(n_bs=2, m_pu=2, k_su=2, omega_h=reference_config.omega_h,
                              omega_g=reference_config.omega_g,
                              gamma_p_th=reference_config.gamma_p_th, gamma_s_th=1e-15)
        # c2 < c1 collapses the box region entirely
        assert abs(crossover_band_prob(config, rho_of(10.0))) < 1e-12

    def test_single_antenna_triangle_quadrature(self):
        config = config_for(gamma_p=1.0, gamma_s=2.5)  # c1=0.1, c2=0.5 at rho=10
        rho = 10.0
        t = SumTerms.from_config(config, rho)
        assert (t.c1, t.c2) == (0.1, 0.5)
        ref = quad_crossover_box(1.0, 1, 1.0, 1, 0.1, 0.5)
        assert abs(crossover_band_prob(config, rho) - ref) < 1e-10

    @pytest.mark.parametrize("m,k,p_dbm", [(2, 2, 5.0), (2, 2, 15.0), (4, 2, 10.0),
                                           (2, 4, 10.0), (1, 2, 0.0)])
    def test_matches_quadrature(self, m, k, p_dbm):
        config = SystemConfig(n_bs=2, m_pu=m, k_su=k, omega_h=4.2875e7,
                              omega_g=1.5625e7, gamma_p_th=2**0.5 - 1,
                              gamma_s_th=2**2.5 - 1)
        rho = rho_of(p_dbm)
        t = SumTerms.from_config(config, rho)
        ref = quad_crossover_box(config.omega_h, m, config.omega_g, k, t.c1, t.c2)
        assert abs(crossover_band_prob(config, rho) - ref) < 1e-8

    def test_absolute_gap_to_exact_event_shrinks(self, reference_config):
        # the box region is a high-SNR stand-in: its absolute distance to the
        # exact miss event vanishes along the power grid even though the
        # relative gap converges to a constant instead of zero
        rng = np.random.default_rng(35)
        gaps = []
        for p_dbm in (10.0, 15.0, 20.0):
            rho = rho_of(p_dbm)
            exact = mc_exact_crossover(
                reference_config.omega_h, reference_config.m_pu, reference_config.omega_g,
                reference_config.k_su, rho, reference_config.gamma_p_th,
                reference_config.gamma_s_th, rng, 2_000_000)
            gaps.append(abs(crossover_band_prob(reference_config, rho) - exact))
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] < 5e-4


class TestSubsetSize:
    def test_normalization(self, reference_config):
        total = sum(subset_size_pmf(reference_config, rho_of(10.0), size)
                    for size in range(reference_config.n_bs + 1))
        assert abs(total - 1.0) < 1e-12

    def test_size_zero_equals_no_feasible_antenna(self, reference_config):
        rho = rho_of(5.0)
        assert subset_size_pmf(reference_config, rho, 0) == prob_no_feasible_antenna(
            reference_config, rho)

    def test_out_of_range_rejected(self, reference_config):
        for size in (-1, 3):
            with pytest.raises(ValueError):
                subset_size_pmf(reference_config, rho_of(10.0), size)

    def test_against_simulation_histogram(self, reference_config):
        rho = rho_of(10.0)
        stream = TrialStream(master_seed=36, purpose=CHANNEL_PURPOSE, point_index=0,
                             doubles_per_trial=reference_config.gains_per_trial)
        h, g = sample_gain_block(reference_config, stream, 0, 1_000_000)
        beta = np.minimum(h.max(axis=2), g.max(axis=2))
        feasible = (beta > reference_config.gamma_p_th / rho).sum(axis=1)
        for size in range(3):
            p = subset_size_pmf(reference_config, rho, size)
            se = math.sqrt(p * (1 - p) / 1_000_000)
            assert abs((feasible == size).mean() - p) < 3 * se


class TestAsymptoticOutage:
    def test_band_decomposition_identity(self, reference_config):
        # reassemble from the conditional miss CDF and the subset-size pmf
        for p_dbm in (0.0, 5.0, 10.0, 15.0, 20.0):
            rho = rho_of(p_dbm)
            fb = cdf_bottleneck(reference_config.gamma_p_th / rho, reference_config)
            miss_given_feasible = (
                marginal_band_prob(reference_config, rho)
                + crossover_band_prob(reference_config, rho)
            ) / (1.0 - fb)
            recomposed = prob_no_feasible_antenna(reference_config, rho) + sum(
                miss_given_feasible**size * subset_size_pmf(reference_config, rho, size)
                for size in range(1, reference_config.n_bs + 1)
            )
            assert abs(outage_probability_asymptotic(reference_config, rho) - recomposed) < 1e-12

    def test_vanishing_thresholds(self, reference_config):
        config = SystemConfig(n_bs=2, m_pu=2, k_su=2, omega_h=reference_config.omega_h,
                              omega_g=reference_config.omega_g, gamma_p_th=1e-12,
                              gamma_s_th=1e-12)
        assert outage_probability_asymptotic(config, rho_of(10.0)) < 1e-9

    def test_nonincreasing_on_reference_grid(self, reference_config):
        values = [outage_probability_asymptotic(reference_config, rho_of(p))
                  for p in np.arange(0.0, 20.5, 2.5)]
        assert all(b <= a for a, b in zip(values, values[1:]))

    def test_always_a_probability(self, reference_config):
        # disjoint-event decomposition keeps the raw value inside [0, 1]
        for gamma_s in (0.01, 4.66, 1000.0):
            config = SystemConfig(n_bs=2, m_pu=2, k_su=2,
                                  omega_h=reference_config.omega_h,
                                  omega_g=reference_config.omega_g,
                                  gamma_p_th=reference_config.gamma_p_th,
                                  gamma_s_th=gamma_s)
            for p_dbm in np.arange(-20.0, 30.0, 2.5):
                raw = outage_probability_asymptotic(config, rho_of(p_dbm))
                assert -1e-12 <= raw <= 1.0 + 1e-12


class TestHighSnr:
    def test_equal_antennas_exponent_bookkeeping(self, reference_config):
        # for M == K the scale factor tends to a constant, so the decay is
        # rho**(-N*M) exactly in the limit
        scale_h = reference_config.omega_h * reference_config.gamma_p_th
        scale_g = reference_config.omega_g * reference_config.gamma_p_th
        limit = (scale_h**2 + scale_g**2) ** 2
        rho = rho_of(60.0)
        value = outage_probability_high_snr(reference_config, rho)
        assert value * rho**4 == pytest.approx(limit, rel=1e-3)

    def test_slope_reaches_diversity_order(self, reference_config):
        rhos = np.array([rho_of(p) for p in np.arange(20.0, 30.5, 2.5)])
        values = np.array([outage_probability_high_snr(reference_config, r) for r in rhos])
        slope = np.polyfit(np.log10(rhos), np.log10(values), 1)[0]
        assert slope == pytest.approx(-4.0, rel=0.02)

    def test_ratio_to_asymptotic_stabilizes(self, reference_config):
        # the leading-order formula keeps only the no-feasible-antenna part,
        # so the ratio converges to a constant below one rather than to one
        r1 = outage_probability_high_snr(reference_config, rho_of(40.0)) / \
            outage_probability_asymptotic(reference_config, rho_of(40.0))
        r2 = outage_probability_high_snr(reference_config, rho_of(50.0)) / \
            outage_probability_asymptotic(reference_config, rho_of(50.0))
        assert 0.0 < r1 <= 1.0
        assert r2 == pytest.approx(r1, rel=0.02)


class TestDiversityOrder:
    @pytest.mark.parametrize("n,m,k,expected", [(2, 2, 2, 4), (3, 1, 5, 3), (1, 1, 1, 1)])
    def test_values(self, n, m, k, expected):
        assert diversity_order(config_for(n=n, m=m, k=k)) == expected


class TestNumericalStability:
    def test_compensated_vs_naive_summation(self):
        # naive running sums of the alternating series stay within 1e-10 for
        # the documented antenna range, confirming fsum is belt and braces
        for m, k in [(4, 4), (8, 6), (10, 10)]:
            config = SystemConfig(n_bs=2, m_pu=m, k_su=k, omega_h=4.2875e7,
                                  omega_g=1.5625e7, gamma_p_th=2**0.5 - 1,
                                  gamma_s_th=2**2.5 - 1)
            for p_dbm in (0.0, 10.0, 20.0):
                rho = rho_of(p_dbm)
                t = SumTerms.from_config(config, rho)
                naive = 0.0
                for mi in range(1, m + 1):
                    for ki in range(1, k + 1):
                        rate = t.rate_sum(mi, ki)
                        naive += (t.alt_coeff(mi, ki) * ki * t.omega_g
                                  * exp(-rate * t.c1) * -math.expm1(-rate * t.c2) / rate)
                assert abs(naive - marginal_band_prob(config, rho)) < 1e-10

    def test_binomial_coefficients_exact(self):
        t = SumTerms(c1=0.1, c2=0.2, m_pu=10, k_su=10, omega_h=1.0, omega_g=1.0)
        assert t.alt_coeff(5, 5) == float(comb(10, 5)) ** 2
        assert t.alt_coeff(5, 4) == -float(comb(10, 5) * comb(10, 4))


class TestRegimeFlagAndCurve:
    def test_flag_definition(self, reference_config):
        assert asymptotic_regime_violated(reference_config, rho_of(20.0), 1.5)
        assert asymptotic_regime_violated(reference_config, rho_of(20.0), -0.1)
        assert asymptotic_regime_violated(reference_config, rho_of(0.0), 0.5)
        assert not asymptotic_regime_violated(reference_config, rho_of(20.0), 0.5)

    def test_flag_threshold_boundary(self, reference_config):
        cutoff = 10.0 * reference_config.gamma_p_th * max(reference_config.omega_h,
                                                      reference_config.omega_g)
        assert asymptotic_regime_violated(reference_config, cutoff * 0.99, 0.5)
        assert not asymptotic_regime_violated(reference_config, cutoff * 1.01, 0.5)

    def test_curve_fields(self, reference_config):
        rhos = [rho_of(p) for p in (0.0, 10.0, 20.0)]
        curve = evaluate_curve(reference_config, rhos)
        assert curve.diversity == 4
        assert curve.regime_violated == (True, True, False)
        assert all(0.0 <= v <= 1.0 for v in curve.p_outage)
        assert curve.p_outage_raw[2] == curve.p_outage[2]
        assert len(curve.p_highsnr) == 3

    def test_curve_rejects_empty_grid(self, reference_config):
        with pytest.raises(ValueError):
            evaluate_curve(reference_config, [])
