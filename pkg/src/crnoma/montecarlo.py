"""Reproducible Monte Carlo experiments over channel realizations.

A plan is a Cartesian product of schemes and transmit powers.  Each grid
point runs ``trials`` independent realizations; the channel draws for trial
``t`` of point ``p`` come from a counter-based substream keyed by
``(master_seed, purpose, p[, scheme])``, so the sampled values per trial are
a pure function of the plan.  In paired mode (the default) the scheme is
left out of the key and every scheme sees the same channel realizations,
which removes comparison variance between schemes and makes the per-trial
dominance relations deterministic; the random scheme's antenna draws always
come from their own substream so pairing is unaffected.

Accumulation is deterministic and worker-count invariant: trials are split
into fixed-size blocks, per-block sums are taken in trial order, and the
block sums are combined in block order with exact compensated summation no
matter which worker produced them.  Outage counts are integers and therefore
exact; the float accumulators are bit-identical for a given block size
(``TRIALS_PER_BLOCK`` is a fixed constant, not a tuning knob, because the
pairwise grouping inside a block moves float sums at the ulp level).
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import fsum, sqrt

import numpy as np

from .channel import (
    CHANNEL_PURPOSE,
    SELECTION_PURPOSE,
    SystemConfig,
    TrialStream,
    sample_gain_block,
    transmit_snr,
)
from .selection import (
    SCHEME_IDS,
    BlockOutcome,
    es_select_block,
    maxmin_select_block,
    random_select_block,
    sjas_select_block,
)

__all__ = ["ExperimentPlan", "OutageEstimate", "run_point", "run_plan", "collect_point"]

# Trials per execution block.  The counter-based streams make the sampled
# values independent of this constant; float accumulation order is not, so
# it is part of the reproducibility contract and stays fixed.
TRIALS_PER_BLOCK = 16384

_SCHEME_TAGS = {scheme: i for i, scheme in enumerate(SCHEME_IDS)}
_LOW_TRIAL_WARNING = 1000


@dataclass(frozen=True)
class ExperimentPlan:
    """Complete description of one Monte Carlo experiment."""

    config: SystemConfig
    noise_dbm: float
    power_grid_dbm: tuple[float, ...]
    schemes: tuple[str, ...]
    trials: int
    master_seed: int
    paired: bool = True
    workers: int = 1

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if len(self.power_grid_dbm) == 0:
            raise ValueError("power grid must be nonempty")
        if any(b <= a for a, b in zip(self.power_grid_dbm, self.power_grid_dbm[1:])):
            raise ValueError("power grid must be strictly increasing")
        if len(self.schemes) == 0:
            raise ValueError("at least one scheme is required")
        unknown = set(self.schemes) - set(SCHEME_IDS)
        if unknown:
            raise ValueError(f"unknown schemes: {sorted(unknown)}")
        if len(set(self.schemes)) != len(self.schemes):
            raise ValueError("schemes must be unique")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def rho(self, point_index: int) -> float:
        return transmit_snr(self.power_grid_dbm[point_index], self.noise_dbm)


@dataclass(frozen=True)
class OutageEstimate:
    """Monte Carlo estimate for one (scheme, power) point.

    ``mean_gamma_s`` and ``mean_b`` average over all trials, counting zeros
    for infeasible ones; ``ci95_halfwidth`` is the normal-approximation
    binomial interval for ``p_hat``.
    """

    scheme: str
    power_dbm: float
    rho: float
    p_hat: float
    trials: int
    ci95_halfwidth: float
    mean_gamma_s: float
    mean_b: float


def _block_ranges(trials: int, block: int) -> list[tuple[int, int]]:
    return [(start, min(start + block, trials)) for start in range(0, trials, block)]


def _streams(plan: ExperimentPlan, scheme: str, point_index: int) -> tuple[TrialStream, TrialStream]:
    tag = None if plan.paired else _SCHEME_TAGS[scheme]
    channel = TrialStream(
        master_seed=plan.master_seed,
        purpose=CHANNEL_PURPOSE,
        point_index=point_index,
        doubles_per_trial=plan.config.gains_per_trial,
        scheme_tag=tag,
    )
    selection = TrialStream(
        master_seed=plan.master_seed,
        purpose=SELECTION_PURPOSE,
        point_index=point_index,
        doubles_per_trial=1,
        scheme_tag=tag,
    )
    return channel, selection


def _eval_block(
    plan: ExperimentPlan,
    scheme: str,
    point_index: int,
    start: int,
    stop: int,
) -> BlockOutcome:
    channel_stream, selection_stream = _streams(plan, scheme, point_index)
    rho = plan.rho(point_index)
    h, g = sample_gain_block(plan.config, channel_stream, start, stop - start)
    if scheme == "sjas":
        return sjas_select_block(h, g, plan.config, rho)
    if scheme == "es":
        return es_select_block(h, g, plan.config, rho)
    if scheme == "maxmin":
        return maxmin_select_block(h, g, plan.config, rho)
    u = selection_stream.uniforms(start, stop - start)[:, 0]
    return random_select_block(h, g, plan.config, rho, u)


def _block_partial(
    plan: ExperimentPlan, scheme: str, point_index: int, span: tuple[int, int]
) -> tuple[int, float, float]:
    out = _eval_block(plan, scheme, point_index, *span)
    return int(out.outage.sum()), float(out.gamma_s.sum()), float(out.b.sum())


def run_point(plan: ExperimentPlan, scheme: str, point_index: int) -> OutageEstimate:
    """Estimate outage and averages for one scheme at one grid power."""
    if scheme not in plan.schemes:
        raise ValueError(f"scheme {scheme!r} is not part of the plan")
    if plan.trials < _LOW_TRIAL_WARNING:
        warnings.warn(
            f"{plan.trials} trials: normal-approximation confidence intervals "
            f"are unreliable below {_LOW_TRIAL_WARNING}",
            RuntimeWarning,
            stacklevel=2,
        )
    spans = _block_ranges(plan.trials, TRIALS_PER_BLOCK)
    if plan.workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=plan.workers) as pool:
            partials = list(
                pool.map(lambda s: _block_partial(plan, scheme, point_index, s), spans)
            )
    else:
        partials = [_block_partial(plan, scheme, point_index, s) for s in spans]
    outage_count = sum(p[0] for p in partials)
    sum_gamma = fsum(p[1] for p in partials)
    sum_b = fsum(p[2] for p in partials)
    p_hat = outage_count / plan.trials
    return OutageEstimate(
        scheme=scheme,
        power_dbm=plan.power_grid_dbm[point_index],
        rho=plan.rho(point_index),
        p_hat=p_hat,
        trials=plan.trials,
        ci95_halfwidth=1.96 * sqrt(p_hat * (1.0 - p_hat) / plan.trials),
        mean_gamma_s=sum_gamma / plan.trials,
        mean_b=sum_b / plan.trials,
    )


def run_plan(plan: ExperimentPlan) -> list[OutageEstimate]:
    """All (scheme, power) estimates: scheme order as given, power ascending."""
    return [
        run_point(plan, scheme, point_index)
        for scheme in plan.schemes
        for point_index in range(len(plan.power_grid_dbm))
    ]


def collect_point(plan: ExperimentPlan, scheme: str, point_index: int) -> BlockOutcome:
    """Per-trial outcome arrays for one point (for cross-scheme comparisons)."""
    parts = [
        _eval_block(plan, scheme, point_index, start, stop)
        for start, stop in _block_ranges(plan.trials, TRIALS_PER_BLOCK)
    ]
    return BlockOutcome(
        outage=np.concatenate([p.outage for p in parts]),
        gamma_s=np.concatenate([p.gamma_s for p in parts]),
        b=np.concatenate([p.b for p in parts]),
    )
