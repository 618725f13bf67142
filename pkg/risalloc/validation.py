"""
Self-checks run by ``ris_sim validate``.

Each property draws its own seeded instances and reports PASS/FAIL with a
short detail string. Instance sizes are kept small so the whole suite runs
in seconds.
"""

from __future__ import annotations

# Standard Library
import logging
import math
from collections.abc import Callable
from dataclasses import replace
from itertools import permutations
from typing import NamedTuple

# Third Party
import numpy as np

# Local
from .association import Association, build_preferences, deferred_acceptance, is_stable
from .beamforming import zf_beamformer
from .channel import noise_power
from .numerics import pseudo_inverse, pseudo_inverse_svd
from .power import kkt_residual, waterfill
from .simulation import Scheme, SimConfig, SweepAxis, run_trial
from .utils import linear_to_db

logger = logging.getLogger(__name__)


class PropertyResult(NamedTuple):
    name: str
    passed: bool
    detail: str


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def check_zf_orthogonality(rng: np.random.Generator, instances: int = 200) -> PropertyResult:
    worst = 0.0
    for _ in range(instances):
        k = int(rng.integers(2, 9))
        n = int(rng.integers(max(8, k), 65))
        g = _complex_gaussian(rng, (k, n))
        error = np.linalg.norm(g @ pseudo_inverse(g) - np.eye(k)) / np.linalg.norm(g)
        worst = max(worst, float(error))
    return PropertyResult("zf_orthogonality", worst <= 1e-9, f"worst ||GW - I||/||G|| = {worst:.2e}")


def check_zf_interference_free(rng: np.random.Generator, instances: int = 100) -> PropertyResult:
    worst = 0.0
    for _ in range(instances):
        g = _complex_gaussian(rng, (4, 16))
        bf = zf_beamformer(g)
        links = np.abs(g @ bf.directions) ** 2
        diagonal = np.diag(links)
        leakage = (links - np.diag(diagonal)).max() / links.max()
        gain_error = np.max(np.abs(diagonal - bf.column_gains) / bf.column_gains)
        worst = max(worst, float(leakage), float(gain_error))
    return PropertyResult("zf_interference_free", worst <= 1e-9, f"worst relative leakage {worst:.2e}")


def check_pinv_paths_agree(rng: np.random.Generator, instances: int = 100) -> PropertyResult:
    worst = 0.0
    for _ in range(instances):
        g = _complex_gaussian(rng, (6, 24))
        fast = pseudo_inverse(g)
        reference = pseudo_inverse_svd(g, 1e-10)
        worst = max(worst, float(np.linalg.norm(fast - reference) / np.linalg.norm(reference)))
    return PropertyResult("pinv_cholesky_matches_svd", worst <= 1e-9, f"worst relative difference {worst:.2e}")


def check_waterfill_budget(rng: np.random.Generator, instances: int = 500) -> PropertyResult:
    worst_budget = 0.0
    worst_kkt = 0.0
    for _ in range(instances):
        k = int(rng.integers(1, 9))
        gains = rng.exponential(1.0, k) + 1e-3
        budget = float(rng.uniform(0.1, 10.0))
        allocation = waterfill(gains, 1.0, budget)
        worst_budget = max(worst_budget, abs(allocation.total - budget) / budget)
        worst_kkt = max(worst_kkt, kkt_residual(allocation, gains, 1.0) / allocation.water_level)
    symmetric = waterfill(np.ones(4), 1.0, 2.0)
    symmetric_error = float(np.max(np.abs(symmetric.powers - 0.5)))
    passed = worst_budget <= 1e-12 and worst_kkt <= 1e-9 and symmetric_error <= 1e-12
    return PropertyResult(
        "waterfill_budget_and_kkt",
        passed,
        f"budget residual {worst_budget:.2e}, KKT residual {worst_kkt:.2e}, symmetric error {symmetric_error:.2e}",
    )


def check_waterfill_optimality(rng: np.random.Generator, instances: int = 50, samples: int = 2000) -> PropertyResult:
    worst_gap = -math.inf
    for _ in range(instances):
        k = int(rng.integers(2, 7))
        gains = rng.exponential(1.0, k) + 1e-3
        budget = float(rng.uniform(0.1, 10.0))
        optimum = float(np.sum(np.log2(1.0 + waterfill(gains, 1.0, budget).powers * gains)))
        random_powers = rng.dirichlet(np.ones(k), size=samples) * budget
        best_random = float(np.max(np.sum(np.log2(1.0 + random_powers * gains), axis=1)))
        worst_gap = max(worst_gap, best_random - optimum)
    return PropertyResult(
        "waterfill_beats_random_allocations", worst_gap <= 1e-9, f"best random minus water-filling {worst_gap:.2e}"
    )


def _device_optimal_stable(rates: np.ndarray) -> Association:
    n_ris, n_devices = rates.shape
    stable = [
        Association(chosen, n_ris)
        for chosen in permutations(range(n_ris), n_devices)
        if is_stable(Association(chosen, n_ris), rates).stable
    ]
    best = [max(rates[m.ris_of(k), k] for m in stable) for k in range(n_devices)]
    for matching in stable:
        if all(rates[matching.ris_of(k), k] == best[k] for k in range(n_devices)):
            return matching
    raise AssertionError("no device-optimal stable matching found")


def check_matching(rng: np.random.Generator, instances: int = 200, size: int = 5) -> PropertyResult:
    failures = []
    max_proposals = 0
    for i in range(instances):
        rates = rng.uniform(0.0, 10.0, (size, size))
        outcome = deferred_acceptance(build_preferences(rates), rates)
        max_proposals = max(max_proposals, outcome.proposals)
        if not is_stable(outcome.association, rates).stable:
            failures.append(f"#{i} unstable")
        elif outcome.association != _device_optimal_stable(rates):
            failures.append(f"#{i} not device-optimal")
        elif outcome.proposals > size * size:
            failures.append(f"#{i} {outcome.proposals} proposals")
    detail = f"max proposals {max_proposals}/{size * size}"
    if failures:
        detail += "; " + ", ".join(failures[:3])
    return PropertyResult("deferred_acceptance_stable_optimal", not failures, detail)


def check_noise_budget(rng: np.random.Generator) -> PropertyResult:
    level_dbm = linear_to_db(noise_power(-174.0, 400e6, 10.0)) + 30.0
    return PropertyResult("noise_budget", abs(level_dbm - (-77.98)) <= 0.01, f"sigma^2 = {level_dbm:.3f} dBm")


def _small_config(config: SimConfig, **changes) -> SimConfig:
    values = {
        "n_devices": 3,
        "n_ris": None,
        "n_antennas": 16,
        "ris_rows": 4,
        "ris_cols": 4,
        "trials": 1,
        "max_iterations": 30,
        "haps_count": min(config.haps_count, 3),
    }
    values.update(changes)
    return replace(config, sweep_axis=SweepAxis.NONE, sweep_values=(), **values)


def check_es_dominance(rng: np.random.Generator, config: SimConfig, trials: int = 5) -> PropertyResult:
    small = _small_config(config, schemes=(Scheme.JBPDA, Scheme.ES, Scheme.GS, Scheme.RS))
    violations = []
    for trial_index in range(trials):
        rates = run_trial(small, trial_index).sum_rates
        optimum = rates[Scheme.ES]
        beaten_by = [s.value for s, value in rates.items() if value > optimum * (1 + 1e-9)]
        if beaten_by:
            violations.append(f"trial {trial_index}: {','.join(beaten_by)} > ES")
    return PropertyResult("es_dominates_every_scheme", not violations, "; ".join(violations) or f"{trials} trials")


def check_determinism(rng: np.random.Generator, config: SimConfig) -> PropertyResult:
    small = _small_config(config, schemes=(Scheme.JBPDA, Scheme.GS, Scheme.RS))
    first = run_trial(small, 3)
    second = run_trial(small, 3)
    return PropertyResult("trial_determinism", first == second, f"seed {first.seed}")


Check = Callable[[np.random.Generator, SimConfig], PropertyResult]

CHECKS: tuple[Check, ...] = (
    lambda rng, config: check_zf_orthogonality(rng),
    lambda rng, config: check_zf_interference_free(rng),
    lambda rng, config: check_pinv_paths_agree(rng),
    lambda rng, config: check_waterfill_budget(rng),
    lambda rng, config: check_waterfill_optimality(rng),
    lambda rng, config: check_matching(rng),
    lambda rng, config: check_noise_budget(rng),
    check_es_dominance,
    check_determinism,
)


def run_validation(config: SimConfig) -> list[PropertyResult]:
    """Run every property; each gets its own stream derived from ``config.seed``."""
    streams = np.random.SeedSequence(config.seed).spawn(len(CHECKS))
    results = []
    for check, stream in zip(CHECKS, streams):
        result = check(np.random.default_rng(stream), config)
        logger.debug(f"{result.name}: {'PASS' if result.passed else 'FAIL'} ({result.detail})")
        results.append(result)
    return results
