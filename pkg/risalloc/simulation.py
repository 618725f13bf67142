"""
Joint beamforming, power allocation and device association (JBPDA) and the
Monte Carlo campaigns that compare it with the ES/GS/RS baselines.
"""

from __future__ import annotations

# Standard Library
import logging
import math
import time
from collections.abc import Callable, Sequence
from dataclasses import asdict, dataclass, field, replace
from enum import Enum

# Third Party
import numpy as np

# Local
from . import app_settings
from .association import (
    Association,
    build_preferences,
    deferred_acceptance,
    exhaustive_search,
    greedy_association,
    random_association,
)
from .beamforming import Beamformer, RateVector, sinr_zf, zf_beamformer
from .channel import CarrierConfig, ChannelRealization, realize_channels
from .exceptions import (
    ConfigValidationError,
    DegenerateChannelError,
    DegenerateDistanceError,
    InvalidInputError,
    SingularChannelError,
    TrialFailedError,
)
from .geometry import sample_geometry
from .numerics import project_out_rows
from .power import PowerAllocation, waterfill
from .utils import dbm_to_watts, format_rate

logger = logging.getLogger(__name__)


class Scheme(str, Enum):
    """Association strategies compared in a campaign."""

    JBPDA = "JBPDA"
    ES = "ES"
    GS = "GS"
    RS = "RS"


ALL_SCHEMES = (Scheme.JBPDA, Scheme.ES, Scheme.GS, Scheme.RS)


class SweepAxis(str, Enum):
    NONE = "none"
    POWER = "power"
    DEVICES = "devices"
    ANTENNAS = "antennas"


# =============================================================================
# Configuration
# =============================================================================


@dataclass(frozen=True)
class SimConfig:
    """
    Everything a campaign needs. Defaults are the 15 GHz / 256-antenna /
    100 x 100-element setup at 23 dBm.

    ``n_ris=None`` means one RIS per device (L = K), which keeps that
    relation when the device count is swept. Powers are held in dBm;
    ``ap_power_w`` is the one place they become watts.
    """

    n_devices: int = 7
    n_ris: int | None = None
    n_antennas: int = 256
    ris_rows: int = 100
    ris_cols: int = 100
    carrier_frequency_hz: float = 15e9
    bandwidth_hz: float = 400e6
    noise_density_dbm_hz: float = -174.0
    noise_figure_db: float = 10.0
    element_side_m: float | None = None
    ap_power_dbm: float = 23.0
    trials: int = 1000
    seed: int = 0
    schemes: tuple[Scheme, ...] = ALL_SCHEMES
    max_iterations: int = 100
    rate_tolerance: float = 1e-4
    max_redraws: int = 10
    sweep_axis: SweepAxis = SweepAxis.NONE
    sweep_values: tuple[float, ...] = ()
    area_side_m: float = 500.0
    ris_ring_radius_m: float = 150.0
    ris_height_m: float = 25.0
    ap_height_m: float = 25.0
    device_height_m: float = 1.5
    haps_altitude_m: float = 20_000.0
    haps_count: int = 1

    def __post_init__(self):
        object.__setattr__(self, "schemes", tuple(Scheme(s) for s in self.schemes))
        object.__setattr__(self, "sweep_axis", SweepAxis(self.sweep_axis))
        object.__setattr__(self, "sweep_values", tuple(float(v) for v in self.sweep_values))
        self._validate()

    def _validate(self):
        def require(condition: bool, name: str, message: str):
            if not condition:
                raise ConfigValidationError(name, message)

        for name in ("n_devices", "n_antennas", "ris_rows", "ris_cols", "trials", "max_iterations"):
            value = getattr(self, name)
            require(isinstance(value, int) and value >= 1, name, f"must be a positive integer, got {value!r}")
        require(self.n_ris is None or (isinstance(self.n_ris, int) and self.n_ris >= 1), "n_ris", "must be >= 1")
        require(
            self.n_devices <= self.n_antennas,
            "n_devices",
            f"zero-forcing needs n_devices <= n_antennas ({self.n_devices} > {self.n_antennas})",
        )
        for name in ("carrier_frequency_hz", "bandwidth_hz", "area_side_m", "ris_ring_radius_m"):
            value = getattr(self, name)
            require(math.isfinite(value) and value > 0, name, f"must be positive, got {value!r}")
        require(
            self.element_side_m is None or (math.isfinite(self.element_side_m) and self.element_side_m > 0),
            "element_side_m",
            "must be positive",
        )
        for name in ("noise_density_dbm_hz", "noise_figure_db", "ap_power_dbm"):
            require(math.isfinite(getattr(self, name)), name, "must be finite")
        require(isinstance(self.seed, int) and 0 <= self.seed < 2**64, "seed", "must be an unsigned 64-bit integer")
        require(len(self.schemes) >= 1, "schemes", "at least one scheme is required")
        require(len(set(self.schemes)) == len(self.schemes), "schemes", "schemes must not repeat")
        require(self.rate_tolerance >= 0, "rate_tolerance", "must be nonnegative")
        require(isinstance(self.max_redraws, int) and self.max_redraws >= 0, "max_redraws", "must be >= 0")
        require(
            isinstance(self.haps_count, int) and 0 <= self.haps_count <= self.ris_count,
            "haps_count",
            f"must lie within [0, {self.ris_count}]",
        )
        require(
            self.haps_count == 0 or self.haps_altitude_m > max(self.ris_height_m, self.ap_height_m),
            "haps_altitude_m",
            "HAPS tier must fly above the terrestrial nodes",
        )
        require(self.device_height_m >= 0, "device_height_m", "must be nonnegative")

        if self.sweep_axis is SweepAxis.NONE:
            require(not self.sweep_values, "sweep_values", "must be empty when sweep_axis is none")
        else:
            require(len(self.sweep_values) >= 1, "sweep_values", f"a {self.sweep_axis.value} sweep needs values")
            if self.sweep_axis in (SweepAxis.DEVICES, SweepAxis.ANTENNAS):
                require(
                    all(float(v).is_integer() and v >= 1 for v in self.sweep_values),
                    "sweep_values",
                    "device and antenna counts must be positive integers",
                )
            for value in self.sweep_values:
                # surfaces invariant breaches of individual points before any trial runs
                self.at(value)

        if Scheme.ES in self.schemes:
            size = min(self.n_devices, self.ris_count)
            guard = app_settings.RIS_SIM_ES_MAX_SIZE
            require(
                size <= guard and math.perm(max(self.n_devices, self.ris_count), size) <= math.factorial(guard),
                "schemes",
                f"ES needs min(K, L) <= {guard}, got K={self.n_devices}, L={self.ris_count}",
            )

    @property
    def ris_count(self) -> int:
        return self.n_devices if self.n_ris is None else self.n_ris

    @property
    def ap_power_w(self) -> float:
        return dbm_to_watts(self.ap_power_dbm)

    @property
    def carrier(self) -> CarrierConfig:
        return CarrierConfig(
            carrier_frequency_hz=self.carrier_frequency_hz,
            bandwidth_hz=self.bandwidth_hz,
            noise_density_dbm_hz=self.noise_density_dbm_hz,
            noise_figure_db=self.noise_figure_db,
            element_side_m=self.element_side_m,
        )

    def at(self, value: float) -> SimConfig:
        """Single-point config with the sweep axis bound to ``value``."""
        changes: dict = {"sweep_axis": SweepAxis.NONE, "sweep_values": ()}
        if self.sweep_axis is SweepAxis.POWER:
            changes["ap_power_dbm"] = float(value)
        elif self.sweep_axis is SweepAxis.DEVICES:
            changes["n_devices"] = int(value)
        elif self.sweep_axis is SweepAxis.ANTENNAS:
            changes["n_antennas"] = int(value)
        return replace(self, **changes)

    def to_dict(self) -> dict:
        """JSON-safe representation (enums as their values)."""
        data = asdict(self)
        data["schemes"] = [s.value for s in self.schemes]
        data["sweep_axis"] = self.sweep_axis.value
        data["sweep_values"] = list(self.sweep_values)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> SimConfig:
        values = dict(data)
        values["schemes"] = tuple(values.get("schemes", ()))
        values["sweep_values"] = tuple(values.get("sweep_values", ()))
        return cls(**values)


# =============================================================================
# Per-association Evaluation
# =============================================================================


@dataclass(frozen=True, eq=False)
class AssociationEvaluation:
    """Outcome of ZF + water-filling for one association."""

    association: Association
    beamformer: Beamformer
    power: PowerAllocation
    rates: RateVector
    device_rates: np.ndarray

    @property
    def sum_rate(self) -> float:
        return float(np.sum(self.device_rates))


def evaluate_association(
    realization: ChannelRealization, association: Association, budget_w: float
) -> AssociationEvaluation:
    """
    Run the fixed-association pipeline: stack ``G``, zero-force, water-fill,
    and score. Unmatched devices get rate 0.
    """
    if association.matched_count == 0:
        raise InvalidInputError("cannot evaluate an association with no matched devices")
    channel = realization.stacked(association)
    beamformer = zf_beamformer(
        channel,
        rtol=app_settings.RIS_SIM_PINV_RTOL,
        svd_fallback_condition=app_settings.RIS_SIM_SVD_FALLBACK_CONDITION,
    )
    noise = realization.noise_power_w
    power = waterfill(beamformer.column_gains, noise, budget_w)
    rates = sinr_zf(beamformer, power.powers, noise)
    device_rates = np.zeros(association.n_devices)
    device_rates[association.matched_devices] = rates.rates
    return AssociationEvaluation(association, beamformer, power, rates, device_rates)


def proxy_rates(realization: ChannelRealization, budget_w: float) -> np.ndarray:
    """
    Matching-independent utilities ``log2(1 + (P/K) ||g_lk||^2 / sigma^2)``,
    shape (L, K).
    """
    share = budget_w / realization.geometry.n_devices
    return np.log2(1.0 + share * realization.cascade_gains / realization.noise_power_w)


def reassignment_rates(
    realization: ChannelRealization, evaluation: AssociationEvaluation, budget_w: float
) -> np.ndarray:
    """
    Utilities refined by the current solution, shape (L, K).

    Entry (l, k) is the zero-forcing rate device k would get by moving to
    RIS l while every other matched device stays where it is. The device now
    on RIS l has to leave it, so its row is dropped; the gain is the part of
    ``g_lk`` orthogonal to the rows of ``G`` that remain. Device k is costed
    at its current power, or at ``P/K`` while it has none. For the pair k is
    already on this equals its actual rate.
    """
    association = evaluation.association
    cascades = realization.cascaded
    n_devices = association.n_devices
    n_ris = association.n_ris
    noise = realization.noise_power_w
    matched = association.matched_devices
    rows = realization.stacked(association)
    power_of = dict(zip(matched, evaluation.power.powers))
    fair_share = budget_w / n_devices

    utilities = np.empty((n_ris, n_devices))
    for device in range(n_devices):
        others = [i for i, other in enumerate(matched) if other != device]
        gains = np.empty(n_ris)

        # free RISs and the device's own keep every other row in place
        kept_all = [ris for ris in range(n_ris) if association.device_of(ris) in (None, device)]
        if kept_all:
            residual = project_out_rows(rows[others], cascades[kept_all, device, :].T)
            gains[kept_all] = np.sum(np.abs(residual) ** 2, axis=0)

        for ris in range(n_ris):
            holder = association.device_of(ris)
            if holder is None or holder == device:
                continue
            remaining = [i for i in others if matched[i] != holder]
            residual = project_out_rows(rows[remaining], cascades[ris, device, :, None])
            gains[ris] = float(np.sum(np.abs(residual) ** 2))

        power = power_of.get(device, 0.0)
        if power <= 0:
            power = fair_share
        utilities[:, device] = np.log2(1.0 + power * gains / noise)
    return utilities


# =============================================================================
# JBPDA
# =============================================================================


@dataclass(frozen=True, eq=False)
class JbpdaResult:
    """
    Best iterate of the alternating optimisation.

    Attributes:
        evaluation: association, beamformer, powers and rates of the best iterate
        utilities: rate matrix whose deferred-acceptance matching is the best iterate
        proposals: proposals made by that matching round
        trace: sum rate of every iteration
        best_trace: running maximum of ``trace``
        converged: whether the loop stopped before ``max_iterations``
    """

    evaluation: AssociationEvaluation
    utilities: np.ndarray
    proposals: int
    trace: tuple[float, ...]
    best_trace: tuple[float, ...]
    converged: bool

    @property
    def association(self) -> Association:
        return self.evaluation.association

    @property
    def beamformer(self) -> Beamformer:
        return self.evaluation.beamformer

    @property
    def power(self) -> PowerAllocation:
        return self.evaluation.power

    @property
    def sum_rate(self) -> float:
        return self.evaluation.sum_rate

    @property
    def iterations(self) -> int:
        return len(self.trace)


def jbpda_solve(realization: ChannelRealization, config: SimConfig) -> JbpdaResult:
    """
    Alternate association, zero forcing and water-filling.

    Iteration 1 matches on interference-blind proxy rates; later iterations
    match on :func:`reassignment_rates` of the previous solution. The loop
    stops when matching returns an association already evaluated (a fixed
    point or a cycle), when the sum rate moves by at most ``rate_tolerance``
    relative, or after ``max_iterations``. The best iterate seen is returned.
    """
    budget = config.ap_power_w
    utilities = proxy_rates(realization, budget)
    outcome = deferred_acceptance(build_preferences(utilities), utilities)

    best: tuple[AssociationEvaluation, np.ndarray, int] | None = None
    trace: list[float] = []
    best_trace: list[float] = []
    converged = False
    visited = {outcome.association}

    for iteration in range(1, config.max_iterations + 1):
        evaluation = evaluate_association(realization, outcome.association, budget)
        sum_rate = evaluation.sum_rate
        if best is None or sum_rate > best[0].sum_rate:
            best = (evaluation, utilities, outcome.proposals)
        if trace and abs(sum_rate - trace[-1]) <= config.rate_tolerance * abs(sum_rate):
            converged = True
        trace.append(sum_rate)
        best_trace.append(best[0].sum_rate)
        logger.debug(
            f"JBPDA iteration {iteration}: {format_rate(sum_rate)} (best {format_rate(best_trace[-1])}), "
            f"association {evaluation.association.ris_of_device}"
        )
        if converged:
            break

        utilities = reassignment_rates(realization, evaluation, budget)
        outcome = deferred_acceptance(build_preferences(utilities), utilities)
        # the next utilities depend only on the association, so a repeat means a cycle
        if outcome.association in visited:
            converged = True
            break
        visited.add(outcome.association)

    evaluation, utilities, proposals = best
    return JbpdaResult(
        evaluation=evaluation,
        utilities=utilities,
        proposals=proposals,
        trace=tuple(trace),
        best_trace=tuple(best_trace),
        converged=converged,
    )


# =============================================================================
# Trials
# =============================================================================


@dataclass(frozen=True)
class SchemeResult:
    """Score of one scheme on one channel realization."""

    scheme: Scheme
    sum_rate: float
    device_rates: tuple[float, ...]
    matched_devices: int
    haps_served: int
    proposals: int | None = None
    trace: tuple[float, ...] = ()
    best_trace: tuple[float, ...] = ()
    converged: bool | None = None
    wall_time: float = field(default=0.0, compare=False)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["scheme"] = self.scheme.value
        for key in ("device_rates", "trace", "best_trace"):
            data[key] = list(data[key])
        return data

    @classmethod
    def from_dict(cls, data: dict) -> SchemeResult:
        values = dict(data)
        values["scheme"] = Scheme(values["scheme"])
        for key in ("device_rates", "trace", "best_trace"):
            values[key] = tuple(values.get(key, ()))
        return cls(**values)


@dataclass(frozen=True)
class TrialReport:
    """All schemes evaluated on one seeded realization."""

    trial_index: int
    seed: int
    redraws: int
    results: tuple[SchemeResult, ...]

    def result(self, scheme: Scheme | str) -> SchemeResult:
        scheme = Scheme(scheme)
        for item in self.results:
            if item.scheme is scheme:
                return item
        raise KeyError(scheme.value)

    @property
    def sum_rates(self) -> dict[Scheme, float]:
        return {item.scheme: item.sum_rate for item in self.results}

    def to_dict(self) -> dict:
        return {
            "trial_index": self.trial_index,
            "seed": self.seed,
            "redraws": self.redraws,
            "results": [item.to_dict() for item in self.results],
        }

    @classmethod
    def from_dict(cls, data: dict) -> TrialReport:
        return cls(
            trial_index=data["trial_index"],
            seed=data["seed"],
            redraws=data["redraws"],
            results=tuple(SchemeResult.from_dict(item) for item in data["results"]),
        )


def trial_seed(config: SimConfig, trial_index: int) -> int:
    return config.seed ^ trial_index


def _scheme_result(
    scheme: Scheme, evaluation: AssociationEvaluation, realization: ChannelRealization, started: float, **extra
) -> SchemeResult:
    association = evaluation.association
    return SchemeResult(
        scheme=scheme,
        sum_rate=evaluation.sum_rate,
        device_rates=tuple(float(r) for r in evaluation.device_rates),
        matched_devices=association.matched_count,
        haps_served=sum(realization.geometry.is_haps(ris) for _, ris in association.pairs()),
        wall_time=time.perf_counter() - started,
        **extra,
    )


def run_schemes(
    realization: ChannelRealization,
    config: SimConfig,
    greedy_rng: np.random.Generator,
    random_rng: np.random.Generator,
) -> tuple[SchemeResult, ...]:
    """Evaluate every configured scheme on the same realization."""
    budget = config.ap_power_w
    geometry = realization.geometry
    results = []
    for scheme in config.schemes:
        started = time.perf_counter()
        if scheme is Scheme.JBPDA:
            solved = jbpda_solve(realization, config)
            results.append(
                _scheme_result(
                    scheme,
                    solved.evaluation,
                    realization,
                    started,
                    proposals=solved.proposals,
                    trace=solved.trace,
                    best_trace=solved.best_trace,
                    converged=solved.converged,
                )
            )
            continue

        if scheme is Scheme.ES:
            association = exhaustive_search(
                lambda candidate: evaluate_association(realization, candidate, budget).sum_rate,
                geometry.n_devices,
                geometry.n_ris,
                max_size=app_settings.RIS_SIM_ES_MAX_SIZE,
            )
        elif scheme is Scheme.GS:
            association = greedy_association(proxy_rates(realization, budget), greedy_rng)
        else:
            association = random_association(geometry.n_devices, geometry.n_ris, random_rng)
        evaluation = evaluate_association(realization, association, budget)
        results.append(_scheme_result(scheme, evaluation, realization, started))
    return tuple(results)


def run_trial(config: SimConfig, trial_index: int) -> TrialReport:
    """
    One Monte Carlo trial.

    The seed is ``config.seed ^ trial_index``; it feeds independent streams
    for the geometry, the greedy tie-breaks and the random baseline. A draw
    whose channel turns out singular is replaced by the next draw from the
    geometry stream, up to ``max_redraws`` times.

    Raises:
        TrialFailedError: If every draw was singular
    """
    seed = trial_seed(config, trial_index)
    geometry_seq, greedy_seq, random_seq = np.random.SeedSequence(seed).spawn(3)
    geometry_rng = np.random.default_rng(geometry_seq)
    carrier = config.carrier
    attempts = config.max_redraws + 1

    for attempt in range(attempts):
        geometry = sample_geometry(
            geometry_rng,
            n_devices=config.n_devices,
            n_ris=config.ris_count,
            n_antennas=config.n_antennas,
            ris_rows=config.ris_rows,
            ris_cols=config.ris_cols,
            area_side_m=config.area_side_m,
            ris_ring_radius_m=config.ris_ring_radius_m,
            ris_height_m=config.ris_height_m,
            ap_height_m=config.ap_height_m,
            device_height_m=config.device_height_m,
            haps_altitude_m=config.haps_altitude_m,
            haps_count=config.haps_count,
        )
        try:
            realization = realize_channels(geometry, carrier)
            results = run_schemes(
                realization,
                config,
                np.random.default_rng(greedy_seq),
                np.random.default_rng(random_seq),
            )
        except (SingularChannelError, DegenerateChannelError, DegenerateDistanceError) as e:
            logger.warning(f"Trial {trial_index} (seed {seed}) draw {attempt + 1} unusable, re-drawing: {e}")
            continue
        return TrialReport(trial_index=trial_index, seed=seed, redraws=attempt, results=results)

    logger.error(f"Trial {trial_index} (seed {seed}) failed after {attempts} draws")
    raise TrialFailedError(trial_index, seed, attempts)


# =============================================================================
# Aggregation
# =============================================================================


@dataclass(frozen=True)
class SchemeSummary:
    """Statistics of one scheme at one sweep point."""

    scheme: Scheme
    mean_sum_rate: float
    stderr: float
    trials: int
    min_sum_rate: float
    max_sum_rate: float
    mean_throughput_bps: float
    mean_haps_served: float
    mean_matched: float
    mean_wall_time_s: float = field(compare=False)
    gap_vs_jbpda_percent: float | None = None
    mean_iterations: float | None = None
    converged_fraction: float | None = None


@dataclass(frozen=True)
class ConvergenceTrace:
    """JBPDA sum rate per iteration, averaged over trials.

    Trials that stopped early contribute their final value to later iterations.
    """

    mean_sum_rate: tuple[float, ...]
    mean_best_sum_rate: tuple[float, ...]
    trials_running: tuple[int, ...]


@dataclass(frozen=True)
class SweepPointSummary:
    sweep_value: float | None
    summaries: tuple[SchemeSummary, ...]
    convergence: ConvergenceTrace | None = None

    def summary(self, scheme: Scheme | str) -> SchemeSummary:
        scheme = Scheme(scheme)
        for item in self.summaries:
            if item.scheme is scheme:
                return item
        raise KeyError(scheme.value)


@dataclass(frozen=True)
class AggregateReport:
    sweep_axis: SweepAxis
    points: tuple[SweepPointSummary, ...]

    def means(self, scheme: Scheme | str) -> list[float]:
        return [point.summary(scheme).mean_sum_rate for point in self.points]


def _relative_gap(reference: float, value: float) -> float | None:
    if value <= 0:
        return None
    return 100.0 * (reference - value) / value


def _pad(trace: Sequence[float], length: int) -> np.ndarray:
    values = np.asarray(trace, dtype=np.float64)
    return np.concatenate([values, np.full(length - values.size, values[-1])])


def summarize_convergence(reports: Sequence[TrialReport]) -> ConvergenceTrace | None:
    traces = [r.result(Scheme.JBPDA) for r in reports if any(x.scheme is Scheme.JBPDA for x in r.results)]
    traces = [t for t in traces if t.trace]
    if not traces:
        return None
    length = max(len(t.trace) for t in traces)
    raw = np.vstack([_pad(t.trace, length) for t in traces])
    best = np.vstack([_pad(t.best_trace, length) for t in traces])
    running = [sum(len(t.trace) > i for t in traces) for i in range(length)]
    return ConvergenceTrace(
        mean_sum_rate=tuple(float(v) for v in raw.mean(axis=0)),
        mean_best_sum_rate=tuple(float(v) for v in best.mean(axis=0)),
        trials_running=tuple(running),
    )


def summarize_point(
    sweep_value: float | None, config: SimConfig, reports: Sequence[TrialReport]
) -> SweepPointSummary:
    """Reduce the trial reports of one sweep point; order of ``reports`` does not matter."""
    ordered = sorted(reports, key=lambda r: r.trial_index)
    if not ordered:
        raise InvalidInputError("cannot summarize a sweep point without trials")

    raw: dict[Scheme, SchemeSummary] = {}
    for scheme in config.schemes:
        results = [r.result(scheme) for r in ordered]
        rates = np.array([r.sum_rate for r in results])
        low, high = float(rates.min()), float(rates.max())
        mean = float(np.clip(rates.mean(), low, high))
        stderr = float(rates.std(ddof=1) / math.sqrt(rates.size)) if rates.size > 1 else 0.0
        extra = {}
        if scheme is Scheme.JBPDA:
            extra["mean_iterations"] = float(np.mean([len(r.trace) for r in results]))
            extra["converged_fraction"] = float(np.mean([bool(r.converged) for r in results]))
        raw[scheme] = SchemeSummary(
            scheme=scheme,
            mean_sum_rate=mean,
            stderr=stderr,
            trials=int(rates.size),
            min_sum_rate=low,
            max_sum_rate=high,
            mean_throughput_bps=mean * config.bandwidth_hz,
            mean_haps_served=float(np.mean([r.haps_served for r in results])),
            mean_matched=float(np.mean([r.matched_devices for r in results])),
            mean_wall_time_s=float(np.mean([r.wall_time for r in results])),
            **extra,
        )

    if Scheme.JBPDA in raw:
        reference = raw[Scheme.JBPDA].mean_sum_rate
        raw = {
            scheme: replace(summary, gap_vs_jbpda_percent=_relative_gap(reference, summary.mean_sum_rate))
            for scheme, summary in raw.items()
        }

    return SweepPointSummary(
        sweep_value=sweep_value,
        summaries=tuple(raw[s] for s in config.schemes),
        convergence=summarize_convergence(ordered) if Scheme.JBPDA in raw else None,
    )


TrialRunner = Callable[[SimConfig], list[TrialReport]]


def monte_carlo_sweep(config: SimConfig, runner: TrialRunner | None = None) -> AggregateReport:
    """
    Run ``config.trials`` trials at every sweep point and aggregate them.

    Trial ``i`` uses the same seed at every point, so the points are compared
    on common geometry draws. ``runner`` executes the trials of one point; it
    defaults to :func:`risalloc.tasks.dispatch_trials`.
    """
    if runner is None:
        from .tasks import dispatch_trials

        runner = dispatch_trials

    if config.sweep_axis is SweepAxis.NONE:
        points = [(None, config)]
    else:
        points = [(value, config.at(value)) for value in config.sweep_values]

    summaries = []
    for i, (value, point) in enumerate(points, 1):
        started = time.perf_counter()
        reports = runner(point)
        summary = summarize_point(value, point, reports)
        summaries.append(summary)
        means = ", ".join(f"{s.scheme.value} {format_rate(s.mean_sum_rate)}" for s in summary.summaries)
        logger.info(
            f"[Point {i}/{len(points)}] {config.sweep_axis.value}={value}: {means} "
            f"in {time.perf_counter() - started:.1f}s"
        )
    return AggregateReport(sweep_axis=config.sweep_axis, points=tuple(summaries))
