"""
Water-filling power allocation over zero-forced (interference-free) links.

Maximising ``sum log2(1 + p_k gamma_k / sigma^2)`` under ``sum p_k <= P`` and
``p_k >= 0`` gives ``p_k = [1/mu - sigma^2/gamma_k]^+`` with the water level
``1/mu`` set so the budget is met with equality.
"""

from __future__ import annotations

# Standard Library
import logging
from dataclasses import dataclass

# Third Party
import numpy as np

# Local
from .exceptions import InvalidInputError, InvalidNoiseError

logger = logging.getLogger(__name__)

MAX_BISECTION_STEPS = 200
BUDGET_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class PowerAllocation:
    """
    Per-device transmit powers.

    Attributes:
        powers: watts, one per beam
        water_level: Lagrange multiplier ``mu`` of the budget (1/W)
        budget: ``P_AP`` in watts
    """

    powers: np.ndarray
    water_level: float
    budget: float

    @property
    def total(self) -> float:
        return float(np.sum(self.powers))

    @property
    def active(self) -> np.ndarray:
        return self.powers > 0


def _validate(gains, noise_power_w: float, budget_w: float) -> np.ndarray:
    g = np.asarray(gains, dtype=np.float64).ravel()
    if g.size == 0:
        raise InvalidInputError("water-filling needs at least one gain")
    if np.any(g <= 0) or not np.all(np.isfinite(g)):
        raise InvalidInputError("channel gains must be positive and finite")
    if not noise_power_w > 0:
        raise InvalidNoiseError(f"noise power must be positive, got {noise_power_w}")
    if not budget_w > 0:
        raise InvalidInputError(f"power budget must be positive, got {budget_w}")
    return g


def _fill(offsets: np.ndarray, height: float) -> np.ndarray:
    return np.maximum(height - offsets, 0.0)


def _water_height(offsets: np.ndarray, budget_w: float) -> float:
    """
    Water height above the lowest floor, ``1/mu - min_k sigma^2/gamma_k``.

    Working relative to the lowest floor keeps the arithmetic on the scale of
    ``P`` even when every floor is many orders of magnitude above it.

    Bisection on ``[0, P]`` (the fill is increasing in the height, and at ``P``
    the strongest link alone spends the budget) runs until the budget residual
    drops below ``1e-12 * P`` or 200 steps pass. The height is then recomputed
    in closed form on the active set, ``(P + sum_active offsets) / |active|``.
    """
    lo, hi = 0.0, budget_w
    height = hi
    for step in range(MAX_BISECTION_STEPS):
        height = 0.5 * (lo + hi)
        residual = _fill(offsets, height).sum() - budget_w
        if abs(residual) <= BUDGET_RTOL * budget_w:
            break
        if residual < 0:
            lo = height
        else:
            hi = height
    else:
        logger.debug(f"Water level bisection hit {MAX_BISECTION_STEPS} steps (bracket {lo:.3e}..{hi:.3e})")

    # growing or shrinking the active set in floor order keeps it consistent
    order = np.argsort(offsets, kind="stable")
    active = max(1, int(np.count_nonzero(_fill(offsets, height) > 0)))
    while True:
        chosen = offsets[order[:active]]
        height = (budget_w + chosen.sum()) / active
        if active < offsets.size and height > offsets[order[active]]:
            active += 1
        elif active > 1 and height <= chosen[-1]:
            active -= 1
        else:
            return height


def find_water_level(gains, noise_power_w: float, budget_w: float) -> float:
    """Water level ``mu`` (1/W) of the optimal allocation."""
    g = _validate(gains, noise_power_w, budget_w)
    floors = noise_power_w / g
    return 1.0 / (floors.min() + _water_height(floors - floors.min(), budget_w))


def waterfill(gains, noise_power_w: float, budget_w: float) -> PowerAllocation:
    """
    Sum-rate optimal powers for parallel links with power gains ``gamma_k``.

    Raises:
        InvalidInputError: On an empty gain vector, non-positive gains or budget
        InvalidNoiseError: On non-positive noise power
    """
    g = _validate(gains, noise_power_w, budget_w)
    floors = noise_power_w / g
    offsets = floors - floors.min()
    height = _water_height(offsets, budget_w)
    powers = _fill(offsets, height)
    powers *= budget_w / powers.sum()
    return PowerAllocation(powers=powers, water_level=1.0 / (floors.min() + height), budget=budget_w)


def kkt_residual(allocation: PowerAllocation, gains, noise_power_w: float) -> float:
    """
    Largest violation of the optimality conditions.

    Active devices must satisfy ``gamma_k / (sigma^2 + gamma_k p_k) = mu``,
    inactive ones ``gamma_k / sigma^2 <= mu``; powers must be nonnegative and
    stay within budget.
    """
    g = _validate(gains, noise_power_w, allocation.budget)
    p = np.asarray(allocation.powers, dtype=np.float64)
    mu = allocation.water_level
    marginal = g / (noise_power_w + g * p)
    active = p > 0
    stationarity = np.where(active, np.abs(marginal - mu), np.maximum(0.0, g / noise_power_w - mu))
    negativity = np.maximum(0.0, -p).max()
    overspend = max(0.0, p.sum() - allocation.budget)
    return float(max(stationarity.max(), negativity, overspend))
