"""
Device-RIS association.

Rate matrices are indexed ``R[l, k]`` (RIS rows, device columns). An
association is a partial one-to-one map from devices to RISs; with K != L
the smaller side is fully matched and the rest stay unmatched.
"""

from __future__ import annotations

# Standard Library
import logging
import math
from collections import deque
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass, field
from itertools import permutations
from typing import NamedTuple

# Third Party
import numpy as np
import numpy.typing as npt

# Local
from .exceptions import InvalidAssociationError, InvalidInputError, ProblemTooLargeError

logger = logging.getLogger(__name__)

RateMatrix = npt.NDArray[np.float64]


def validate_rate_matrix(rates) -> RateMatrix:
    """
    Return ``rates`` as a finite, nonnegative float array of shape (L, K).

    Raises:
        InvalidInputError: On wrong rank, empty axes, NaN/inf or negative entries
    """
    r = np.asarray(rates, dtype=np.float64)
    if r.ndim != 2 or r.shape[0] < 1 or r.shape[1] < 1:
        raise InvalidInputError(f"rate matrix must be a non-empty L x K array, got shape {r.shape}")
    if not np.all(np.isfinite(r)):
        raise InvalidInputError("rate matrix has non-finite entries")
    if np.any(r < 0):
        raise InvalidInputError("rate matrix has negative entries")
    return r


# =============================================================================
# Association
# =============================================================================


@dataclass(frozen=True)
class Association:
    """
    One-to-one device -> RIS matching.

    Attributes:
        ris_of_device: RIS index per device, ``None`` for unmatched devices
        n_ris: number of RISs L
    """

    ris_of_device: tuple[int | None, ...]
    n_ris: int
    _device_of_ris: tuple[int | None, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        assignment = tuple(None if r is None else int(r) for r in self.ris_of_device)
        if not assignment:
            raise InvalidAssociationError("an association needs at least one device")
        if self.n_ris < 1:
            raise InvalidAssociationError(f"an association needs at least one RIS, got L={self.n_ris}")
        owners: list[int | None] = [None] * self.n_ris
        for device, ris in enumerate(assignment):
            if ris is None:
                continue
            if not 0 <= ris < self.n_ris:
                raise InvalidAssociationError(f"device {device} mapped to RIS {ris}, outside 0..{self.n_ris - 1}")
            if owners[ris] is not None:
                raise InvalidAssociationError(f"RIS {ris} assigned to both device {owners[ris]} and device {device}")
            owners[ris] = device
        object.__setattr__(self, "ris_of_device", assignment)
        object.__setattr__(self, "_device_of_ris", tuple(owners))

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[int, int]], n_devices: int, n_ris: int) -> Association:
        """Build from ``(device, ris)`` pairs; a device listed twice is an error."""
        assignment: list[int | None] = [None] * n_devices
        for device, ris in pairs:
            if not 0 <= device < n_devices:
                raise InvalidAssociationError(f"device {device} outside 0..{n_devices - 1}")
            if assignment[device] is not None:
                raise InvalidAssociationError(f"device {device} appears in more than one pair")
            assignment[device] = ris
        return cls(tuple(assignment), n_ris)

    @classmethod
    def from_matrix(cls, upsilon) -> Association:
        """Build from a K x L binary matrix."""
        matrix = np.asarray(upsilon)
        if matrix.ndim != 2 or not np.isin(matrix, (0, 1)).all():
            raise InvalidAssociationError("association matrix must be a binary K x L array")
        if np.any(matrix.sum(axis=1) > 1) or np.any(matrix.sum(axis=0) > 1):
            raise InvalidAssociationError("association matrix is not one-to-one")
        assignment = tuple(int(np.argmax(row)) if row.any() else None for row in matrix)
        return cls(assignment, matrix.shape[1])

    @property
    def n_devices(self) -> int:
        return len(self.ris_of_device)

    @property
    def matched_devices(self) -> list[int]:
        return [k for k, ris in enumerate(self.ris_of_device) if ris is not None]

    @property
    def unmatched(self) -> frozenset[int]:
        """Devices left without a RIS."""
        return frozenset(k for k, ris in enumerate(self.ris_of_device) if ris is None)

    @property
    def matched_count(self) -> int:
        return sum(ris is not None for ris in self.ris_of_device)

    def ris_of(self, device: int) -> int | None:
        return self.ris_of_device[device]

    def device_of(self, ris: int) -> int | None:
        return self._device_of_ris[ris]

    def pairs(self) -> list[tuple[int, int]]:
        """Matched ``(device, ris)`` pairs in ascending device order."""
        return [(k, ris) for k, ris in enumerate(self.ris_of_device) if ris is not None]

    def matrix(self) -> np.ndarray:
        """Binary K x L view (``Upsilon``)."""
        upsilon = np.zeros((self.n_devices, self.n_ris), dtype=np.int8)
        for device, ris in self.pairs():
            upsilon[device, ris] = 1
        return upsilon


# =============================================================================
# Preferences & Deferred Acceptance
# =============================================================================


@dataclass(frozen=True)
class PreferenceLists:
    """
    Strict preference orders derived from a rate matrix.

    Attributes:
        device_prefs: per device, RIS indices from most to least preferred
        ris_prefs: per RIS, device indices from most to least preferred
        ris_rank: ``ris_rank[l, k]`` is the position of device k in RIS l's list
    """

    device_prefs: tuple[tuple[int, ...], ...]
    ris_prefs: tuple[tuple[int, ...], ...]
    ris_rank: np.ndarray = field(compare=False, repr=False)


def build_preferences(rates) -> PreferenceLists:
    """
    Sort each side's options by descending rate; ties go to the lower index.
    """
    r = validate_rate_matrix(rates)
    # stable sort on -R keeps equal entries in ascending index order
    device_order = np.argsort(-r.T, axis=1, kind="stable")
    ris_order = np.argsort(-r, axis=1, kind="stable")
    ris_rank = np.empty_like(ris_order)
    rows = np.arange(r.shape[0])[:, None]
    ris_rank[rows, ris_order] = np.arange(r.shape[1])[None, :]
    return PreferenceLists(
        device_prefs=tuple(tuple(int(i) for i in row) for row in device_order),
        ris_prefs=tuple(tuple(int(i) for i in row) for row in ris_order),
        ris_rank=ris_rank,
    )


class MatchingOutcome(NamedTuple):
    association: Association
    proposals: int


def deferred_acceptance(prefs: PreferenceLists, rates) -> MatchingOutcome:
    """
    Device-proposing deferred acceptance.

    Every free device proposes to its best RIS not yet tried; a RIS holds the
    proposer it ranks highest and releases the other. The result is the
    device-optimal stable matching, reached after at most K * L proposals.
    """
    r = validate_rate_matrix(rates)
    n_ris, n_devices = r.shape
    if len(prefs.device_prefs) != n_devices or len(prefs.ris_prefs) != n_ris:
        raise InvalidInputError(f"preference lists do not match a {n_ris} x {n_devices} rate matrix")

    next_choice = [0] * n_devices
    holder: list[int | None] = [None] * n_ris
    free = deque(range(n_devices))
    proposals = 0

    while free:
        device = free.popleft()
        if next_choice[device] >= n_ris:
            # rejected everywhere, stays unmatched
            continue
        ris = prefs.device_prefs[device][next_choice[device]]
        next_choice[device] += 1
        proposals += 1

        current = holder[ris]
        if current is None:
            holder[ris] = device
        elif prefs.ris_rank[ris, device] < prefs.ris_rank[ris, current]:
            holder[ris] = device
            free.append(current)
        else:
            free.append(device)

    assignment: list[int | None] = [None] * n_devices
    for ris, device in enumerate(holder):
        if device is not None:
            assignment[device] = ris
    association = Association(tuple(assignment), n_ris)
    logger.debug(f"Deferred acceptance matched {association.matched_count} devices in {proposals} proposals")
    return MatchingOutcome(association, proposals)


class StabilityReport(NamedTuple):
    stable: bool
    blocking_pair: tuple[int, int] | None = None


def is_stable(association: Association, rates) -> StabilityReport:
    """
    Look for a blocking pair under ``rates``.

    A pair (device d, RIS r) blocks when both strictly prefer each other to
    their current partners; being unmatched is worse than any partner.
    Devices are scanned in ascending order and each device's RISs in
    ascending index, so the reported pair is the first one in that order.
    """
    r = validate_rate_matrix(rates)
    if r.shape != (association.n_ris, association.n_devices):
        raise InvalidAssociationError(
            f"association is {association.n_ris} x {association.n_devices} but rates are {r.shape}"
        )
    for device in range(association.n_devices):
        own = association.ris_of(device)
        for ris in range(association.n_ris):
            if ris == own:
                continue
            device_gains = own is None or r[ris, device] > r[own, device]
            if not device_gains:
                continue
            partner = association.device_of(ris)
            if partner is None or r[ris, device] > r[ris, partner]:
                return StabilityReport(False, (device, ris))
    return StabilityReport(True, None)


# =============================================================================
# Baselines
# =============================================================================


def enumerate_associations(n_devices: int, n_ris: int) -> Iterator[Association]:
    """Every one-to-one matching of size ``min(K, L)``."""
    if n_devices <= n_ris:
        for chosen in permutations(range(n_ris), n_devices):
            yield Association(chosen, n_ris)
    else:
        for chosen in permutations(range(n_devices), n_ris):
            assignment: list[int | None] = [None] * n_devices
            for ris, device in enumerate(chosen):
                assignment[device] = ris
            yield Association(tuple(assignment), n_ris)


def exhaustive_search(
    evaluate: Callable[[Association], float], n_devices: int, n_ris: int, max_size: int = 9
) -> Association:
    """
    Score every matching with ``evaluate`` and keep the best.

    The first of several equal scores wins, in enumeration order.

    Raises:
        ProblemTooLargeError: If ``min(K, L) > max_size`` or the candidate count
            exceeds ``max_size!``
    """
    size = min(n_devices, n_ris)
    candidates = math.perm(max(n_devices, n_ris), size)
    if size > max_size or candidates > math.factorial(max_size):
        raise ProblemTooLargeError(
            f"exhaustive search over {candidates} matchings (K={n_devices}, L={n_ris}) exceeds the "
            f"size guard of {max_size}"
        )
    best: Association | None = None
    best_value = -math.inf
    for association in enumerate_associations(n_devices, n_ris):
        value = evaluate(association)
        if value > best_value:
            best, best_value = association, value
    logger.debug(f"Exhaustive search scored {candidates} matchings, best sum rate {best_value:.6f}")
    return best


def greedy_association(rates, rng: np.random.Generator) -> Association:
    """
    Greedy baseline.

    Each unmatched device asks for its favourite RIS that is still free; a RIS
    asked by several devices accepts one of them uniformly at random. Losers
    try again in the next round with the RISs that remain, until they are
    matched or nothing is left.
    """
    r = validate_rate_matrix(rates)
    n_ris, n_devices = r.shape
    prefs = build_preferences(r)
    assignment: list[int | None] = [None] * n_devices
    occupied = [False] * n_ris
    pending = list(range(n_devices))

    while pending:
        requests: dict[int, list[int]] = {}
        for device in pending:
            choice = next((ris for ris in prefs.device_prefs[device] if not occupied[ris]), None)
            if choice is not None:
                requests.setdefault(choice, []).append(device)
        if not requests:
            break
        losers = []
        for ris in sorted(requests):
            suitors = requests[ris]
            winner = suitors[int(rng.integers(len(suitors)))] if len(suitors) > 1 else suitors[0]
            assignment[winner] = ris
            occupied[ris] = True
            losers.extend(device for device in suitors if device != winner)
        pending = sorted(losers)

    return Association(tuple(assignment), n_ris)


def random_association(n_devices: int, n_ris: int, rng: np.random.Generator) -> Association:
    """Uniformly random one-to-one matching of size ``min(K, L)``."""
    if n_devices < 1 or n_ris < 1:
        raise InvalidInputError(f"need at least one device and one RIS, got K={n_devices}, L={n_ris}")
    if n_devices <= n_ris:
        chosen = rng.permutation(n_ris)[:n_devices]
        return Association(tuple(int(ris) for ris in chosen), n_ris)
    chosen = rng.permutation(n_devices)[:n_ris]
    assignment: list[int | None] = [None] * n_devices
    for ris, device in enumerate(chosen):
        assignment[int(device)] = ris
    return Association(tuple(assignment), n_ris)
