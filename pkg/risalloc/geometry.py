"""
Network geometry: where the AP, the two RIS tiers and the devices sit.

Coordinates are metres in a right-handed frame with ``z`` up; the ground
plane is ``z = 0``.
"""

from __future__ import annotations

# Standard Library
import logging
from dataclasses import dataclass, field
from enum import Enum

# Third Party
import numpy as np

# Local
from .exceptions import InvalidGeometryError

logger = logging.getLogger(__name__)


class RisTier(str, Enum):
    """Deployment tier of a reconfigurable surface."""

    TERRESTRIAL = "terrestrial"
    HAPS = "haps"


def _as_points(value, name: str, expected_rows: int | None = None) -> np.ndarray:
    points = np.array(value, dtype=np.float64)
    if points.ndim == 1:
        points = points.reshape(1, -1)
    if points.ndim != 2 or points.shape[1] != 3:
        raise InvalidGeometryError(f"{name} must be a list of 3-vectors, got shape {points.shape}")
    if expected_rows is not None and points.shape[0] != expected_rows:
        raise InvalidGeometryError(f"{name} must hold {expected_rows} points, got {points.shape[0]}")
    if not np.all(np.isfinite(points)):
        raise InvalidGeometryError(f"{name} has non-finite coordinates")
    points.setflags(write=False)
    return points


@dataclass(frozen=True, eq=False)
class NetworkGeometry:
    """
    Positions of every node plus the array sizes.

    Attributes:
        ap_position: AP array centre, shape (3,)
        ris_positions: RIS centres, shape (L, 3)
        ris_tiers: tier of each RIS, length L
        device_positions: device locations, shape (K, 3)
        n_antennas: AP antennas N
        ris_rows: elements along the horizontal axis, M_y
        ris_cols: elements along the vertical axis, M_z
    """

    ap_position: np.ndarray
    ris_positions: np.ndarray
    ris_tiers: tuple[RisTier, ...]
    device_positions: np.ndarray
    n_antennas: int
    ris_rows: int
    ris_cols: int
    _haps: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        ap = _as_points(self.ap_position, "ap_position", expected_rows=1)[0]
        ris = _as_points(self.ris_positions, "ris_positions")
        devices = _as_points(self.device_positions, "device_positions")
        tiers = tuple(RisTier(t) for t in self.ris_tiers)

        if devices.shape[0] < 1:
            raise InvalidGeometryError("at least one device is required")
        if ris.shape[0] < 1:
            raise InvalidGeometryError("at least one RIS is required")
        if len(tiers) != ris.shape[0]:
            raise InvalidGeometryError(f"{len(tiers)} tier tags for {ris.shape[0]} RISs")
        if self.n_antennas < 1 or self.ris_rows < 1 or self.ris_cols < 1:
            raise InvalidGeometryError("antenna and element counts must be positive")
        if devices.shape[0] > self.n_antennas:
            raise InvalidGeometryError(
                f"zero-forcing needs K <= N, got K={devices.shape[0]} and N={self.n_antennas}"
            )

        haps = tuple(i for i, t in enumerate(tiers) if t is RisTier.HAPS)
        terrestrial = [i for i, t in enumerate(tiers) if t is RisTier.TERRESTRIAL]
        if haps and terrestrial:
            lowest_haps = ris[list(haps), 2].min()
            highest_terrestrial = ris[terrestrial, 2].max()
            if lowest_haps <= highest_terrestrial:
                raise InvalidGeometryError(
                    f"HAPS-tier RIS altitude {lowest_haps} m must exceed every terrestrial height "
                    f"({highest_terrestrial} m)"
                )

        object.__setattr__(self, "ap_position", ap)
        object.__setattr__(self, "ris_positions", ris)
        object.__setattr__(self, "device_positions", devices)
        object.__setattr__(self, "ris_tiers", tiers)
        object.__setattr__(self, "_haps", haps)

    @property
    def n_devices(self) -> int:
        return self.device_positions.shape[0]

    @property
    def n_ris(self) -> int:
        return self.ris_positions.shape[0]

    @property
    def n_elements(self) -> int:
        return self.ris_rows * self.ris_cols

    @property
    def haps_indices(self) -> tuple[int, ...]:
        return self._haps

    def is_haps(self, ris_index: int) -> bool:
        return ris_index in self._haps


def sample_geometry(
    rng: np.random.Generator,
    *,
    n_devices: int,
    n_ris: int,
    n_antennas: int,
    ris_rows: int,
    ris_cols: int,
    area_side_m: float = 500.0,
    ris_ring_radius_m: float = 150.0,
    ris_height_m: float = 25.0,
    ap_height_m: float = 25.0,
    device_height_m: float = 1.5,
    haps_altitude_m: float = 20_000.0,
    haps_count: int = 1,
) -> NetworkGeometry:
    """
    Draw one random deployment.

    Devices are uniform over a square ground area centred on the origin, the
    AP sits at the centre, terrestrial RISs are uniform in angle on a ring
    around the AP, and the HAPS tier hovers above the area: the first HAPS RIS
    directly over the centre, any further ones over uniform points of the area.
    The last ``haps_count`` RIS indices are the HAPS tier.

    Draw order is fixed (devices, ring angles, extra HAPS offsets) so a given
    generator state always yields the same geometry.
    """
    if not 0 <= haps_count <= n_ris:
        raise InvalidGeometryError(f"haps_count must be within [0, {n_ris}], got {haps_count}")
    half = area_side_m / 2.0

    device_xy = rng.uniform(-half, half, size=(n_devices, 2))
    devices = np.column_stack([device_xy, np.full(n_devices, device_height_m)])

    n_terrestrial = n_ris - haps_count
    angles = rng.uniform(0.0, 2.0 * np.pi, size=n_terrestrial)
    terrestrial = np.column_stack(
        [
            ris_ring_radius_m * np.cos(angles),
            ris_ring_radius_m * np.sin(angles),
            np.full(n_terrestrial, ris_height_m),
        ]
    )

    haps_xy = np.zeros((haps_count, 2))
    if haps_count > 1:
        haps_xy[1:] = rng.uniform(-half, half, size=(haps_count - 1, 2))
    haps = np.column_stack([haps_xy, np.full(haps_count, haps_altitude_m)])

    tiers = (RisTier.TERRESTRIAL,) * n_terrestrial + (RisTier.HAPS,) * haps_count
    return NetworkGeometry(
        ap_position=np.array([0.0, 0.0, ap_height_m]),
        ris_positions=np.vstack([terrestrial, haps]),
        ris_tiers=tiers,
        device_positions=devices,
        n_antennas=n_antennas,
        ris_rows=ris_rows,
        ris_cols=ris_cols,
    )
