"""
Line-of-sight channel synthesis for the AP -> RIS -> device links.

Each hop uses free-space path loss for its amplitude (centre-to-centre
distance) and a propagation phase ``-omega * r``. With ``per_element=True``
(the default) ``r`` is the exact distance to every RIS element and AP
antenna, which is what gives the cascaded channels their spatial structure;
``per_element=False`` evaluates the single-distance form instead.
"""

from __future__ import annotations

# Standard Library
import logging
import math
from dataclasses import dataclass, field

# Third Party
import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.spatial.distance import cdist

# Local
from .association import Association
from .exceptions import (
    DegenerateChannelError,
    DegenerateDistanceError,
    InvalidGeometryError,
    InvalidInputError,
    ShapeError,
)
from .geometry import NetworkGeometry, RisTier
from .numerics import hermitian

logger = logging.getLogger(__name__)


# =============================================================================
# Link Budget
# =============================================================================


def distance(p, q) -> float:
    """
    Euclidean distance between two 3-D points in metres.

    Raises:
        InvalidGeometryError: If a coordinate is NaN or infinite
    """
    a = np.asarray(p, dtype=np.float64)
    b = np.asarray(q, dtype=np.float64)
    if a.shape != (3,) or b.shape != (3,):
        raise InvalidGeometryError(f"distance needs two 3-vectors, got {a.shape} and {b.shape}")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise InvalidGeometryError("distance got non-finite coordinates")
    return float(np.linalg.norm(a - b))


def path_loss_linear(frequency_hz: float, distance_m):
    """
    Free-space power gain ``(c / (4 pi f d))^2``.

    Accepts a scalar or an array of distances and returns the same shape.

    Raises:
        InvalidInputError: If the frequency is not positive
        DegenerateDistanceError: If any distance is zero or negative
    """
    if frequency_hz <= 0:
        raise InvalidInputError(f"carrier frequency must be positive, got {frequency_hz}")
    d = np.asarray(distance_m, dtype=np.float64)
    if np.any(d <= 0) or not np.all(np.isfinite(d)):
        raise DegenerateDistanceError("path loss needs strictly positive finite distances")
    gain = (SPEED_OF_LIGHT / (4.0 * math.pi * frequency_hz * d)) ** 2
    return float(gain) if gain.ndim == 0 else gain


def noise_power(density_dbm_hz: float, bandwidth_hz: float, noise_figure_db: float) -> float:
    """
    Receiver noise power in watts.

    ``sigma^2 = 10^((N0 + 10 log10(B) + NF - 30) / 10)``.
    """
    if bandwidth_hz <= 0:
        raise InvalidInputError(f"bandwidth must be positive, got {bandwidth_hz}")
    level_dbm = density_dbm_hz + 10.0 * math.log10(bandwidth_hz) + noise_figure_db
    return 10.0 ** ((level_dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class CarrierConfig:
    """Radio parameters shared by every link. Defaults follow the 15 GHz upper mid-band setup."""

    carrier_frequency_hz: float = 15e9
    bandwidth_hz: float = 400e6
    noise_density_dbm_hz: float = -174.0
    noise_figure_db: float = 10.0
    element_side_m: float | None = None

    def __post_init__(self):
        if not self.carrier_frequency_hz > 0:
            raise InvalidInputError(f"carrier frequency must be positive, got {self.carrier_frequency_hz}")
        if not self.bandwidth_hz > 0:
            raise InvalidInputError(f"bandwidth must be positive, got {self.bandwidth_hz}")
        if self.element_side_m is None:
            object.__setattr__(self, "element_side_m", self.wavelength / 2.0)
        elif not self.element_side_m > 0:
            raise InvalidInputError(f"element side must be positive, got {self.element_side_m}")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency_hz

    @property
    def wave_number(self) -> float:
        return 2.0 * math.pi * self.carrier_frequency_hz / SPEED_OF_LIGHT

    @property
    def noise_power_w(self) -> float:
        return noise_power(self.noise_density_dbm_hz, self.bandwidth_hz, self.noise_figure_db)


# =============================================================================
# Array Layouts
# =============================================================================


def ap_antenna_positions(geometry: NetworkGeometry, carrier: CarrierConfig) -> np.ndarray:
    """Uniform linear array along ``x`` with half-wavelength spacing, centred on the AP."""
    n = geometry.n_antennas
    offsets = (np.arange(n) - (n - 1) / 2.0) * (carrier.wavelength / 2.0)
    positions = np.tile(geometry.ap_position, (n, 1))
    positions[:, 0] += offsets
    return positions


def _panel_axes(geometry: NetworkGeometry, ris_index: int) -> tuple[np.ndarray, np.ndarray]:
    # HAPS panels lie flat facing the ground; terrestrial panels stand upright facing the AP
    if geometry.ris_tiers[ris_index] is RisTier.HAPS:
        return np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
    towards = geometry.ris_positions[ris_index, :2] - geometry.ap_position[:2]
    norm = np.hypot(*towards)
    if norm == 0.0:
        horizontal = np.array([0.0, 1.0, 0.0])
    else:
        horizontal = np.array([-towards[1] / norm, towards[0] / norm, 0.0])
    return horizontal, np.array([0.0, 0.0, 1.0])


def ris_element_positions(geometry: NetworkGeometry, carrier: CarrierConfig, ris_index: int) -> np.ndarray:
    """
    Centres of the ``M_y x M_z`` elements of one RIS, shape (M, 3).

    Elements sit on a square grid of pitch ``element_side_m`` centred on the
    RIS position; element ``m = iy * M_z + iz``.
    """
    first_axis, second_axis = _panel_axes(geometry, ris_index)
    pitch = carrier.element_side_m
    iy = (np.arange(geometry.ris_rows) - (geometry.ris_rows - 1) / 2.0) * pitch
    iz = (np.arange(geometry.ris_cols) - (geometry.ris_cols - 1) / 2.0) * pitch
    grid_y, grid_z = np.meshgrid(iy, iz, indexing="ij")
    return (
        geometry.ris_positions[ris_index]
        + grid_y.reshape(-1, 1) * first_axis
        + grid_z.reshape(-1, 1) * second_axis
    )


# =============================================================================
# Per-link Channels
# =============================================================================


def gen_ap_ris_channel(
    geometry: NetworkGeometry, carrier: CarrierConfig, ris_index: int, per_element: bool = True
) -> np.ndarray:
    """
    AP -> RIS channel ``H_l``, shape (M, N).

    Entry (m, n) is ``sqrt(PL(r_a,l)) * exp(-j omega r)`` where ``r`` is the
    antenna-to-element distance (or ``r_a,l`` itself when ``per_element`` is
    False).
    """
    if not 0 <= ris_index < geometry.n_ris:
        raise IndexError(f"RIS index {ris_index} out of range for L={geometry.n_ris}")
    centre = distance(geometry.ap_position, geometry.ris_positions[ris_index])
    amplitude = math.sqrt(path_loss_linear(carrier.carrier_frequency_hz, centre))
    shape = (geometry.n_elements, geometry.n_antennas)
    if per_element:
        r = cdist(ris_element_positions(geometry, carrier, ris_index), ap_antenna_positions(geometry, carrier))
    else:
        r = np.full(shape, centre)
    return amplitude * np.exp(-1j * carrier.wave_number * r)


def ris_device_channels(
    geometry: NetworkGeometry, carrier: CarrierConfig, ris_index: int, per_element: bool = True
) -> np.ndarray:
    """RIS -> device channels of one RIS towards every device, shape (M, K)."""
    if not 0 <= ris_index < geometry.n_ris:
        raise IndexError(f"RIS index {ris_index} out of range for L={geometry.n_ris}")
    centre = cdist(geometry.ris_positions[ris_index : ris_index + 1], geometry.device_positions)[0]
    amplitude = np.sqrt(path_loss_linear(carrier.carrier_frequency_hz, centre))
    if per_element:
        r = cdist(ris_element_positions(geometry, carrier, ris_index), geometry.device_positions)
    else:
        r = np.tile(centre, (geometry.n_elements, 1))
    return amplitude[None, :] * np.exp(-1j * carrier.wave_number * r)


def gen_ris_device_channel(
    geometry: NetworkGeometry, carrier: CarrierConfig, ris_index: int, device_index: int, per_element: bool = True
) -> np.ndarray:
    """RIS -> device channel ``h_l,k``, length M."""
    if not 0 <= device_index < geometry.n_devices:
        raise IndexError(f"device index {device_index} out of range for K={geometry.n_devices}")
    return ris_device_channels(geometry, carrier, ris_index, per_element)[:, device_index]


# =============================================================================
# RIS Configuration & Cascades
# =============================================================================


def configure_ris_phases(ap_ris: np.ndarray, ris_device: np.ndarray, reference_antenna: int = 0) -> np.ndarray:
    """
    Co-phase a RIS for one device.

    Picks ``theta_m = -arg(conj(H[m, ref]) * h_m)`` with unit amplitude so every
    element's contribution to ``g = H^H Theta h`` arrives in phase at the
    reference antenna.

    Returns:
        Diagonal of ``Theta_l`` as a length-M unit-modulus vector

    Raises:
        ShapeError: If ``H`` and ``h`` disagree on M
        DegenerateChannelError: If some element has a zero-magnitude path
    """
    h_ap = np.asarray(ap_ris, dtype=np.complex128)
    h_dev = np.asarray(ris_device, dtype=np.complex128)
    if h_ap.ndim != 2 or h_dev.ndim != 1 or h_ap.shape[0] != h_dev.shape[0]:
        raise ShapeError(f"cannot co-phase H {h_ap.shape} with h {h_dev.shape}")
    if not 0 <= reference_antenna < h_ap.shape[1]:
        raise IndexError(f"reference antenna {reference_antenna} out of range for N={h_ap.shape[1]}")
    path = np.conj(h_ap[:, reference_antenna]) * h_dev
    if np.any(np.abs(path) == 0.0):
        raise DegenerateChannelError("a RIS element has a zero-magnitude cascaded path")
    return np.exp(-1j * np.angle(path))


def cascaded_channel(ap_ris: np.ndarray, ris_config: np.ndarray, ris_device: np.ndarray) -> np.ndarray:
    """
    Cascaded AP -> RIS -> device vector ``g = H^H Theta h``, length N.

    ``ris_config`` is either the diagonal of ``Theta`` (length M) or the full
    M x M diagonal matrix.
    """
    h_ap = np.asarray(ap_ris, dtype=np.complex128)
    theta = np.asarray(ris_config, dtype=np.complex128)
    h_dev = np.asarray(ris_device, dtype=np.complex128)
    if h_ap.ndim != 2 or h_dev.ndim != 1:
        raise ShapeError(f"expected H (M x N) and h (M,), got {h_ap.shape} and {h_dev.shape}")
    m = h_ap.shape[0]
    if theta.ndim == 2:
        if theta.shape != (m, m):
            raise ShapeError(f"Theta must be {m} x {m}, got {theta.shape}")
        theta = np.diag(theta)
    if theta.shape != (m,) or h_dev.shape != (m,):
        raise ShapeError(f"H has M={m} but Theta {theta.shape} and h {h_dev.shape}")
    return hermitian(h_ap) @ (theta * h_dev)


def assemble_channel_matrix(cascaded: np.ndarray, association: Association) -> np.ndarray:
    """
    Stack ``G`` from the cascades selected by an association.

    Row ``i`` is ``g_{l(k),k}^H`` for the i-th matched device in ascending
    device order; unmatched devices get no row.

    Args:
        cascaded: array of shape (L, K, N)
        association: device -> RIS matching

    Returns:
        Complex matrix of shape (matched devices, N)
    """
    g = np.asarray(cascaded)
    if g.ndim != 3 or g.shape[:2] != (association.n_ris, association.n_devices):
        raise ShapeError(
            f"cascades {g.shape} do not fit an association of L={association.n_ris}, K={association.n_devices}"
        )
    devices = association.matched_devices
    ris = [association.ris_of(k) for k in devices]
    return np.conj(g[ris, devices, :]).reshape(len(devices), g.shape[2])


# =============================================================================
# Realization
# =============================================================================


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """
    Channels of one drawn deployment.

    Only the cascades are held in memory: with 100 x 100 elements per RIS a
    single ``H_l`` is already tens of megabytes. The per-hop channels and the
    RIS phase profiles are regenerated on demand from the geometry, which is
    deterministic.

    Attributes:
        geometry: the deployment
        carrier: radio parameters
        cascaded: co-phased cascades ``g_{l,k}``, shape (L, K, N)
        reference_antenna: antenna each pair is co-phased towards
        per_element: whether element-level distances set the phases
    """

    geometry: NetworkGeometry
    carrier: CarrierConfig
    cascaded: np.ndarray
    reference_antenna: int = 0
    per_element: bool = True
    cascade_gains: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        g = np.array(self.cascaded, dtype=np.complex128)
        expected = (self.geometry.n_ris, self.geometry.n_devices, self.geometry.n_antennas)
        if g.shape != expected:
            raise ShapeError(f"cascades must have shape {expected}, got {g.shape}")
        if not np.all(np.isfinite(g)):
            raise DegenerateChannelError("cascaded channels contain non-finite entries")
        gains = np.sum(np.abs(g) ** 2, axis=2)
        if np.any(gains <= 0.0):
            raise DegenerateChannelError("a device/RIS pair has an all-zero cascaded channel")
        g.setflags(write=False)
        gains.setflags(write=False)
        object.__setattr__(self, "cascaded", g)
        object.__setattr__(self, "cascade_gains", gains)

    @property
    def noise_power_w(self) -> float:
        return self.carrier.noise_power_w

    def ap_ris_channel(self, ris_index: int) -> np.ndarray:
        return gen_ap_ris_channel(self.geometry, self.carrier, ris_index, self.per_element)

    def ris_device_channel(self, ris_index: int, device_index: int) -> np.ndarray:
        return gen_ris_device_channel(self.geometry, self.carrier, ris_index, device_index, self.per_element)

    def ris_config(self, ris_index: int, device_index: int) -> np.ndarray:
        """Diagonal of ``Theta_l`` when RIS ``ris_index`` serves ``device_index``."""
        return configure_ris_phases(
            self.ap_ris_channel(ris_index),
            self.ris_device_channel(ris_index, device_index),
            self.reference_antenna,
        )

    def ris_configs(self, association: Association) -> dict[int, np.ndarray]:
        """Phase profile of every matched RIS, keyed by RIS index."""
        return {ris: self.ris_config(ris, device) for device, ris in association.pairs()}

    def stacked(self, association: Association) -> np.ndarray:
        return assemble_channel_matrix(self.cascaded, association)


def realize_channels(
    geometry: NetworkGeometry,
    carrier: CarrierConfig,
    reference_antenna: int = 0,
    per_element: bool = True,
) -> ChannelRealization:
    """
    Build the co-phased cascade of every (RIS, device) pair.

    Each pair gets its own phase profile, the one the RIS would use if it
    were assigned to that device, so the cascades do not depend on the
    association.
    """
    cascades = np.empty((geometry.n_ris, geometry.n_devices, geometry.n_antennas), dtype=np.complex128)
    for ris in range(geometry.n_ris):
        h_ap = gen_ap_ris_channel(geometry, carrier, ris, per_element)
        h_dev = ris_device_channels(geometry, carrier, ris, per_element)
        path = np.conj(h_ap[:, reference_antenna])[:, None] * h_dev
        if np.any(np.abs(path) == 0.0):
            raise DegenerateChannelError(f"RIS {ris} has a zero-magnitude cascaded path")
        aligned = np.exp(-1j * np.angle(path)) * h_dev
        cascades[ris] = (hermitian(h_ap) @ aligned).T
    logger.debug(
        f"Realized {geometry.n_ris} x {geometry.n_devices} cascades over "
        f"N={geometry.n_antennas} antennas, M={geometry.n_elements} elements"
    )
    return ChannelRealization(
        geometry=geometry,
        carrier=carrier,
        cascaded=cascades,
        reference_antenna=reference_antenna,
        per_element=per_element,
    )
