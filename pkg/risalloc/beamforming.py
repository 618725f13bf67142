"""Zero-forcing beamforming and per-device SINR / rate evaluation."""

from __future__ import annotations

# Standard Library
from dataclasses import dataclass

# Third Party
import numpy as np

# Local
from .association import Association
from .channel import assemble_channel_matrix
from .exceptions import InvalidInputError, InvalidNoiseError, ShapeError
from .numerics import DEFAULT_RTOL, DEFAULT_SVD_FALLBACK_CONDITION, as_complex_matrix, pseudo_inverse


@dataclass(frozen=True, eq=False)
class Beamformer:
    """
    Unit-norm beam directions and the effective gain each one delivers.

    Attributes:
        directions: N x K matrix whose column k is ``w_k`` with ``||w_k|| = 1``
        column_gains: ``gamma_k = |g_k^H w_k|^2``, which under zero forcing is
            ``1 / ||k-th column of G^+||^2``
    """

    directions: np.ndarray
    column_gains: np.ndarray

    @property
    def n_beams(self) -> int:
        return self.directions.shape[1]


@dataclass(frozen=True, eq=False)
class RateVector:
    """Per-device SINR and spectral efficiency (bits/s/Hz)."""

    sinr: np.ndarray
    rates: np.ndarray

    @property
    def sum_rate(self) -> float:
        return float(np.sum(self.rates))


def _rates_from_sinr(sinr: np.ndarray) -> RateVector:
    sinr = np.maximum(sinr, 0.0)
    return RateVector(sinr=sinr, rates=np.log2(1.0 + sinr))


def _check_noise(noise_power_w: float) -> None:
    if not noise_power_w > 0:
        raise InvalidNoiseError(f"noise power must be positive, got {noise_power_w}")


def _check_powers(powers, expected: int) -> np.ndarray:
    p = np.asarray(powers, dtype=np.float64)
    if p.shape != (expected,):
        raise ShapeError(f"expected {expected} powers, got shape {p.shape}")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise InvalidInputError("transmit powers must be finite and nonnegative")
    return p


def zf_beamformer(
    channel: np.ndarray,
    rtol: float = DEFAULT_RTOL,
    svd_fallback_condition: float = DEFAULT_SVD_FALLBACK_CONDITION,
) -> Beamformer:
    """
    Zero-forcing beamformer for a stacked channel ``G`` (K x N, K <= N).

    Columns of ``G^+`` are normalised to unit length; the removed norm is kept
    as ``gamma_k``. ``g_i^H w_k`` is then ``sqrt(gamma_k)`` for ``i == k`` and 0
    otherwise.

    Raises:
        SingularChannelError: If ``G`` is rank deficient
    """
    g = as_complex_matrix(channel, "G")
    raw = pseudo_inverse(g, rtol=rtol, svd_fallback_condition=svd_fallback_condition)
    norms = np.linalg.norm(raw, axis=0)
    return Beamformer(directions=raw / norms, column_gains=1.0 / norms**2)


def sinr_zf(beamformer: Beamformer, powers, noise_power_w: float) -> RateVector:
    """Interference-free SINR ``p_k gamma_k / sigma^2`` and the matching rates."""
    _check_noise(noise_power_w)
    p = _check_powers(powers, beamformer.n_beams)
    return _rates_from_sinr(p * beamformer.column_gains / noise_power_w)


def sinr_from_channel(channel: np.ndarray, beams: np.ndarray, powers, noise_power_w: float) -> RateVector:
    """
    SINR with multiuser interference for arbitrary beams.

    ``channel`` rows are ``g_k^H``; ``beams`` columns are ``w_k``. Device k
    sees ``p_k |g_k^H w_k|^2`` over ``sum_{i != k} p_i |g_k^H w_i|^2 + sigma^2``.
    """
    _check_noise(noise_power_w)
    g = np.asarray(channel, dtype=np.complex128)
    w = np.asarray(beams, dtype=np.complex128)
    if g.ndim != 2 or w.ndim != 2 or g.shape[1] != w.shape[0] or g.shape[0] != w.shape[1]:
        raise ShapeError(f"channel {g.shape} and beams {w.shape} do not form a square link matrix")
    p = _check_powers(powers, g.shape[0])
    received = np.abs(g @ w) ** 2 * p[None, :]
    signal = np.diag(received).copy()
    interference = received.sum(axis=1) - signal
    return _rates_from_sinr(signal / (interference + noise_power_w))


def sinr_general(
    cascaded: np.ndarray, association: Association, beams: np.ndarray, powers, noise_power_w: float
) -> RateVector:
    """
    General SINR for the devices matched by ``association``.

    The interferer channel seen by device k is its own assigned-RIS cascade,
    the same row that enters ``G``. Results are ordered like
    ``association.matched_devices``.
    """
    return sinr_from_channel(assemble_channel_matrix(cascaded, association), beams, powers, noise_power_w)
