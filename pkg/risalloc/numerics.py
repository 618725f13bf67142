"""
Dense complex linear algebra used by the beamformer.

Everything here is a pure function of its arguments. Matrices are plain
``numpy`` arrays of ``complex128``; ``ComplexMatrix`` is only a typing alias.
"""

from __future__ import annotations

# Standard Library
import logging

# Third Party
import numpy as np
import numpy.typing as npt
import scipy.linalg

# Local
from .exceptions import ShapeError, SingularChannelError

logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]

DEFAULT_RTOL = 1e-10
DEFAULT_SVD_FALLBACK_CONDITION = 1e10


def as_complex_matrix(value, name: str = "matrix") -> ComplexMatrix:
    """
    Coerce ``value`` to a 2-D complex128 array with finite entries.

    Raises:
        ShapeError: If the input is not two-dimensional
        ValueError: If any entry is NaN or infinite
    """
    arr = np.asarray(value, dtype=np.complex128)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def hermitian(matrix: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(np.swapaxes(matrix, -1, -2))


def gram_condition(channel: np.ndarray) -> float:
    """
    Ratio of the extreme eigenvalues of ``G @ G^H``.

    Returns ``inf`` when the smallest eigenvalue is not positive (rank
    deficiency up to rounding).
    """
    g = as_complex_matrix(channel, "G")
    if g.shape[0] > g.shape[1]:
        raise ShapeError(f"G must have K <= N, got {g.shape}")
    eigenvalues = scipy.linalg.eigvalsh(g @ hermitian(g))
    smallest, largest = eigenvalues[0], eigenvalues[-1]
    if smallest <= 0.0 or largest <= 0.0:
        return float("inf")
    return float(largest / smallest)


def pseudo_inverse_svd(g: ComplexMatrix, rtol: float) -> ComplexMatrix:
    """
    SVD pseudo-inverse; ``G`` is singular when the eigenvalues of ``G G^H``
    satisfy ``lambda_min <= rtol * lambda_max``, i.e. ``sigma_min^2 <= rtol * sigma_max^2``.
    """
    u, s, vh = scipy.linalg.svd(g, full_matrices=False)
    if s.size == 0 or s[-1] ** 2 <= rtol * s[0] ** 2:
        raise SingularChannelError(
            f"channel matrix {g.shape} is rank deficient (Gram eigenvalue ratio "
            f"{(s[-1] / s[0]) ** 2 if s.size and s[0] > 0 else 0.0:.3e})"
        )
    return hermitian(vh) @ (hermitian(u) / s[:, None])


def pseudo_inverse(
    channel: np.ndarray,
    rtol: float = DEFAULT_RTOL,
    svd_fallback_condition: float = DEFAULT_SVD_FALLBACK_CONDITION,
) -> ComplexMatrix:
    """
    Right pseudo-inverse ``W = G^H (G G^H)^-1`` of a full-row-rank ``G``.

    The K x K Gram matrix is factorised with Cholesky. When its condition
    number exceeds ``svd_fallback_condition`` (or the factorisation fails) an
    SVD is used instead, which also decides rank: ``G`` is singular when
    the Gram eigenvalues satisfy ``lambda_min <= rtol * lambda_max``.

    Args:
        channel: K x N matrix with K <= N
        rtol: relative Gram-eigenvalue threshold for rank deficiency
        svd_fallback_condition: Gram condition that triggers the SVD path

    Returns:
        N x K matrix ``W`` with ``G @ W ~= I_K``

    Raises:
        ShapeError: If K > N
        SingularChannelError: If ``G`` is rank deficient
    """
    g = as_complex_matrix(channel, "G")
    k, n = g.shape
    if k == 0 or k > n:
        raise ShapeError(f"pseudo_inverse needs 1 <= K <= N, got {g.shape}")

    if gram_condition(g) <= svd_fallback_condition:
        gram = g @ hermitian(g)
        try:
            factor = scipy.linalg.cho_factor(gram, lower=True, check_finite=False)
        except np.linalg.LinAlgError:
            logger.debug(f"Cholesky failed on {gram.shape} Gram matrix, falling back to SVD")
        else:
            # gram^-1 G is K x N; its conjugate transpose is G^H gram^-1
            return hermitian(scipy.linalg.cho_solve(factor, g, check_finite=False))

    return pseudo_inverse_svd(g, rtol)


def project_out_rows(rows: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """
    Remove from each column of ``vectors`` its component in the span of the
    conjugated ``rows``.

    ``rows`` is an R x N matrix whose rows are ``g_i^H``; the returned N x C
    matrix is orthogonal to every ``g_i``. With no rows the input is returned
    unchanged. Rank-deficient ``rows`` raise :class:`SingularChannelError`.
    """
    x = np.asarray(vectors, dtype=np.complex128)
    a = np.asarray(rows, dtype=np.complex128)
    if a.size == 0:
        return x.copy()
    if a.shape[1] != x.shape[0]:
        raise ShapeError(f"rows {a.shape} and vectors {x.shape} disagree on N")
    # A^+ (A x) is the component of x inside the row space of A
    return x - pseudo_inverse(a) @ (a @ x)
