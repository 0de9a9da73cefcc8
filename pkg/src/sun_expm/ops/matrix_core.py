"""Dense complex matrix helpers: validation, traces of powers and determinants."""

from dataclasses import dataclass
from typing import Any, List
import warnings

import numpy as np
import numpy.typing as npt
from scipy.linalg import LinAlgWarning, lu_factor

from sun_expm.config import CONSTRUCT_RTOL, logger
from sun_expm.errors import InvalidInputError

ComplexMatrix = npt.NDArray[np.complex128]


def as_complex_matrix(data: Any) -> ComplexMatrix:
    """Validate and convert input into a square, finite complex matrix.

    Args:
        data: Nested sequence or array of numbers

    Returns:
        ComplexMatrix: complex128 array of shape (n, n), n >= 1

    Raises:
        InvalidInputError: If the input is not square, empty or has non-finite entries
    """
    try:
        matrix = np.array(data, dtype=np.complex128)
    except (TypeError, ValueError) as e:
        msg = f"Matrix entries must be numbers: {e}"
        logger.error(msg)
        raise InvalidInputError(msg) from e

    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        msg = f"Matrix must be square, got shape {matrix.shape}"
        logger.error(msg)
        raise InvalidInputError(msg)

    if matrix.shape[0] == 0:
        msg = "Matrix dimension must be at least 1"
        logger.error(msg)
        raise InvalidInputError(msg)

    if not np.all(np.isfinite(matrix)):
        msg = "Matrix entries must be finite (no NaN or Inf)"
        logger.error(msg)
        raise InvalidInputError(msg)

    return matrix


def max_norm(matrix: Any) -> float:
    """Largest absolute entry of a matrix."""
    matrix = np.asarray(matrix)
    return float(np.max(np.abs(matrix))) if matrix.size else 0.0


def is_hermitian(matrix: ComplexMatrix, rtol: float = CONSTRUCT_RTOL) -> bool:
    """Check ||M - M^dagger||_max <= rtol * ||M||_max."""
    return max_norm(matrix - matrix.conj().T) <= rtol * max_norm(matrix)


@dataclass(frozen=True, eq=False)
class HermitianTraceless:
    """A traceless hermitian generator H, validated on construction.

    Attributes:
        matrix: The underlying complex matrix
    """

    matrix: ComplexMatrix

    def __post_init__(self) -> None:
        matrix = as_complex_matrix(self.matrix)
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

        scale = max_norm(matrix)
        n = matrix.shape[0]
        if max_norm(matrix - matrix.conj().T) > CONSTRUCT_RTOL * scale:
            msg = "Matrix is not hermitian within tolerance"
            logger.error(msg)
            raise InvalidInputError(msg)

        if abs(np.trace(matrix)) > CONSTRUCT_RTOL * scale * n:
            msg = f"Matrix is not traceless: |tr H| = {abs(np.trace(matrix)):.3e}"
            logger.error(msg)
            raise InvalidInputError(msg)

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0])

    @classmethod
    def from_hermitian(cls, data: Any) -> "HermitianTraceless":
        """Build H - (tr H / n) I from any hermitian matrix H.

        Raises:
            InvalidInputError: If the input is not hermitian
        """
        matrix = as_complex_matrix(data)
        if not is_hermitian(matrix):
            msg = "Matrix is not hermitian within tolerance"
            logger.error(msg)
            raise InvalidInputError(msg)
        n = matrix.shape[0]
        shift = np.trace(matrix).real / n
        return cls(matrix - shift * np.eye(n))


def power_ladder(matrix: ComplexMatrix, kmax: int) -> List[ComplexMatrix]:
    """Return [I, M, M^2, ..., M^kmax], one multiplication per power."""
    n = matrix.shape[0]
    ladder = [np.eye(n, dtype=np.complex128)]
    for _ in range(kmax):
        ladder.append(ladder[-1] @ matrix)
    return ladder


def trace_powers(matrix: Any, pmax: int) -> npt.NDArray[np.complex128]:
    """Compute [tr(M^p) for p = 1..pmax].

    Powers are accumulated iteratively, one matrix multiply per power.

    Args:
        matrix: Square complex matrix
        pmax: Highest power (>= 1)

    Returns:
        npt.NDArray[np.complex128]: Traces of M, M^2, ..., M^pmax

    Raises:
        InvalidInputError: If the matrix is invalid or pmax < 1
    """
    matrix = as_complex_matrix(matrix)
    if pmax < 1:
        msg = f"pmax must be at least 1, got {pmax}"
        logger.error(msg)
        raise InvalidInputError(msg)

    traces = np.empty(pmax, dtype=np.complex128)
    power = matrix.copy()
    traces[0] = np.trace(power)
    for p in range(1, pmax):
        power = power @ matrix
        traces[p] = np.trace(power)
    return traces


def determinant(matrix: Any) -> complex:
    """Determinant via LU decomposition with partial pivoting.

    The sign of the permutation is read off the pivot vector, so row swaps
    are accounted for exactly. Singular matrices give 0 up to roundoff.

    Args:
        matrix: Square complex matrix

    Returns:
        complex: det(M)
    """
    matrix = as_complex_matrix(matrix)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(matrix, check_finite=False)
    swaps = int(np.count_nonzero(piv != np.arange(piv.size)))
    sign = -1.0 if swaps % 2 else 1.0
    return complex(sign * np.prod(np.diag(lu)))
