"""Dense complex linear-algebra kernel used by every other module."""

from typing import NamedTuple

import numpy as np

HERMITIAN_TOL = 1e-10


class ValidationError(ValueError):
    """Input fails a structural check (shape, Hermiticity, normalization, ...)."""


class HermitianEigen(NamedTuple):
    eigenvalues: np.ndarray  # ascending, real
    eigenvectors: np.ndarray  # columns


def as_square(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ValidationError(f"expected a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError("matrix has non-finite entries")
    return A


def hermitize(A, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return (A + A^dagger)/2, or raise if A is not Hermitian within `tol`.

    The tolerance is absolute on the largest entry of A - A^dagger.
    """
    A = as_square(A)
    asym = np.max(np.abs(A - A.conj().T))
    if asym > tol:
        raise ValidationError(f"matrix is not Hermitian (max asymmetry {asym:.3e} > {tol:.1e})")
    return 0.5 * (A + A.conj().T)


def eigh(A) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Backed by LAPACK (Householder tridiagonalization + implicit QR/divide and
    conquer) through ``numpy.linalg.eigh``.
    """
    H = hermitize(A)
    w, V = np.linalg.eigh(H)
    return HermitianEigen(w, V)


def eigvalsh(A) -> np.ndarray:
    return np.linalg.eigvalsh(hermitize(A))


def lambda_max(A) -> float:
    return float(eigvalsh(A)[-1])


def is_psd(A, tol: float = 1e-9) -> bool:
    """True iff the smallest eigenvalue of Hermitian A is >= -tol."""
    return bool(eigvalsh(A)[0] >= -tol)


def cholesky(A) -> np.ndarray | None:
    """Lower Cholesky factor of a Hermitian positive definite matrix, None if not PD."""
    try:
        return np.linalg.cholesky(A)
    except np.linalg.LinAlgError:
        return None


def spectral_norm(A) -> float:
    return float(np.linalg.norm(as_square(A), 2))


def schur_product(A, B) -> np.ndarray:
    """Entrywise (Hadamard) product [a_ij * b_ij]."""
    A = as_square(A)
    B = as_square(B)
    if A.shape != B.shape:
        raise ValidationError(f"dimension mismatch: {A.shape} vs {B.shape}")
    return A * B


def fourier_matrix(d: int) -> np.ndarray:
    """Unitary DFT matrix F_ij = omega^(ij)/sqrt(d), omega = exp(2 pi i/d)."""
    if d < 1:
        raise ValidationError("d must be >= 1")
    idx = np.arange(d)
    # reduce ij mod d before exponentiating to keep phases accurate for larger d
    return np.exp(2j * np.pi * (np.outer(idx, idx) % d) / d) / np.sqrt(d)
