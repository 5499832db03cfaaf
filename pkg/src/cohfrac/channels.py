"""Genuinely incoherent operations (Schur channels) and diagonal phase unitaries."""

from collections import deque

import numpy as np

from .linalg import ValidationError, eigvalsh, hermitize, schur_product

SUPPORT_CUTOFF = 1e-12
CYCLE_TOL = 1e-8


def correlation_matrix(tau, psd_tol: float = 1e-9, diag_tol: float = 1e-10) -> np.ndarray:
    """Validate tau as a correlation matrix: Hermitian, PSD, unit diagonal."""
    tau = hermitize(tau)
    diag_err = np.max(np.abs(np.diag(tau) - 1))
    if diag_err > diag_tol:
        raise ValidationError(f"correlation matrix diagonal deviates from 1 by {diag_err:.3e}")
    lmin = eigvalsh(tau)[0]
    if lmin < -psd_tol:
        raise ValidationError(f"correlation matrix is not PSD (min eigenvalue {lmin:.3e})")
    return tau


def phase_vector(thetas) -> np.ndarray:
    """Validate a gauge-fixed phase vector (first entry exactly 0)."""
    thetas = np.asarray(thetas, dtype=float)
    if thetas.ndim != 1 or thetas.size == 0:
        raise ValidationError("phase vector must be a non-empty 1-D array")
    if thetas[0] != 0.0:
        raise ValidationError(f"first phase must be exactly 0, got {thetas[0]!r}")
    return thetas


def phases_from_free(free) -> np.ndarray:
    """Prepend the fixed theta_0 = 0 to d-1 free phases."""
    return np.concatenate(([0.0], np.asarray(free, dtype=float)))


def dephase(rho) -> np.ndarray:
    rho = np.asarray(rho)
    return np.diag(np.diag(rho))


def apply_gio(tau, rho) -> np.ndarray:
    """Act with the Schur channel rho -> tau o rho."""
    tau = np.asarray(tau, dtype=np.complex128)
    rho = np.asarray(rho, dtype=np.complex128)
    if tau.shape != rho.shape:
        raise ValidationError(f"dimension mismatch: tau {tau.shape} vs rho {rho.shape}")
    return schur_product(tau, rho)


def phase_unitary_conjugate(thetas, rho) -> np.ndarray:
    """U rho U^dagger with U = diag(exp(i theta)); entry (i,j) gains exp(i(theta_i - theta_j))."""
    thetas = np.asarray(thetas, dtype=float)
    rho = np.asarray(rho, dtype=np.complex128)
    if thetas.shape != (rho.shape[0],):
        raise ValidationError(f"need {rho.shape[0]} phases, got shape {thetas.shape}")
    nu = np.exp(1j * thetas)
    factor = np.outer(nu, nu.conj())
    np.fill_diagonal(factor, 1.0)  # keep the diagonal bit-exact
    return factor * rho


def random_correlation_matrix(d: int, rank: int, seed: int) -> np.ndarray:
    """Gram matrix of d random unit vectors in C^rank."""
    if not 1 <= rank <= d:
        raise ValidationError(f"rank must be in 1..{d}, got {rank}")
    rng = np.random.default_rng(seed)
    V = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    tau = V @ V.conj().T
    scale = 1 / np.sqrt(np.diag(tau).real)
    tau = scale[:, None] * tau * scale[None, :]
    tau = 0.5 * (tau + tau.conj().T)
    np.fill_diagonal(tau, 1.0)
    return tau


def _wrap(x):
    return (np.asarray(x) + np.pi) % (2 * np.pi) - np.pi


def is_phase_alignable(rho) -> np.ndarray | None:
    """Find theta with arg(rho_ij) = theta_i - theta_j on the support of rho.

    Phases are propagated along a BFS spanning forest of the graph whose edges
    are the off-diagonal entries with modulus above 1e-12; every remaining edge
    is then checked for cycle consistency.  Returns None when some cycle
    carries a net phase.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    d = rho.shape[0]
    support = np.abs(rho) > SUPPORT_CUTOFF
    np.fill_diagonal(support, False)
    args = np.angle(rho)
    theta = np.zeros(d)
    seen = np.zeros(d, dtype=bool)
    for root in range(d):
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j in np.flatnonzero(support[i]):
                if not seen[j]:
                    theta[j] = theta[i] - args[i, j]
                    seen[j] = True
                    queue.append(j)
    ii, jj = np.nonzero(np.triu(support, 1))
    mismatch = _wrap(theta[ii] - theta[jj] - args[ii, jj])
    if mismatch.size and np.max(np.abs(mismatch)) > CYCLE_TOL:
        return None
    theta = _wrap(theta - theta[0])
    theta[0] = 0.0
    return theta
