"""Closed-form and spectral coherence quantities."""

import math

import numpy as np

from ..linalg import ValidationError, eigvalsh
from ..states import pure_state

DIAG_CUTOFF = 1e-14


class DomainError(ValueError):
    """Quantity is undefined for this input."""


def c_l1(rho) -> float:
    """l1-norm of coherence: sum of moduli of the off-diagonal entries."""
    rho = np.asarray(rho)
    a = np.abs(rho)
    return float(a.sum() - np.trace(a))


def cf_pure_closed_form(psi) -> float:
    """(sum_i |c_i|)^2 / d for a normalized pure state."""
    psi = pure_state(psi)
    return float(np.abs(psi).sum() ** 2 / psi.size)


def mu_d(rho) -> float:
    """log2 of the spectral norm of Delta^{-1/2} rho Delta^{-1/2}.

    Rows with a (numerically) zero diagonal entry are dropped when they are
    zero as well; a zero diagonal with a nonzero row is a DomainError.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    diag = np.diag(rho).real
    keep = diag > DIAG_CUTOFF
    if not np.all(keep):
        dropped = np.flatnonzero(~keep)
        if np.max(np.abs(rho[dropped, :])) > 1e-12 or np.max(np.abs(rho[:, dropped])) > 1e-12:
            raise DomainError("mu_d undefined: zero diagonal entry with nonzero row/column")
        rho = rho[np.ix_(keep, keep)]
        diag = diag[keep]
    inv_sqrt = 1 / np.sqrt(diag)
    M = inv_sqrt[:, None] * rho * inv_sqrt[None, :]
    np.fill_diagonal(M, 1.0)  # exact by construction
    # M is PSD, so its spectral norm is the top eigenvalue
    return float(np.log2(eigvalsh(M)[-1]))


def mcms_coherence_number(d: int, p: float) -> int:
    """k in 1..d with (k-2)/(d-1) < p <= (k-1)/(d-1)."""
    if d < 1:
        raise ValidationError("d must be >= 1")
    if not 0 <= p <= 1:
        raise ValidationError(f"p must lie in [0, 1], got {p}")
    if d == 1:
        return 1
    # slack absorbs p*(d-1) landing a few ulps above an integer boundary
    k = math.ceil(p * (d - 1) - 1e-12) + 1
    return min(max(k, 1), d)
