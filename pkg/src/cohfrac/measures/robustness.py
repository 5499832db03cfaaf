"""Robustness of coherence via a primal log-barrier method.

    1 + C_R(rho) = min { sum(s) : diag(s) - rho >= 0 }
                 = max { tr(rho tau) : tau >= 0, diag(tau) = 1 }

Only the d diagonal entries s of sigma are unknown.  For a barrier weight mu
the center minimizes sum(s) - mu log det S with S = diag(s) - rho; there
mu S^{-1} has unit diagonal and is a dual-feasible correlation matrix with
duality gap d*mu.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CrConfig:
    mu0: float = 1.0
    mu_factor: float = 0.2
    gap_tol: float = 1e-9  # stop once d*mu <= gap_tol
    newton_tol: float = 1e-10  # on the normalized Newton decrement lambda^2/mu
    newton_floor: float = 1e-6  # accepted decrement when rounding stalls progress
    max_newton: int = 100
    max_stages: int = 80


@dataclass
class CrReport:
    value: float
    normalized: float
    sigma_diag: np.ndarray
    tau: np.ndarray
    duality_gap: float
    mu: float
    newton_steps: int


class SdpError(RuntimeError):
    """Barrier solver failed; carries the best iterate reached."""

    def __init__(self, message, sigma_diag=None, gap=None):
        super().__init__(message)
        self.sigma_diag = sigma_diag
        self.gap = gap


def _chol(S):
    try:
        return np.linalg.cholesky(S)
    except np.linalg.LinAlgError:
        return None


def _inv_from_chol(L):
    Linv = np.linalg.inv(L)
    return Linv.conj().T @ Linv


def _center(rho, s, mu, config: CrConfig):
    """Damped Newton on sum(s) - mu log det(diag(s) - rho). Returns (s, S^{-1}, steps)."""
    steps = 0
    L = _chol(np.diag(s) - rho)
    if L is None:
        raise SdpError("iterate left the feasible region", s)
    while True:
        Sinv = _inv_from_chol(L)
        g = 1 - mu * np.diag(Sinv).real
        H = mu * np.abs(Sinv) ** 2
        try:
            dx = -np.linalg.solve(H, g)
        except np.linalg.LinAlgError as exc:
            raise SdpError(f"singular barrier Hessian: {exc}", s) from exc
        dec = float(-g @ dx) / mu
        if dec <= config.newton_tol:
            return s, Sinv, steps
        if steps >= config.max_newton:
            if dec <= config.newton_floor:
                return s, Sinv, steps
            raise SdpError(f"centering did not converge (decrement {dec:.3e}, mu {mu:.3e})", s)
        lam = np.sqrt(max(dec, 0.0))
        t = 1.0 if lam < 0.25 else 1 / (1 + lam)
        for _ in range(60):
            cand = s + t * dx
            Lc = _chol(np.diag(cand) - rho)
            if Lc is not None:
                break
            t *= 0.5
        else:
            raise SdpError("no feasible Newton step", s)
        if np.array_equal(cand, s):
            if dec <= config.newton_floor:
                return s, Sinv, steps
            raise SdpError(f"Newton step stalled (decrement {dec:.3e})", s)
        s, L = cand, Lc
        steps += 1


def robustness(rho, config: CrConfig | None = None) -> CrReport:
    """Robustness of coherence with primal sigma and dual certificate tau."""
    config = config or CrConfig()
    rho = np.asarray(rho, dtype=np.complex128)
    rho = 0.5 * (rho + rho.conj().T)
    d = rho.shape[0]
    if d == 1:
        one = np.ones((1, 1), dtype=np.complex128)
        return CrReport(0.0, 1.0, np.array([rho[0, 0].real]), one, 0.0, 0.0, 0)
    s = np.full(d, np.linalg.eigvalsh(rho)[-1] + 1.0)
    mu = config.mu0
    total_steps = 0
    for _ in range(config.max_stages):
        s, Sinv, steps = _center(rho, s, mu, config)
        total_steps += steps
        if d * mu <= config.gap_tol:
            break
        mu *= config.mu_factor
    else:
        raise SdpError(f"barrier weight still {mu:.3e} after {config.max_stages} stages", s, d * mu)
    tau = mu * Sinv
    scale = 1 / np.sqrt(np.diag(tau).real)
    tau = scale[:, None] * tau * scale[None, :]
    tau = 0.5 * (tau + tau.conj().T)
    np.fill_diagonal(tau, 1.0)
    primal = float(s.sum())
    dual = float(np.real(np.sum(rho * tau.T)))
    # weak duality makes the exact gap nonnegative; clip rounding below zero
    gap = max(primal - dual, 0.0)
    value = primal - 1
    return CrReport(value, (1 + value) / d, s, tau, gap, mu, total_steps)
