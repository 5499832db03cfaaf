"""Quantum coherence fraction by multi-start phase optimization.

With U = diag(exp(i theta)) the overlap <phi+|U^dagger rho U|phi+> equals
(1 + 2 f(theta))/d where

    f(theta) = sum_{i<j} Re(rho_ij) cos(theta_i - theta_j) + Im(rho_ij) sin(theta_i - theta_j).

f is smooth and 2pi-periodic in each phase but has many local maxima, so it is
maximized by gradient ascent from many starting points at once.
"""

from dataclasses import dataclass

import numpy as np

from ..channels import phases_from_free


@dataclass(frozen=True)
class CfConfig:
    seed: int = 0
    n_starts: int | None = None  # None -> max(50, 20*(d-1))
    max_iter: int = 500
    ascent_tol: float = 1e-7  # per-start stop; below this Armijo gains drown in rounding
    grad_tol: float = 1e-10  # stationarity of the polished best start
    step0: float = 1.0
    shrink: float = 0.5
    armijo: float = 1e-4
    max_backtracks: int = 40
    polish: bool = True

    def starts_for(self, d: int) -> int:
        return self.n_starts if self.n_starts is not None else max(50, 20 * (d - 1))


@dataclass
class CfReport:
    value: float
    optimal_phases: np.ndarray
    starts_used: int
    best_objective_f: float


def cf_objective(rho, thetas) -> float:
    """f(theta) summed literally over the upper triangle."""
    rho = np.asarray(rho, dtype=np.complex128)
    thetas = np.asarray(thetas, dtype=float)
    i, j = np.triu_indices(rho.shape[0], 1)
    dt = thetas[i] - thetas[j]
    r = rho[i, j]
    return float(np.sum(r.real * np.cos(dt) + r.imag * np.sin(dt)))


def cf_gradient(rho, thetas) -> np.ndarray:
    """df/dtheta_k for k = 1..d-1 (theta_0 is the fixed gauge)."""
    rho = np.asarray(rho, dtype=np.complex128)
    w = np.exp(1j * np.asarray(thetas, dtype=float))
    # the diagonal contributes nothing analytically; dropping it avoids rounding residue
    v = rho @ w - np.diag(rho) * w
    return (w.conj() * v).imag[1:]


def cf_hessian(rho, thetas) -> np.ndarray:
    rho = np.asarray(rho, dtype=np.complex128)
    w = np.exp(1j * np.asarray(thetas, dtype=float))
    A = (w.conj()[:, None] * rho * w[None, :]).real
    np.fill_diagonal(A, 0.0)
    H = A - np.diag(A.sum(axis=1))
    return H[1:, 1:]


def _batch_f_grad(rho, free):
    """f and gradient for a batch of free-phase rows, shape (n, d-1)."""
    n = free.shape[0]
    W = np.empty((n, free.shape[1] + 1), dtype=np.complex128)
    W[:, 0] = 1.0
    W[:, 1:] = np.exp(1j * free)
    z = W.conj() * (W @ rho.T - W * np.diag(rho))
    return 0.5 * z.real.sum(axis=1), z.imag[:, 1:]


def _batch_f(rho, free):
    return _batch_f_grad(rho, free)[0]


def heuristic_start(rho) -> np.ndarray:
    """theta_i = arg(rho_i0); optimal for pure states whose first amplitude is nonzero."""
    col = np.asarray(rho)[1:, 0]
    return np.where(np.abs(col) > 1e-12, np.angle(col), 0.0)


def gradient_ascent(rho, starts, config: CfConfig):
    """Armijo-backtracking gradient ascent run on every start row simultaneously."""
    free = np.array(starts, dtype=float)
    f, g = _batch_f_grad(rho, free)
    active = np.ones(free.shape[0], dtype=bool)
    for _ in range(config.max_iter):
        active &= np.max(np.abs(g), axis=1) > config.ascent_tol
        if not active.any():
            break
        idx = np.flatnonzero(active)
        gi = g[idx]
        g2 = np.sum(gi * gi, axis=1)
        step = np.full(idx.size, config.step0)
        pending = np.ones(idx.size, dtype=bool)
        new_free = free[idx].copy()
        for _ in range(config.max_backtracks):
            p = np.flatnonzero(pending)
            trial = free[idx[p]] + step[p, None] * gi[p]
            ft = _batch_f(rho, trial)
            ok = ft >= f[idx[p]] + config.armijo * step[p] * g2[p]
            new_free[p[ok]] = trial[ok]
            pending[p[ok]] = False
            step[p[~ok]] *= config.shrink
            if not pending.any():
                break
        # rows whose line search failed sit at a numerical plateau
        active[idx[pending]] = False
        moved = idx[~pending]
        if moved.size:
            free[moved] = new_free[~pending]
            f[moved], g[moved] = _batch_f_grad(rho, free[moved])
    return free, f, g


def newton_polish(rho, free, config: CfConfig, max_steps: int = 30):
    """Refine a near-stationary point with Newton steps.

    Iterates while the gradient keeps shrinking, well past ``grad_tol``.
    Directions of (numerically) zero curvature are left alone; they carry no
    gradient at a maximum.
    """
    free = np.array(free, dtype=float)
    theta = phases_from_free(free)
    f = cf_objective(rho, theta)
    gmax = np.max(np.abs(cf_gradient(rho, theta)))
    for _ in range(max_steps):
        if gmax <= 1e-3 * config.grad_tol:
            break
        g = cf_gradient(rho, theta)
        curv, V = np.linalg.eigh(-cf_hessian(rho, theta))
        if curv[0] < -1e-9:
            break  # not in a concave neighbourhood
        keep = curv > 1e-10 * max(curv[-1], 1e-300)
        cand = free + V[:, keep] @ ((V[:, keep].T @ g) / curv[keep])
        cand_theta = phases_from_free(cand)
        fc = cf_objective(rho, cand_theta)
        gc = np.max(np.abs(cf_gradient(rho, cand_theta)))
        if fc < f - 1e-14 or gc >= gmax:
            break
        free, theta, f, gmax = cand, cand_theta, fc, gc
    return free, f


def coherence_fraction(rho, config: CfConfig | None = None) -> CfReport:
    """Maximal overlap of rho with a maximally coherent state.

    Returns a CfReport whose value is (1 + 2 max f)/d together with the
    maximizing gauge-fixed phases.
    """
    config = config or CfConfig()
    rho = np.asarray(rho, dtype=np.complex128)
    d = rho.shape[0]
    if d == 1:
        return CfReport(1.0, np.zeros(1), 0, 0.0)
    rng = np.random.default_rng(config.seed)
    n_rand = config.starts_for(d)
    starts = np.vstack([heuristic_start(rho)[None, :], rng.uniform(0, 2 * np.pi, (n_rand, d - 1))])
    free, f, _ = gradient_ascent(rho, starts, config)
    best = int(np.argmax(f))  # first index wins ties
    best_free, best_f = free[best], float(f[best])
    if config.polish:
        best_free, best_f = newton_polish(rho, best_free, config)
    best_free = (best_free + np.pi) % (2 * np.pi) - np.pi
    thetas = phases_from_free(best_free)
    best_f = cf_objective(rho, thetas)
    return CfReport((1 + 2 * best_f) / d, thetas, starts.shape[0], best_f)
