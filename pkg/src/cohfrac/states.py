"""Validated quantum states and constructors.

States are plain numpy arrays: a pure state is a 1-D complex amplitude vector,
a density matrix a 2-D complex Hermitian PSD unit-trace array.  The
``pure_state``/``density_matrix`` functions validate and return cleaned copies.
"""

import json
from pathlib import Path

import numpy as np

from .linalg import ValidationError, eigvalsh, hermitize

NORM_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9

OMEGA3 = np.exp(2j * np.pi / 3)


def pure_state(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.ndim != 1 or psi.size == 0:
        raise ValidationError(f"pure state must be a non-empty vector, got shape {psi.shape}")
    if not np.all(np.isfinite(psi)):
        raise ValidationError("pure state has non-finite amplitudes")
    norm2 = float(np.vdot(psi, psi).real)
    if abs(norm2 - 1) > NORM_TOL:
        raise ValidationError(f"pure state is not normalized (sum |c_i|^2 = {norm2!r})")
    return psi.copy()


def density_matrix(rho) -> np.ndarray:
    """Validate rho as a density matrix and return its Hermitian part."""
    rho = hermitize(rho)
    tr = float(np.trace(rho).real)
    if abs(tr - 1) > TRACE_TOL:
        raise ValidationError(f"trace is {tr!r}, expected 1")
    lmin = eigvalsh(rho)[0]
    if lmin < -PSD_TOL:
        raise ValidationError(f"matrix is not PSD (min eigenvalue {lmin:.3e})")
    return rho


def pure_to_density(psi) -> np.ndarray:
    psi = pure_state(psi)
    return np.outer(psi, psi.conj())


def maximally_coherent(d: int, phases=None) -> np.ndarray:
    """Amplitudes exp(i theta_k)/sqrt(d); all phases zero gives |phi+>."""
    if d < 1:
        raise ValidationError("d must be >= 1")
    if phases is None:
        return np.full(d, 1 / np.sqrt(d), dtype=np.complex128)
    phases = np.asarray(phases, dtype=float)
    if phases.shape != (d,):
        raise ValidationError(f"expected {d} phases, got shape {phases.shape}")
    return np.exp(1j * phases) / np.sqrt(d)


def mcms_state(d: int, p: float) -> np.ndarray:
    """p |phi+><phi+| + (1-p) I/d: diagonal 1/d, off-diagonal p/d."""
    if d < 1:
        raise ValidationError("d must be >= 1")
    if not 0 <= p <= 1:
        raise ValidationError(f"p must lie in [0, 1], got {p}")
    rho = np.full((d, d), p / d, dtype=np.complex128)
    np.fill_diagonal(rho, 1 / d)
    return rho


def ginibre_density(d: int, rng: np.random.Generator) -> np.ndarray:
    G = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    rho = G @ G.conj().T
    rho = rho / np.trace(rho).real
    return 0.5 * (rho + rho.conj().T)


def random_density(d: int, seed: int) -> np.ndarray:
    """Hilbert-Schmidt random state GG^dagger / tr(GG^dagger), G complex Ginibre."""
    if d < 2:
        raise ValidationError("random_density needs d >= 2")
    return ginibre_density(d, np.random.default_rng(seed))


def random_pure(d: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return psi / np.linalg.norm(psi)


def qutrit_mub(index: int) -> list[np.ndarray]:
    """The four mutually unbiased qutrit bases; index 0 is the incoherent basis."""
    w = OMEGA3
    s = 1 / np.sqrt(3)
    if index == 0:
        return [v.astype(np.complex128) for v in np.eye(3)]
    if index == 1:
        return [s * np.array([1, w**k, w ** (2 * k)]) for k in range(3)]
    if index in (2, 3):
        phase = w if index == 2 else w**2
        vecs = []
        for k in range(3):
            v = np.ones(3, dtype=np.complex128)
            v[k] = phase
            vecs.append(s * v)
        return vecs
    raise ValidationError(f"MUB index must be 0..3, got {index}")


def mub_mixed_state(basis_index: int, eigenvalues) -> np.ndarray:
    """sum_i lambda_i |b_i><b_i| over a non-incoherent qutrit MUB."""
    if basis_index not in (1, 2, 3):
        raise ValidationError(f"basis index must be 1, 2 or 3, got {basis_index}")
    lam = np.asarray(eigenvalues, dtype=float)
    if lam.shape != (3,):
        raise ValidationError("need exactly 3 eigenvalues")
    if np.any(lam < 0) or abs(lam.sum() - 1) > TRACE_TOL:
        raise ValidationError(f"eigenvalues must be nonnegative and sum to 1, got {lam.tolist()}")
    basis = qutrit_mub(basis_index)
    return sum(l * np.outer(b, b.conj()) for l, b in zip(lam, basis))


# --- JSON state files ---------------------------------------------------------

def state_to_json(state: np.ndarray) -> dict:
    state = np.asarray(state, dtype=np.complex128)
    if state.ndim == 1:
        return {"dim": int(state.size), "amp_re": state.real.tolist(), "amp_im": state.imag.tolist()}
    d = state.shape[0]
    return {"dim": int(d), "re": state.real.tolist(), "im": state.imag.tolist()}


def state_from_json(obj: dict) -> np.ndarray:
    """Parse a state object; returns a validated pure vector or density matrix."""
    try:
        d = int(obj["dim"])
        if "amp_re" in obj:
            psi = np.asarray(obj["amp_re"], dtype=float) + 1j * np.asarray(obj["amp_im"], dtype=float)
            if psi.shape != (d,):
                raise ValidationError(f"amplitude arrays do not match dim={d}")
            return pure_state(psi)
        rho = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"malformed state object: {exc}") from exc
    if rho.shape != (d, d):
        raise ValidationError(f"matrix arrays do not match dim={d}")
    return rho


def write_state(path, state: np.ndarray) -> None:
    Path(path).write_text(json.dumps(state_to_json(state), indent=1) + "\n")


def read_state(path) -> np.ndarray:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(obj, dict):
        raise ValidationError(f"{path}: expected a JSON object")
    return state_from_json(obj)


def read_density(path) -> np.ndarray:
    """Read a state file and return a validated density matrix (pure states are lifted)."""
    state = read_state(path)
    if state.ndim == 1:
        return pure_to_density(state)
    return density_matrix(state)
