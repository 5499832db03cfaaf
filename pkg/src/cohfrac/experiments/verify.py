"""Numerical verification suites for the coherence-fraction relations.

Each suite returns a SuiteReport holding one Check per property, with the
largest deviation seen and the tolerance it was held to.
"""

from dataclasses import dataclass, field

import numpy as np

from ..channels import is_phase_alignable, phase_unitary_conjugate, phases_from_free
from ..linalg import ValidationError, lambda_max
from ..measures import (
    CfConfig,
    CrConfig,
    c_l1,
    cf_gradient,
    cf_objective,
    coherence_fraction,
    mcms_coherence_number,
    mu_d,
    robustness,
)
from ..states import ginibre_density, mcms_state, random_density
from .simulation import derive_seed, fmt


@dataclass
class Check:
    name: str
    max_deviation: float
    tol: float
    count: int
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = bool(self.max_deviation <= self.tol)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}: max deviation {fmt(self.max_deviation)} (tol {self.tol:g}, n={self.count})"


@dataclass
class SuiteReport:
    suite: str
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        return [f"[{self.suite}] " + c.line() for c in self.checks]


def nonneg_gram_state(d: int, rng: np.random.Generator) -> np.ndarray:
    """AA^T / tr(AA^T) with A entrywise nonnegative, so every entry of the state is >= 0."""
    A = rng.uniform(size=(d, d))
    rho = A @ A.T
    return (rho / np.trace(rho)).astype(np.complex128)


def scrambled_alignable_state(d: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    rho = nonneg_gram_state(d, rng)
    thetas = phases_from_free(rng.uniform(0, 2 * np.pi, d - 1))
    return phase_unitary_conjugate(thetas, rho)


def _measures(rho, cf_config, cr_config):
    d = rho.shape[0]
    cf = coherence_fraction(rho, cf_config).value
    cr_bar = robustness(rho, cr_config).normalized
    cl1_bar = (1 + c_l1(rho)) / d
    return cf, cr_bar, cl1_bar


def ordering_violation(cf, cr_bar, cl1_bar) -> float:
    """Largest violation of cf <= cr_bar <= cl1_bar (<= 0 when ordered)."""
    return max(cf - cr_bar, cr_bar - cl1_bar)


def verify_theorem1(samples: int, d: int, seed: int, cf_config: CfConfig | None = None,
                    cr_config: CrConfig | None = None, tol: float = 1e-6) -> SuiteReport:
    """Triple equality C_F = cr_bar = cl1_bar on phase-scrambled nonnegative states.

    Generic random states only get the ordering checked.
    """
    if d < 2:
        raise ValidationError("theorem1 suite needs d >= 2")
    not_alignable = 0
    eq_dev = 0.0
    order_dev = -np.inf
    for i in range(samples):
        rho = scrambled_alignable_state(d, derive_seed(seed, 1, d, i))
        if is_phase_alignable(rho) is None:
            not_alignable += 1
        cf, cr_bar, cl1_bar = _measures(rho, cf_config, cr_config)
        eq_dev = max(eq_dev, abs(cf - cr_bar), abs(cr_bar - cl1_bar), abs(cf - cl1_bar))
        generic = random_density(d, derive_seed(seed, 2, d, i))
        order_dev = max(order_dev, ordering_violation(*_measures(generic, cf_config, cr_config)))
    return SuiteReport(f"theorem1 d={d}", [
        Check("scrambled states are phase-alignable (failures)", float(not_alignable), 0.0, samples),
        Check("C_F = cr_bar = cl1_bar on alignable states", eq_dev, tol, samples),
        Check("C_F <= cr_bar <= cl1_bar on generic states", order_dev, tol, samples),
    ])


def verify_theorem3(samples: int, seed: int, cf_config: CfConfig | None = None,
                    cr_config: CrConfig | None = None, tol: float = 1e-6) -> SuiteReport:
    gap_dev = 0.0
    for i in range(samples):
        rho = random_density(3, derive_seed(seed, 3, i))
        cf = coherence_fraction(rho, cf_config).value
        cr_bar = robustness(rho, cr_config).normalized
        gap_dev = max(gap_dev, abs(cr_bar - cf) / cr_bar)

    mcms_dev = 0.0
    for p in np.linspace(0, 1, 5):
        rho = mcms_state(3, p)
        expected = (2 * p + 1) / 3
        cf, cr_bar, _ = _measures(rho, cf_config, cr_config)
        mcms_dev = max(mcms_dev, abs(cf - expected), abs(cr_bar - expected))

    rng = np.random.default_rng(derive_seed(seed, 4))
    base = ginibre_density(3, rng)
    conj_vals = []
    for _ in range(10):
        thetas = phases_from_free(rng.uniform(0, 2 * np.pi, 2))
        conj_vals.append(robustness(phase_unitary_conjugate(thetas, base), cr_config).normalized)
    return SuiteReport("theorem3", [
        Check("relative gap (cr_bar - C_F)/cr_bar on random qutrits", gap_dev, tol, samples),
        Check("MCMS qutrits: C_F = cr_bar = (2p+1)/3", mcms_dev, tol, 5),
        Check("cr_bar constant under rank-one correlation conjugation", float(np.ptp(conj_vals)), tol, 10),
    ])


def verify_bounds(samples: int, seed: int, cf_config: CfConfig | None = None,
                  cr_config: CrConfig | None = None) -> SuiteReport:
    """Bounds 1/d <= C_F <= lambda_max, convexity, d C_F <= 2^mu_d and the MCMS bracket."""
    lower = upper = mu_dev = conv_dev = bracket_upper = -np.inf
    bracket_strict = 0
    weights = np.linspace(0.1, 0.9, 9)
    for i in range(samples):
        rng = np.random.default_rng(derive_seed(seed, 5, i))
        d = int(rng.integers(2, 7))
        rho1 = ginibre_density(d, rng)
        rho2 = ginibre_density(d, rng)
        cf1 = coherence_fraction(rho1, cf_config).value
        cf2 = coherence_fraction(rho2, cf_config).value
        lower = max(lower, 1 / d - cf1)
        upper = max(upper, cf1 - lambda_max(rho1))
        mu_dev = max(mu_dev, d * cf1 - 2 ** mu_d(rho1))
        p = weights[i % weights.size]
        cf_mix = coherence_fraction(p * rho1 + (1 - p) * rho2, cf_config).value
        conv_dev = max(conv_dev, cf_mix - (p * cf1 + (1 - p) * cf2))

        q = float(rng.uniform()) if i % 4 else float(rng.integers(0, d)) / (d - 1)
        k = mcms_coherence_number(d, q)
        cf_m = coherence_fraction(mcms_state(d, q), cf_config).value
        bracket_upper = max(bracket_upper, cf_m - k / d)
        if not cf_m > (k - 1) / d:
            bracket_strict += 1
    return SuiteReport("bounds", [
        Check("1/d <= C_F", lower, 1e-10, samples),
        Check("C_F <= lambda_max", upper, 1e-9, samples),
        Check("convexity of C_F", conv_dev, 1e-6, samples),
        Check("d C_F <= 2^mu_d", mu_dev, 1e-8, samples),
        Check("MCMS C_F <= k/d", bracket_upper, 1e-9, samples),
        Check("MCMS (k-1)/d < C_F (violations)", float(bracket_strict), 0.0, samples),
    ])


def central_difference(rho, thetas, h: float = 1e-6) -> np.ndarray:
    out = np.empty(thetas.size - 1)
    for k in range(1, thetas.size):
        e = np.zeros_like(thetas)
        e[k] = h
        out[k - 1] = (cf_objective(rho, thetas + e) - cf_objective(rho, thetas - e)) / (2 * h)
    return out


def verify_gradient(samples: int, seed: int, cf_config: CfConfig | None = None,
                    cr_config: CrConfig | None = None, dims=(2, 3, 4, 5, 6)) -> SuiteReport:
    fd_dev = 0.0
    stat_dev = 0.0
    n_stat = max(1, samples // 5)
    for d in dims:
        for i in range(samples):
            rng = np.random.default_rng(derive_seed(seed, 6, d, i))
            rho = ginibre_density(d, rng)
            thetas = phases_from_free(rng.uniform(0, 2 * np.pi, d - 1))
            fd_dev = max(fd_dev, np.max(np.abs(cf_gradient(rho, thetas) - central_difference(rho, thetas))))
            if i < n_stat:
                rep = coherence_fraction(rho, cf_config)
                stat_dev = max(stat_dev, np.max(np.abs(cf_gradient(rho, rep.optimal_phases))))
    return SuiteReport("gradient", [
        Check("analytic gradient vs central differences (h=1e-6)", fd_dev, 1e-6, samples * len(dims)),
        Check("gradient at optimizer maxima", stat_dev, 1e-10, n_stat * len(dims)),
    ])


def certificate_deviations(rho, report) -> dict:
    """Feasibility and attainment residuals of a robustness report."""
    d = rho.shape[0]
    tau = report.tau
    S = np.diag(report.sigma_diag) - rho
    attained = np.real(np.sum(tau.T * rho)) / d  # <phi+|tau^T o rho|phi+>
    return {
        "gap": report.duality_gap,
        "primal": -np.linalg.eigvalsh(0.5 * (S + S.conj().T))[0],
        "tau_diag": np.max(np.abs(np.diag(tau) - 1)),
        "tau_psd": -np.linalg.eigvalsh(tau)[0],
        "attain": abs(attained - report.normalized),
    }


def verify_sdp_certificate(samples: int, seed: int, cf_config: CfConfig | None = None,
                           cr_config: CrConfig | None = None) -> SuiteReport:
    worst = {"gap": 0.0, "primal": -np.inf, "tau_diag": 0.0, "tau_psd": -np.inf, "attain": 0.0}
    for i in range(samples):
        d = 2 + i % 5
        rho = random_density(d, derive_seed(seed, 7, i))
        rep = robustness(rho, cr_config)
        for key, val in certificate_deviations(rho, rep).items():
            worst[key] = max(worst[key], val)
    return SuiteReport("sdp-certificate", [
        Check("duality gap", worst["gap"], 1e-6, samples),
        Check("primal infeasibility -mineig(diag(s) - rho)", worst["primal"], 1e-8, samples),
        Check("dual unit diagonal", worst["tau_diag"], 1e-7, samples),
        Check("dual PSD -mineig(tau)", worst["tau_psd"], 1e-7, samples),
        Check("<phi+|tau^T o rho|phi+> = cr_bar", worst["attain"], 1e-5, samples),
    ])


def run_theorem1_suite(samples, seed, cf_config=None, cr_config=None) -> SuiteReport:
    checks = []
    for d in (2, 3, 4, 5):
        checks += [Check(f"d={d}: {c.name}", c.max_deviation, c.tol, c.count)
                   for c in verify_theorem1(samples, d, seed, cf_config, cr_config).checks]
    return SuiteReport("theorem1", checks)


SUITES = {
    "theorem1": (run_theorem1_suite, 50),
    "theorem3": (verify_theorem3, 200),
    "bounds": (verify_bounds, 100),
    "gradient": (verify_gradient, 100),
    "sdp-certificate": (verify_sdp_certificate, 200),
}


def run_suite(name: str, samples: int | None = None, seed: int = 0,
              cf_config: CfConfig | None = None, cr_config: CrConfig | None = None) -> SuiteReport:
    if name not in SUITES:
        raise ValidationError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    fn, default_samples = SUITES[name]
    return fn(samples if samples is not None else default_samples, seed, cf_config, cr_config)
