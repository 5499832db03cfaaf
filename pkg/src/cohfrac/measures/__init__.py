"""Coherence quantifiers: C_l1, C_F, C_R, mu_d and derived quantities."""

from typing import NamedTuple

import numpy as np

from .basic import DomainError, c_l1, cf_pure_closed_form, mcms_coherence_number, mu_d
from .fraction import (
    CfConfig,
    CfReport,
    cf_gradient,
    cf_hessian,
    cf_objective,
    coherence_fraction,
)
from .robustness import CrConfig, CrReport, SdpError, robustness

__all__ = [
    "CfConfig", "CfReport", "CrConfig", "CrReport", "DomainError", "NormalizedMeasures",
    "SdpError", "c_l1", "cf_gradient", "cf_hessian", "cf_objective", "cf_pure_closed_form",
    "coherence_fraction", "mcms_coherence_number", "mu_d", "normalized_measures",
    "relative_gap", "robustness",
]


class NormalizedMeasures(NamedTuple):
    cl1_bar: float
    cr_bar: float
    cf: float


def normalized_measures(rho, cf_config: CfConfig | None = None,
                        cr_config: CrConfig | None = None) -> NormalizedMeasures:
    """(1 + C_l1)/d, (1 + C_R)/d and C_F, which satisfy C_F <= cr_bar <= cl1_bar."""
    rho = np.asarray(rho, dtype=np.complex128)
    d = rho.shape[0]
    cl1_bar = (1 + c_l1(rho)) / d
    cr_bar = robustness(rho, cr_config).normalized
    cf = coherence_fraction(rho, cf_config).value
    return NormalizedMeasures(cl1_bar, cr_bar, cf)


def relative_gap(rho, cf_config: CfConfig | None = None,
                 cr_config: CrConfig | None = None) -> float:
    """(cr_bar - C_F)/cr_bar; small negative values indicate numerical error."""
    cr_bar = robustness(rho, cr_config).normalized
    cf = coherence_fraction(rho, cf_config).value
    return (cr_bar - cf) / cr_bar
