"""Spectral analysis of 2x2 canonical systems J Y' + Q Y = lam Y with
real symmetric pi-periodic matrix potentials.

Capabilities: discriminant and Floquet multipliers, Dirichlet-type
eigenvalues via the Pruefer angle, periodic/anti-periodic band edges and
instability intervals, large-lambda asymptotics for traceless
potentials, and the finite-resolution side of the gap-rigidity
diagnostic "all gaps vanish iff Q = p I".
"""

from .asymptotics import (AsymptoticEvaluation, DecayReport,
                          asymptotic_fundamental, coarse_asymptotic,
                          remainder_decay_check)
from .errors import (ACRequired, AssertionFailure, BracketFailure,
                     CanspecError, DerivativeMismatch, IndexingViolation,
                     NotCanonicalForm, StepSizeUnderflow)
from .inverse import (ContrapositiveResult, ForwardCheckReport, GapReport,
                      InverseVerdict, PotentialClass, classify_potential,
                      closed_form_discriminant_scalar, contrapositive_check,
                      forward_check, free_dirac_discriminant,
                      gap_vanishing_report, scalar_identity_fundamental)
from .monodromy import (DEFAULT_OPTIONS, DiscriminantDerivative, FloquetPair,
                        FundamentalTrajectory, IntegratorOptions, Monodromy,
                        Stability, classify_stability, discriminant,
                        discriminant_derivative, floquet_multipliers,
                        integrate_fundamental, monodromy, residual_estimate)
from .potential import (PERIOD, PotentialSpec, ScalarFunction, TraceSplit,
                        evaluate, gauge_rotate, is_canonical_form,
                        is_scalar_identity, shift, trace_split)
from .prufer import (AngleSolution, DirichletEigenvalue, find_mu, find_nu,
                     integrate_angle, shifted_mu_curve)
from .spectra import (InstabilityInterval, ShiftExtremaReport, SpectrumTable,
                      band_edges, detect_double, instability_intervals,
                      operator_norm, verify_shift_extrema)

__version__ = "0.1.0"

__all__ = [
    "ACRequired", "AngleSolution", "AssertionFailure",
    "AsymptoticEvaluation", "BracketFailure", "CanspecError",
    "ContrapositiveResult", "DEFAULT_OPTIONS", "DecayReport",
    "DerivativeMismatch", "DirichletEigenvalue", "DiscriminantDerivative",
    "FloquetPair", "ForwardCheckReport", "FundamentalTrajectory",
    "GapReport", "IndexingViolation", "InstabilityInterval",
    "IntegratorOptions", "InverseVerdict", "Monodromy", "NotCanonicalForm",
    "PERIOD", "PotentialClass", "PotentialSpec", "ScalarFunction",
    "ShiftExtremaReport", "SpectrumTable", "Stability", "StepSizeUnderflow",
    "TraceSplit", "asymptotic_fundamental", "band_edges",
    "classify_potential", "classify_stability", "coarse_asymptotic",
    "closed_form_discriminant_scalar", "contrapositive_check",
    "detect_double", "discriminant", "discriminant_derivative", "evaluate",
    "find_mu", "find_nu", "floquet_multipliers", "forward_check",
    "free_dirac_discriminant", "gap_vanishing_report", "gauge_rotate",
    "instability_intervals", "integrate_angle", "integrate_fundamental",
    "is_canonical_form", "is_scalar_identity", "monodromy", "operator_norm",
    "remainder_decay_check", "residual_estimate", "scalar_identity_fundamental",
    "shift", "shifted_mu_curve", "trace_split", "verify_shift_extrema",
]
