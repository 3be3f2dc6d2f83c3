"""Lambert series and related q-functions near q = 1, by direct summation
and by their asymptotic expansions, at arbitrary precision."""

from .context import (ConvergenceError, DomainError, EvalResult, InternalConsistencyError,
                      Method, PoleError, PrecisionContext, QLambertError,
                      UnsupportedRegionError, bits_for_digits, make_context)
from .lambert import (QPoint, SParameter, divisor_gf_asymptotic, eisenstein_asymptotic,
                      eisenstein_direct, eisenstein_modified, lambert_asymptotic,
                      lambert_direct, lambert_eval, lambert_shift)
from .qgamma import (DigammaVariant, qdigamma_asymptotic, qdigamma_direct, qgamma_asymptotic,
                     qgamma_direct, qgamma_reflection, qpolygamma_asymptotic,
                     qpolygamma_direct, reflection_residual)
from .qpochhammer import (euler_asymptotic, pochhammer_asymptotic, pochhammer_direct,
                          pochhammer_qx, pochhammer_reflection)
from .theta import (ThetaArgument, eisenstein_from_theta, theta_asymptotic, theta_direct,
                    theta_logderiv_asymptotic, theta_logderiv_direct)
from .truncation import TruncationPolicy

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError", "DomainError", "EvalResult", "InternalConsistencyError", "Method",
    "PoleError", "PrecisionContext", "QLambertError", "UnsupportedRegionError",
    "bits_for_digits", "make_context",
    "QPoint", "SParameter", "divisor_gf_asymptotic", "eisenstein_asymptotic",
    "eisenstein_direct", "eisenstein_modified", "lambert_asymptotic", "lambert_direct",
    "lambert_eval", "lambert_shift",
    "DigammaVariant", "qdigamma_asymptotic", "qdigamma_direct", "qgamma_asymptotic",
    "qgamma_direct", "qgamma_reflection", "qpolygamma_asymptotic", "qpolygamma_direct",
    "reflection_residual",
    "euler_asymptotic", "pochhammer_asymptotic", "pochhammer_direct", "pochhammer_qx",
    "pochhammer_reflection",
    "ThetaArgument", "eisenstein_from_theta", "theta_asymptotic", "theta_direct",
    "theta_logderiv_asymptotic", "theta_logderiv_direct",
    "TruncationPolicy",
]
