from .checks import (
    VerifyConfig,
    check_ep_characterization,
    check_euler_lagrange_signs,
    check_feasibility,
    check_gradient_constraint,
    check_laplacian_monotonicity,
    check_ridge_noncontact,
    check_segment_plasticity,
    check_variational_inequality,
    check_w2inf_stability,
    interior_second_difference,
    run_all,
)
from .report import Check, CheckStatus, VerificationReport

__all__ = [
    "Check",
    "CheckStatus",
    "VerificationReport",
    "VerifyConfig",
    "check_ep_characterization",
    "check_euler_lagrange_signs",
    "check_feasibility",
    "check_gradient_constraint",
    "check_laplacian_monotonicity",
    "check_ridge_noncontact",
    "check_segment_plasticity",
    "check_variational_inequality",
    "check_w2inf_stability",
    "interior_second_difference",
    "run_all",
]
