//! The polynomial inequality behind the unrestricted bound, the moment
//! lemma built on it, and brute-force checks of both.

mod polynomial;
mod moment;
mod remark;
mod scan;

pub use polynomial::{
    f_eval, f_scale, g_eval, g_inflection, g_prime, g_scale, g_second_difference, poly_residual, poly_residual_direct,
    ridders_derivative, PolyParams,
};
pub use moment::{
    moment_brute_force, moment_chain_audit, moment_exact_minimum, moment_lower_bound, moment_lower_bound_variant,
    moment_terms, matched_profile, solve_profile_offset, sum_power_difference, PsiConstraint,
};
pub use remark::{remark_c1, remark_c1_limit, remark_f_bound};
pub use scan::{
    logspace, parameter_grid, random_constraint, scan_g_convexity, scan_polynomial, scan_moment_lemma, ConvexityScan,
    ConvexityWitness, Grid, PolyScan, PolyWitness, MomentRow, MomentScan, CONVEXITY_TOLERANCE, POLY_TOLERANCE,
    MOMENT_SLACK, STATIONARY_TOLERANCE,
};
