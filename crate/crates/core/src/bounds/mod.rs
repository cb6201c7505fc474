//! Sup-norm growth, growth fits, and the two local inequalities tested
//! against the eigenfunction families.

pub mod related;
pub mod sogge;
pub mod sup;

pub use related::{
    check_related, check_related_with_lift, theorem_verdict, Consistency, CoverParams, LiftParams,
    RelatedReport, TheoremVerdict,
};
pub use sogge::{ball_l2, check_sogge_local, BoundReport, REFINE_TOL};
pub use sup::{
    fit_growth, scaling_samples, sup_grid, sup_in_ball, sup_norm, ScalingFit, ScalingSample,
};
