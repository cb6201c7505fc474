//! Flow-outs Λ_{x,T}, annuli, restricted supports and box-count proxies
//! for the admissibility condition.

pub mod assess;
pub mod cover;
pub mod set;

pub use assess::{
    assess_admissibility, assess_admissibility_with, AdmissibilityParams, AdmissibilityRun,
    MAX_PROXY_DRIFT,
};
pub use cover::{
    admissibility_verdict, box_count, box_count_of, hausdorff_proxy, proxy_drift, Admissibility,
    AdmissibilityVerdict, CoverReport, Coverable,
};
pub use set::{
    annulus, build_flowout, restrict_support, restrict_support_unchecked, Annulus, FlowOutSet,
    RestrictedSupport,
};
