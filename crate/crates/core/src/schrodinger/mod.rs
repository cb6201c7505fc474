//! The isotropic harmonic oscillator as a Schrödinger instance.

pub mod dichotomy;
pub mod flow;
pub mod lift;
pub mod oscillator;
pub mod sets;

pub use dichotomy::{
    invariant_drift, ladder_report, InvariantDrift, Ladder, LadderReport, LadderRow, BALL_RADIUS,
    DEFAULT_H_LADDER, DICHOTOMY_DELTA, OFF_ORBIT_PROBE,
};
pub use flow::{angular_momentum, build_flowout_v, classical_flow_v, oscillator_flow_exact};
pub use lift::{plane_husimi_lift, PlaneLift, REGION_MARGIN};
pub use oscillator::{
    angular_ladder, oscillator_eigenvalue, oscillator_mode, radial_ladder, sigma_fiber,
    PotentialModel, SigmaFiber, OSCILLATOR_ENERGY,
};
pub use sets::{CircularOrbit, ZeroMomentumLagrangian};
