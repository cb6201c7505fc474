//! Model manifolds, phase points, geodesic flow and distances.

pub mod distance;
pub mod flow;
pub mod model;

pub use distance::{ambient_distance, geodesic_distance, sasaki_distance, sphere_angle};
pub use flow::{closed_form_flow, flow_ambient, flow_samples, geodesic_flow};
pub use model::{
    clairaut, hamiltonian, metric_inverse_at, Ambient, Frame, ManifoldModel, ModelKind, PhasePoint,
    Vec3,
};
