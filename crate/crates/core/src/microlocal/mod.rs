//! Phase-space lifts of eigenfunctions and their limit measures.

pub mod grid;
pub mod husimi;
pub mod measures;
pub mod sets;

pub use grid::PhaseGrid;
pub use husimi::{husimi_lift, LiftEstimate};
pub use measures::{
    flow_invariance_defect, liouville_deviation, liouville_lift, measure_of_set, push_forward,
    scar_measure_oracle, support_threshold, torus_direction_oracle, total_variation,
    zonal_measure_oracle, zonal_measure_oracle_at, MeasureSupport,
};
pub use sets::{
    pole_flowout_cloud, Equator, Everything, Nothing, OrientedEquator, PhaseSet, PointCloud,
    TorusDirection, ZonalLagrangian,
};

#[cfg(test)]
pub(crate) mod fixtures {
    //! Lifts shared between tests (each costs seconds to build).
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};

    use super::{husimi_lift, LiftEstimate, PhaseGrid};
    use crate::eigenmodes::Eigenfunction;
    use crate::geometry::Frame;

    fn cached(key: String, make: impl FnOnce() -> LiftEstimate) -> &'static LiftEstimate {
        static CACHE: OnceLock<Mutex<HashMap<String, &'static LiftEstimate>>> = OnceLock::new();
        let mut map = CACHE.get_or_init(Default::default).lock().unwrap();
        map.entry(key)
            .or_insert_with(|| Box::leak(Box::new(make())))
    }

    fn default_lift(u: Eigenfunction) -> LiftEstimate {
        husimi_lift(&u, &PhaseGrid::sphere_default(Frame::STANDARD), 1.0).unwrap()
    }

    pub fn zonal(k: usize) -> &'static LiftEstimate {
        cached(format!("zonal{k}"), || {
            default_lift(Eigenfunction::zonal(k))
        })
    }

    pub fn highest_weight(k: usize) -> &'static LiftEstimate {
        cached(format!("hw{k}"), || {
            default_lift(Eigenfunction::highest_weight(k))
        })
    }

    pub fn random_wave(k: usize) -> &'static LiftEstimate {
        cached(format!("rw{k}"), || {
            default_lift(Eigenfunction::random_wave(k, 7).unwrap())
        })
    }
}
