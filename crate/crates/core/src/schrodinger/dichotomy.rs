//! Growth versus admissibility for the two oscillator ladders: m = 0 modes
//! peak at the origin like h^{-1/2}; maximal-|m| modes live on the circular
//! orbit and grow only like h^{-1/4}.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::bounds::{
    fit_growth, sup_grid, sup_in_ball, sup_norm, theorem_verdict, ScalingFit, ScalingSample,
    TheoremVerdict, REFINE_TOL,
};
use crate::eigenmodes::Eigenfunction;
use crate::error::{LabError, Result};
use crate::flowout::{assess_admissibility_with, AdmissibilityParams, AdmissibilityRun};
use crate::geometry::model::PhasePoint;
use crate::microlocal::PhaseSet;
use crate::schrodinger::flow::{angular_momentum, build_flowout_v, classical_flow_v};
use crate::schrodinger::oscillator::{
    angular_ladder, oscillator_eigenvalue, radial_ladder, PotentialModel, OSCILLATOR_ENERGY,
};
use crate::schrodinger::sets::{CircularOrbit, ZeroMomentumLagrangian};

pub const DEFAULT_H_LADDER: [f64; 6] = [
    1.0 / 40.0,
    1.0 / 60.0,
    1.0 / 100.0,
    1.0 / 160.0,
    1.0 / 250.0,
    1.0 / 400.0,
];

/// Radius of the fixed balls on which h^{1/2} sup_B |u| is tracked.
pub const BALL_RADIUS: f64 = 0.1;

/// Inside the allowed disc, away from the origin and from the circle
/// |x| = √(E/2).
pub const OFF_ORBIT_PROBE: [f64; 2] = [0.35, 0.0];

/// Annulus parameter for the admissibility runs.
pub const DICHOTOMY_DELTA: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ladder {
    /// m = 0, n maximal.
    Radial,
    /// n = 0, |m| maximal.
    Angular,
}

impl Ladder {
    pub fn tag(&self) -> &'static str {
        match self {
            Ladder::Radial => "m=0",
            Ladder::Angular => "max-|m|",
        }
    }

    pub fn mode(&self, h: f64) -> Result<Eigenfunction> {
        let (n, m) = match self {
            Ladder::Radial => radial_ladder(OSCILLATOR_ENERGY, h),
            Ladder::Angular => angular_ladder(OSCILLATOR_ENERGY, h),
        };
        Eigenfunction::oscillator(n, m, h)
    }

    /// Where the family's growth is measured and the ball it is tracked on.
    pub fn probe(&self) -> [f64; 2] {
        match self {
            Ladder::Radial => [0.0, 0.0],
            Ladder::Angular => OFF_ORBIT_PROBE,
        }
    }

    pub fn support(&self) -> Box<dyn PhaseSet> {
        match self {
            Ladder::Radial => Box::new(ZeroMomentumLagrangian {
                energy: OSCILLATOR_ENERGY,
            }),
            Ladder::Angular => Box::new(CircularOrbit {
                energy: OSCILLATOR_ENERGY,
                sign: 1.0,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderRow {
    pub h: f64,
    pub n: usize,
    pub m: i64,
    pub eigenvalue: f64,
    /// |u(0)| on the radial ladder, sup |u| on the angular one.
    pub growth_value: f64,
    pub argmax: [f64; 2],
    /// h^{1/2} sup over B(probe, BALL_RADIUS).
    pub ball_lhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderReport {
    pub ladder: Ladder,
    pub probe: [f64; 2],
    pub rows: Vec<LadderRow>,
    /// Fit of growth_value against λ = 1/h.
    pub fit: ScalingFit,
    /// Exponent in h (= −fit.exponent).
    pub exponent_h: f64,
    pub admissibility: AdmissibilityRun,
    pub verdict: TheoremVerdict,
}

pub fn ladder_report(
    ladder: Ladder,
    hs: &[f64],
    params: &AdmissibilityParams,
) -> Result<LadderReport> {
    if hs.iter().any(|h| !(*h > 0.0 && *h <= 0.1)) {
        return Err(LabError::InvalidArgument(
            "ladder h outside (0, 0.1]".into(),
        ));
    }
    let probe = ladder.probe();
    let mut rows = Vec::with_capacity(hs.len());
    let mut samples = Vec::with_capacity(hs.len());
    for &h in hs {
        let u = ladder.mode(h)?;
        let (n, m) = match u.family {
            crate::eigenmodes::Family::OscillatorMode { n, m } => (n, m),
            _ => unreachable!(),
        };
        let s = match ladder {
            Ladder::Radial => {
                let v = u.eval_polar(0.0, 0.0).norm();
                ScalingSample {
                    family: ladder.tag().into(),
                    k: None,
                    seed: None,
                    lambda: u.lambda,
                    h,
                    sup_value: v,
                    argmax: [0.0, 0.0],
                    coarse_value: v,
                    coarse_spacing: 0.0,
                    refine_steps: 0,
                }
            }
            Ladder::Angular => {
                let mut s = sup_norm(&u, &sup_grid(&u), REFINE_TOL)?;
                s.family = ladder.tag().into();
                s
            }
        };
        let (ball, _) = sup_in_ball(&u, probe, BALL_RADIUS, REFINE_TOL)?;
        rows.push(LadderRow {
            h,
            n,
            m,
            eigenvalue: oscillator_eigenvalue(n, m, h),
            growth_value: s.sup_value,
            argmax: s.argmax,
            ball_lhs: h.sqrt() * ball,
        });
        samples.push(s);
    }
    let fit = fit_growth(&samples)?;
    let model = PotentialModel::oscillator(OSCILLATOR_ENERGY, hs[hs.len() - 1])?;
    let support = ladder.support();
    let admissibility = assess_admissibility_with(
        |nd, nt| build_flowout_v(&model, probe, params.t_max, nd, nt),
        support.as_ref(),
        params,
    )?;
    let verdict = theorem_verdict(ladder.tag(), &fit, &[admissibility.verdict.verdict]);
    Ok(LadderReport {
        ladder,
        probe,
        rows,
        exponent_h: -fit.exponent,
        fit,
        admissibility,
        verdict,
    })
}

/// Largest drift of the oscillator's conserved quantities along sampled
/// orbits: energy p, angular momentum x ∧ ξ, and the separated energy
/// ξ₁² + x₁² (the analog of Clairaut's integral for this separable flow).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantDrift {
    pub t_max: f64,
    pub orbits: usize,
    pub energy: f64,
    pub angular_momentum: f64,
    pub separated_energy: f64,
}

impl InvariantDrift {
    pub fn worst(&self) -> f64 {
        self.energy
            .max(self.angular_momentum)
            .max(self.separated_energy)
    }
}

pub fn invariant_drift(
    t_max: f64,
    orbits: usize,
    steps: usize,
    tol: f64,
) -> Result<InvariantDrift> {
    let model = PotentialModel::oscillator(OSCILLATOR_ENERGY, 0.01)?;
    let e1 = |z: &PhasePoint| z.xi[0] * z.xi[0] + z.x[0] * z.x[0];
    let mut out = InvariantDrift {
        t_max,
        orbits,
        energy: 0.0,
        angular_momentum: 0.0,
        separated_energy: 0.0,
    };
    for k in 0..orbits {
        // base points spread over the allowed disc
        let r = 0.9 * ((k as f64 + 0.5) / orbits as f64).sqrt();
        let th = 2.399_963_229_728_653 * k as f64;
        let x = [r * th.cos(), r * th.sin()];
        let rad = (OSCILLATOR_ENERGY - r * r).sqrt();
        let a = TAU * (k as f64 * 0.618_033_988_749_895).fract();
        let z0 = PhasePoint::new(x, [rad * a.cos(), rad * a.sin()]);
        let (p0, l0, s0) = (model.symbol(z0.x, z0.xi), angular_momentum(&z0), e1(&z0));
        for j in 1..=steps {
            let z = classical_flow_v(&model, &z0, t_max * j as f64 / steps as f64, tol)?;
            out.energy = out.energy.max((model.symbol(z.x, z.xi) - p0).abs());
            out.angular_momentum = out.angular_momentum.max((angular_momentum(&z) - l0).abs());
            out.separated_energy = out.separated_energy.max((e1(&z) - s0).abs());
        }
    }
    Ok(out)
}
