//! Geodesic flow: Störmer–Verlet with step halving, plus closed-form oracles.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, TAU};

use crate::error::{LabError, Result};
use crate::geometry::model::*;

/// A Hamiltonian whose flow is advanced by a symmetric splitting step.
pub(crate) trait SplitFlow {
    type State: Copy;
    fn step(&self, s: &mut Self::State, dt: f64);
    fn energy(&self, s: &Self::State) -> f64;
    fn ambient(&self, s: &Self::State) -> Ambient;
}

const MAX_DOUBLINGS: usize = 24;
const MAX_STEPS: f64 = 2e8;
const INITIAL_STEPS_PER_UNIT: f64 = 20.0;

fn run<F: SplitFlow>(f: &F, s0: F::State, times: &[f64], per_unit: f64) -> Vec<F::State> {
    let mut out = Vec::with_capacity(times.len());
    let mut s = s0;
    let mut t_prev = 0.0;
    for &t in times {
        let span = t - t_prev;
        if span != 0.0 {
            let n = (span.abs() * per_unit).ceil().max(1.0) as usize;
            let dt = span / n as f64;
            for _ in 0..n {
                f.step(&mut s, dt);
            }
        }
        out.push(s);
        t_prev = t;
    }
    out
}

/// Samples of the flow at `times`, all of one sign and ordered by |t|.
///
/// The step is halved until the solution changes by at most `tol` (chordal
/// distance in ℝ⁶) and the energy drift is at most `tol`.
pub(crate) fn adaptive_samples<F: SplitFlow>(
    f: &F,
    s0: F::State,
    times: &[f64],
    tol: f64,
) -> Result<Vec<F::State>> {
    if times.is_empty() {
        return Ok(Vec::new());
    }
    let horizon = times.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let e0 = f.energy(&s0);
    let mut per_unit = INITIAL_STEPS_PER_UNIT;
    let mut coarse = run(f, s0, times, per_unit);
    for _ in 0..MAX_DOUBLINGS {
        per_unit *= 2.0;
        if per_unit * horizon > MAX_STEPS {
            break;
        }
        let fine = run(f, s0, times, per_unit);
        let mut err: f64 = 0.0;
        let mut drift: f64 = 0.0;
        for (a, b) in coarse.iter().zip(&fine) {
            err = err.max(chord6(&f.ambient(a), &f.ambient(b)));
            drift = drift.max((f.energy(b) - e0).abs());
        }
        if err <= tol && drift <= tol {
            return Ok(fine);
        }
        coarse = fine;
    }
    Err(LabError::NoConvergence(format!(
        "step halving did not reach tol = {tol:e} over horizon {horizon}"
    )))
}

/// Sphere geodesic in a chart adapted to its great circle.
///
/// The working pole sits at 45° from the circle's normal, so the orbit stays
/// in r ∈ [π/4, 3π/4] and never meets the chart poles.
pub(crate) struct AdaptedSphere {
    frame: Frame,
    xi_theta: f64,
}

#[derive(Clone, Copy)]
pub(crate) struct PolarState {
    r: f64,
    theta: f64,
    xi_r: f64,
}

impl AdaptedSphere {
    pub(crate) fn new(a: &Ambient) -> Result<(AdaptedSphere, PolarState)> {
        let x = [a[0], a[1], a[2]];
        let v = [a[3], a[4], a[5]];
        let n = cross(x, v);
        let nn = norm(n);
        if nn == 0.0 || !nn.is_finite() {
            return Err(LabError::InvalidArgument(
                "geodesic flow needs a nonzero covector".into(),
            ));
        }
        let n = scale(n, 1.0 / nn);
        let pole = scale(add3(n, x), FRAC_1_SQRT_2);
        let frame = Frame::from_pole_and_hint(pole, x);
        let chart = ManifoldModel::sphere_with_frame(frame);
        let z = chart.chart_of_unchecked(a);
        debug_assert!((z.x[0] - FRAC_PI_4).abs() < 1e-9);
        Ok((
            AdaptedSphere {
                frame,
                xi_theta: z.xi[1],
            },
            PolarState {
                r: z.x[0],
                theta: z.x[1],
                xi_r: z.xi[0],
            },
        ))
    }

    fn force(&self, r: f64) -> f64 {
        let (s, c) = r.sin_cos();
        self.xi_theta * self.xi_theta * c / (s * s * s)
    }
}

impl SplitFlow for AdaptedSphere {
    type State = PolarState;

    fn step(&self, s: &mut PolarState, dt: f64) {
        let half = 0.5 * dt;
        s.xi_r += half * self.force(s.r);
        let s0 = s.r.sin();
        s.theta += half * self.xi_theta / (s0 * s0);
        s.r += dt * s.xi_r;
        let s1 = s.r.sin();
        s.theta += half * self.xi_theta / (s1 * s1);
        s.xi_r += half * self.force(s.r);
    }

    fn energy(&self, s: &PolarState) -> f64 {
        let sr = s.r.sin();
        0.5 * (s.xi_r * s.xi_r + self.xi_theta * self.xi_theta / (sr * sr))
    }

    fn ambient(&self, s: &PolarState) -> Ambient {
        let chart = ManifoldModel::sphere_with_frame(self.frame);
        chart.embed_unchecked(&PhasePoint::new([s.r, s.theta], [s.xi_r, self.xi_theta]))
    }
}

/// Free motion on the torus or plane in unwrapped coordinates.
pub(crate) struct Flat {
    torus: bool,
}

#[derive(Clone, Copy)]
pub(crate) struct FlatState {
    x: [f64; 2],
    xi: [f64; 2],
}

impl SplitFlow for Flat {
    type State = FlatState;

    fn step(&self, s: &mut FlatState, dt: f64) {
        s.x[0] += dt * s.xi[0];
        s.x[1] += dt * s.xi[1];
    }

    fn energy(&self, s: &FlatState) -> f64 {
        0.5 * (s.xi[0] * s.xi[0] + s.xi[1] * s.xi[1])
    }

    fn ambient(&self, s: &FlatState) -> Ambient {
        if self.torus {
            let (s1, c1) = s.x[0].sin_cos();
            let (s2, c2) = s.x[1].sin_cos();
            [c1, s1, c2, s2, s.xi[0], s.xi[1]]
        } else {
            [s.x[0], s.x[1], s.xi[0], s.xi[1], 0.0, 0.0]
        }
    }
}

/// Flow samples G_t(a) for every t in `times` (any order, any sign).
pub fn flow_samples(
    model: &ManifoldModel,
    a: &Ambient,
    times: &[f64],
    tol: f64,
) -> Result<Vec<Ambient>> {
    if !(tol > 0.0) {
        return Err(LabError::InvalidArgument(format!("tol = {tol}")));
    }
    if model.speed(a) == 0.0 {
        return Err(LabError::InvalidArgument("flow needs p > 0".into()));
    }
    let mut idx: Vec<usize> = (0..times.len()).collect();
    idx.sort_by(|&i, &j| times[i].abs().total_cmp(&times[j].abs()));
    let pos: Vec<usize> = idx.iter().copied().filter(|&i| times[i] >= 0.0).collect();
    let neg: Vec<usize> = idx.iter().copied().filter(|&i| times[i] < 0.0).collect();
    let mut out = vec![[0.0; 6]; times.len()];
    for side in [pos, neg] {
        let ts: Vec<f64> = side.iter().map(|&i| times[i]).collect();
        let amb = match model.kind {
            ModelKind::RoundSphere2 => {
                let (f, s0) = AdaptedSphere::new(a)?;
                adaptive_samples(&f, s0, &ts, tol)?
                    .iter()
                    .map(|s| f.ambient(s))
                    .collect::<Vec<_>>()
            }
            ModelKind::FlatTorus2 | ModelKind::EuclideanPlane2 => {
                let torus = model.kind == ModelKind::FlatTorus2;
                let z = model.chart_of_unchecked(a);
                let f = Flat { torus };
                adaptive_samples(&f, FlatState { x: z.x, xi: z.xi }, &ts, tol)?
                    .iter()
                    .map(|s| f.ambient(s))
                    .collect()
            }
        };
        for (&i, v) in side.iter().zip(amb) {
            out[i] = v;
        }
    }
    Ok(out)
}

/// G_t on an embedded point.
pub fn flow_ambient(model: &ManifoldModel, a: &Ambient, t: f64, tol: f64) -> Result<Ambient> {
    Ok(flow_samples(model, a, &[t], tol)?[0])
}

/// G_t(z) returned in the caller's chart.
pub fn geodesic_flow(
    model: &ManifoldModel,
    z: &PhasePoint,
    t: f64,
    tol: f64,
) -> Result<PhasePoint> {
    if hamiltonian(model, z)? <= 0.0 {
        return Err(LabError::InvalidArgument(
            "geodesic flow needs p(z) > 0".into(),
        ));
    }
    let a = model.embed(z)?;
    let b = flow_ambient(model, &a, t, tol)?;
    model.chart_of(&b)
}

/// Closed-form flow: great circles on the sphere, straight lines otherwise.
pub fn closed_form_flow(model: &ManifoldModel, a: &Ambient, t: f64) -> Ambient {
    match model.kind {
        ModelKind::RoundSphere2 => {
            let x = [a[0], a[1], a[2]];
            let v = [a[3], a[4], a[5]];
            let c = norm(v);
            let u = scale(v, 1.0 / c);
            let (s, co) = (c * t).sin_cos();
            let xt = add3(scale(x, co), scale(u, s));
            let vt = scale(add3(scale(x, -s), scale(u, co)), c);
            [xt[0], xt[1], xt[2], vt[0], vt[1], vt[2]]
        }
        ModelKind::FlatTorus2 => {
            let z = model.chart_of_unchecked(a);
            let x1 = (z.x[0] + t * z.xi[0]).rem_euclid(TAU);
            let x2 = (z.x[1] + t * z.xi[1]).rem_euclid(TAU);
            model.embed_unchecked(&PhasePoint::new([x1, x2], z.xi))
        }
        ModelKind::EuclideanPlane2 => [a[0] + t * a[2], a[1] + t * a[3], a[2], a[3], 0.0, 0.0],
    }
}
