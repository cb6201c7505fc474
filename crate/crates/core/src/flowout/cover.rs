//! Box counting, H^n proxies and the admissibility verdict.

use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::flowout::set::RestrictedSupport;
use crate::geometry::model::Ambient;
use crate::numeric::fit_line;

pub const MIN_SCALE: f64 = 0.02;
pub const MAX_SCALE: f64 = 0.5;
/// Smallest accepted ratio between the largest and smallest ladder scale.
pub const MIN_LADDER_SPAN: f64 = 8.0;
/// Proxy ratio P(ε_last)/P(ε_prev) at or above which proxies count as
/// stabilized.
pub const STABLE_RATIO: f64 = 0.75;

pub type BoxKey = [i32; 6];

/// Fixed shift of the box lattice. Model sets often lie in coordinate
/// hyperplanes (the equator lift has X₃ = V₃ = 0), where an unshifted
/// lattice would assign boxes by rounding noise. A fixed shift keeps the
/// ε and 2ε lattices nested.
pub const BOX_OFFSET: [f64; 6] = [0.013_1, 0.027_3, 0.005_9, 0.031_7, 0.019_3, 0.008_9];

fn key(p: &Ambient, eps: f64) -> BoxKey {
    let mut k = [0i32; 6];
    for i in 0..6 {
        k[i] = ((p[i] - BOX_OFFSET[i]) / eps).floor() as i32;
    }
    k
}

fn check_scale(eps: f64) -> Result<()> {
    if !(MIN_SCALE..=MAX_SCALE).contains(&eps) {
        return Err(LabError::ScaleOutOfRange(eps));
    }
    Ok(())
}

/// Something that can report the boxes of the shifted ε-lattice in
/// ℝ⁶ that it meets.
pub trait Coverable: Sync {
    fn occupied(&self, eps: f64) -> FxHashSet<BoxKey>;
}

impl Coverable for [Ambient] {
    fn occupied(&self, eps: f64) -> FxHashSet<BoxKey> {
        self.par_iter()
            .fold(FxHashSet::default, |mut s, p| {
                s.insert(key(p, eps));
                s
            })
            .reduce(FxHashSet::default, merge)
    }
}

impl Coverable for Vec<Ambient> {
    fn occupied(&self, eps: f64) -> FxHashSet<BoxKey> {
        self.as_slice().occupied(eps)
    }
}

fn merge(mut a: FxHashSet<BoxKey>, b: FxHashSet<BoxKey>) -> FxHashSet<BoxKey> {
    if a.len() < b.len() {
        return merge(b, a);
    }
    a.extend(b);
    a
}

fn lerp(a: &Ambient, b: &Ambient, s: f64) -> Ambient {
    let mut o = [0.0; 6];
    for i in 0..6 {
        o[i] = a[i] + s * (b[i] - a[i]);
    }
    o
}

fn gap(a: &Ambient, b: &Ambient) -> f64 {
    crate::geometry::model::chord6(a, b)
}

/// Fill spacing of restricted-support surfaces, as a fraction of ε.
pub const FILL_FRACTION: f64 = 1.0 / 8.0;

/// Restricted supports are covered as piecewise-bilinear surfaces in the
/// (direction, time) parametrization; see `occupied_with_fill`.
impl Coverable for RestrictedSupport<'_> {
    fn occupied(&self, eps: f64) -> FxHashSet<BoxKey> {
        self.occupied_with_fill(eps, FILL_FRACTION)
    }
}

/// Round up to the next quarter power of two, so parameter steps derived
/// from secant estimates agree between lattice refinements.
fn quantize_up(x: f64) -> f64 {
    2f64.powf((4.0 * x.log2()).ceil() / 4.0)
}

/// Indices i with a ≤ (i + ½)·h < b.
fn anchored(a: f64, b: f64, h: f64) -> std::ops::Range<i64> {
    ((a / h - 0.5).ceil() as i64)..((b / h - 0.5).ceil() as i64)
}

impl RestrictedSupport<'_> {
    /// Boxes met by the restricted support.
    ///
    /// Fill points sit on a parameter grid (α, t) = ((i + ½)h_α, (j + ½)h_t)
    /// anchored at zero, with h chosen so neighbouring points are at most
    /// fill·ε apart in ℝ⁶. Points inside lattice quads whose four corners
    /// are kept are bilinearly interpolated; kept edges and isolated nodes
    /// are filled along the same grid. Refining the flow-out lattice
    /// therefore resamples the same surface at the same parameters.
    pub fn occupied_with_fill(&self, eps: f64, fill: f64) -> FxHashSet<BoxKey> {
        let ann = self.annulus;
        let fo = ann.parent;
        let nd = fo.ndirs();
        let nr = ann.rows.len();
        if nr == 0 || self.is_empty() {
            return FxHashSet::default();
        }
        let alpha = |d: usize| {
            if d == nd {
                std::f64::consts::TAU
            } else {
                fo.dirs[d]
            }
        };
        let time = |r: usize| fo.times[ann.rows[r]];
        let pt = |d: usize, r: usize| fo.sample(d % nd, ann.rows[r]);
        // largest |∂_α| and |∂_t| from lattice secants
        let (mut la, mut lt) = (0.0f64, 0.0f64);
        for d in 0..nd {
            for r in 0..nr {
                la = la.max(gap(pt(d, r), pt(d + 1, r)) / (alpha(d + 1) - alpha(d)));
                if ann.adjacent(r) {
                    lt = lt.max(gap(pt(d, r), pt(d, r + 1)) / (time(r + 1) - time(r)));
                }
            }
        }
        let ha = fill * eps / quantize_up(la.max(1e-12));
        let ht = fill * eps / quantize_up(lt.max(1e-12));
        (0..nd)
            .into_par_iter()
            .fold(FxHashSet::default, |mut s, d| {
                let (a0, a1) = (alpha(d), alpha(d + 1));
                for r in 0..nr {
                    if !self.is_set(d, r) {
                        continue;
                    }
                    let p00 = pt(d, r);
                    s.insert(key(p00, eps));
                    let right = self.is_set((d + 1) % nd, r);
                    let up = ann.adjacent(r) && self.is_set(d, r + 1);
                    if right {
                        let p10 = pt(d + 1, r);
                        for i in anchored(a0, a1, ha) {
                            let u = ((i as f64 + 0.5) * ha - a0) / (a1 - a0);
                            s.insert(key(&lerp(p00, p10, u), eps));
                        }
                    }
                    if up {
                        let (t0, t1) = (time(r), time(r + 1));
                        let p01 = pt(d, r + 1);
                        for j in anchored(t0, t1, ht) {
                            let v = ((j as f64 + 0.5) * ht - t0) / (t1 - t0);
                            s.insert(key(&lerp(p00, p01, v), eps));
                        }
                        if right && self.is_set((d + 1) % nd, r + 1) {
                            let p10 = pt(d + 1, r);
                            let p11 = pt(d + 1, r + 1);
                            for i in anchored(a0, a1, ha) {
                                let u = ((i as f64 + 0.5) * ha - a0) / (a1 - a0);
                                let lo = lerp(p00, p10, u);
                                let hi = lerp(p01, p11, u);
                                for j in anchored(t0, t1, ht) {
                                    let v = ((j as f64 + 0.5) * ht - t0) / (t1 - t0);
                                    s.insert(key(&lerp(&lo, &hi, v), eps));
                                }
                            }
                        }
                    }
                }
                s
            })
            .reduce(FxHashSet::default, merge)
    }
}

/// Occupied ε-boxes of a point list.
pub fn box_count(points: &[Ambient], eps: f64) -> Result<usize> {
    check_scale(eps)?;
    Ok(points.occupied(eps).len())
}

/// Occupied ε-boxes of any coverable set.
pub fn box_count_of(set: &dyn Coverable, eps: f64) -> Result<usize> {
    check_scale(eps)?;
    Ok(set.occupied(eps).len())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverReport {
    /// Descending.
    pub scales: Vec<f64>,
    pub counts: Vec<usize>,
    /// N(ε)·εⁿ.
    pub proxies: Vec<f64>,
    pub exponent: u32,
    /// Slope of log N against log(1/ε) over scales with N > 0.
    pub dim_estimate: f64,
    pub r2: f64,
}

impl CoverReport {
    pub fn smallest_proxy(&self) -> f64 {
        *self.proxies.last().expect("nonempty ladder")
    }
}

pub fn hausdorff_proxy(set: &dyn Coverable, scales: &[f64], n: u32) -> Result<CoverReport> {
    if scales.len() < 4 {
        return Err(LabError::InsufficientSamples(format!(
            "{} scales, need at least 4",
            scales.len()
        )));
    }
    for &e in scales {
        check_scale(e)?;
    }
    let mut sorted = scales.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let span = sorted[0] / sorted[sorted.len() - 1];
    if span < MIN_LADDER_SPAN * (1.0 - 1e-12) {
        return Err(LabError::InsufficientSamples(format!(
            "ladder spans a factor {span}, need {MIN_LADDER_SPAN}"
        )));
    }
    let counts: Vec<usize> = sorted.iter().map(|&e| set.occupied(e).len()).collect();
    let proxies: Vec<f64> = sorted
        .iter()
        .zip(&counts)
        .map(|(&e, &c)| c as f64 * e.powi(n as i32))
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = sorted
        .iter()
        .zip(&counts)
        .filter(|(_, &c)| c > 0)
        .map(|(&e, &c)| ((1.0 / e).ln(), (c as f64).ln()))
        .unzip();
    let (dim_estimate, r2) = if xs.len() >= 2 {
        let f = fit_line(&xs, &ys);
        (f.slope, f.r2)
    } else {
        (0.0, 1.0)
    };
    Ok(CoverReport {
        scales: sorted,
        counts,
        proxies,
        exponent: n,
        dim_estimate,
        r2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Admissibility {
    Admissible,
    NotAdmissible,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityVerdict {
    pub verdict: Admissibility,
    pub smallest_proxy: f64,
    /// P(ε_last)/P(ε_prev); 0 when both vanish.
    pub trend: f64,
    pub cutoff: f64,
}

/// Admissible: smallest proxy below the cutoff and proxies nonincreasing.
/// NotAdmissible: smallest proxy at or above the cutoff with the last step
/// ratio ≥ STABLE_RATIO. Inconclusive otherwise.
pub fn admissibility_verdict(report: &CoverReport, cutoff: f64) -> Result<AdmissibilityVerdict> {
    let p = &report.proxies;
    if p.len() < 4 {
        return Err(LabError::InsufficientSamples(format!("{} scales", p.len())));
    }
    let last = p[p.len() - 1];
    let prev = p[p.len() - 2];
    let trend = if prev > 0.0 {
        last / prev
    } else if last > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    let decreasing = p.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
    let verdict = if last < cutoff && decreasing {
        Admissibility::Admissible
    } else if last >= cutoff && trend >= STABLE_RATIO {
        Admissibility::NotAdmissible
    } else {
        Admissibility::Inconclusive
    };
    Ok(AdmissibilityVerdict {
        verdict,
        smallest_proxy: last,
        trend,
        cutoff,
    })
}

/// Largest relative proxy change between two reports over the two smallest
/// scales (0 when both proxies vanish).
pub fn proxy_drift(a: &CoverReport, b: &CoverReport) -> f64 {
    let n = a.proxies.len().min(b.proxies.len());
    let mut worst: f64 = 0.0;
    for i in n.saturating_sub(2)..n {
        let (pa, pb) = (a.proxies[i], b.proxies[i]);
        let d = if pa == 0.0 && pb == 0.0 {
            0.0
        } else if pa == 0.0 {
            f64::INFINITY
        } else {
            (pb - pa).abs() / pa
        };
        worst = worst.max(d);
    }
    worst
}
