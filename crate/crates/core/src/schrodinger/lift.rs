//! Husimi lifts of oscillator modes on {V ≤ E + ½} × {|ξ| ≤ √(E + ½)}.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigenmodes::{Eigenfunction, Family};
use crate::error::{LabError, Result};
use crate::geometry::model::Ambient;
use crate::microlocal::PhaseSet;
use crate::numeric::pairwise_sum;

/// Margin above the energy defining the lift region.
pub const REGION_MARGIN: f64 = 0.5;

/// Stencil half-width in coherent-state footprints.
const STENCIL_FOOTPRINTS: f64 = 5.5;

/// A probability measure on an n⁴ grid of the box [−R, R]⁴ ⊃ region,
/// R = √(E + ½); cells outside the region carry no weight.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlaneLift {
    pub family: Family,
    pub energy: f64,
    pub h: f64,
    pub width: f64,
    pub n: usize,
    pub radius: f64,
    /// Index ((i₁ n + i₂) n + j₁) n + j₂ for x-cell (i₁, i₂), ξ-cell (j₁, j₂).
    pub weights: Vec<f64>,
}

impl PlaneLift {
    pub fn cell(&self) -> f64 {
        2.0 * self.radius / self.n as f64
    }

    fn coord(&self, i: usize) -> f64 {
        -self.radius + (i as f64 + 0.5) * self.cell()
    }

    pub fn center(&self, c: usize) -> Ambient {
        let n = self.n;
        let (i1, i2, j1, j2) = (c / (n * n * n), (c / (n * n)) % n, (c / n) % n, c % n);
        [
            self.coord(i1),
            self.coord(i2),
            self.coord(j1),
            self.coord(j2),
            0.0,
            0.0,
        ]
    }

    pub fn total_mass(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    /// Mass of cells whose center lies farther than `thickness` from the
    /// energy shell {|x|² + |ξ|² = E} (a 3-sphere of radius √E).
    pub fn mass_off_shell(&self, thickness: f64) -> f64 {
        let r = self.energy.sqrt();
        let w: Vec<f64> = self
            .weights
            .iter()
            .enumerate()
            .filter(|(c, w)| {
                **w > 0.0 && {
                    let a = self.center(*c);
                    let z = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]).sqrt();
                    (z - r).abs() > thickness
                }
            })
            .map(|(_, w)| *w)
            .collect();
        pairwise_sum(&w)
    }

    /// Mass of cells whose center is within `tol` of `set`.
    pub fn mass_near(&self, set: &dyn PhaseSet, tol: f64) -> f64 {
        let w: Vec<f64> = (0..self.weights.len())
            .into_par_iter()
            .filter(|&c| self.weights[c] > 0.0 && set.within(&self.center(c), tol))
            .map(|c| self.weights[c])
            .collect();
        pairwise_sum(&w)
    }
}

/// |⟨u, φ_{x₀,ξ₀}⟩|² with φ = exp(−|y − x₀|²/(2wh) + i⟨y − x₀, ξ₀⟩/h), on
/// the n⁴ cell centers of [−R, R]⁴, normalized to unit mass.
///
/// u is sampled once on a lattice of step s that divides the cell size, so
/// every x-cell center is a lattice node; the ξ sums then separate into two
/// one-dimensional passes.
pub fn plane_husimi_lift(
    u: &Eigenfunction,
    energy: f64,
    n: usize,
    width: f64,
) -> Result<PlaneLift> {
    if !matches!(u.family, Family::OscillatorMode { .. }) {
        return Err(LabError::UnsupportedModel(format!(
            "plane lift of a {} mode",
            u.family.tag()
        )));
    }
    if !(0.5..=2.0).contains(&width) {
        return Err(LabError::InvalidArgument(format!(
            "width {width} outside [0.5, 2]"
        )));
    }
    if !(energy > 0.0) || n < 4 {
        return Err(LabError::InvalidArgument(format!("E = {energy}, n = {n}")));
    }
    let h = u.h;
    let radius = (energy + REGION_MARGIN).sqrt();
    let cell = 2.0 * radius / n as f64;
    let foot = (width * h).sqrt();
    if cell > 4.0 * foot {
        return Err(LabError::ResolutionMismatch(format!(
            "cell {cell:.4} exceeds 4× coherent-state footprint {foot:.4}"
        )));
    }
    // highest frequency of u·conj(φ): (|ξ_u| + |ξ₀|)/h plus the Gaussian's spread
    let s_max = std::f64::consts::TAU / ((energy.sqrt() + radius) / h + 10.0 / foot);
    let mut q = (cell / s_max).ceil() as usize;
    q += q % 2;
    let s = cell / q as f64;
    let m = (STENCIL_FOOTPRINTS * foot / s).ceil() as usize;
    let side = n * q + 2 * m + 1;
    // node k sits at −R − m s + k s; x-cell i is node m + (i + ½) q
    let node = |k: usize| -radius + (k as f64 - m as f64) * s;
    let samples: Vec<Complex64> = (0..side * side)
        .into_par_iter()
        .map(|k| u.eval_polar(node(k / side), node(k % side)))
        .collect();
    let span = 2 * m + 1;
    let gauss: Vec<f64> = (0..span)
        .map(|a| {
            let d = (a as f64 - m as f64) * s;
            (-d * d / (2.0 * width * h)).exp()
        })
        .collect();
    let xi: Vec<f64> = (0..n).map(|j| -radius + (j as f64 + 0.5) * cell).collect();
    // phase[a][j] = exp(−i (a − m) s ξ_j / h)
    let phase: Vec<Complex64> = (0..span * n)
        .map(|k| Complex64::from_polar(1.0, -((k / n) as f64 - m as f64) * s * xi[k % n] / h))
        .collect();
    let in_disc = |a: f64, b: f64| a * a + b * b <= radius * radius;
    let blocks: Vec<Vec<f64>> = (0..n * n)
        .into_par_iter()
        .map(|c| {
            let (i1, i2) = (c / n, c % n);
            let mut out = vec![0.0; n * n];
            if !in_disc(xi[i1], xi[i2]) {
                return out;
            }
            let (k1, k2) = (m + i1 * q + q / 2, m + i2 * q + q / 2);
            // g[a][j₂] = Σ_b u g_a g_b e^{−i b s ξ_{j₂}/h}
            let mut g = vec![Complex64::new(0.0, 0.0); span * n];
            for a in 0..span {
                let row = (k1 + a - m) * side + k2 - m;
                let acc = &mut g[a * n..(a + 1) * n];
                for b in 0..span {
                    let v = samples[row + b] * (gauss[a] * gauss[b]);
                    let ph = &phase[b * n..(b + 1) * n];
                    for j in 0..n {
                        acc[j] += v * ph[j];
                    }
                }
            }
            for j1 in 0..n {
                for j2 in 0..n {
                    if !in_disc(xi[j1], xi[j2]) {
                        continue;
                    }
                    let mut acc = Complex64::new(0.0, 0.0);
                    for a in 0..span {
                        acc += g[a * n + j2] * phase[a * n + j1];
                    }
                    out[j1 * n + j2] = acc.norm_sqr();
                }
            }
            out
        })
        .collect();
    let raw = blocks.concat();
    let total = pairwise_sum(&raw);
    if !(total > 0.0) {
        return Err(LabError::EmptySupport(0.0));
    }
    Ok(PlaneLift {
        family: u.family,
        energy,
        h,
        width,
        n,
        radius,
        weights: raw.into_iter().map(|w| w / total).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schrodinger::oscillator::{angular_ladder, radial_ladder};
    use crate::schrodinger::sets::{CircularOrbit, ZeroMomentumLagrangian};

    /// With the width-1 coherent state equal to the translated ground state,
    /// s = (|x|² + |ξ|²)/(2h) of the lift of any level-N state (N = 2n + |m|)
    /// has density ∝ s^{N+1} e^{−s} in ℝ⁴, i.e. Gamma(N + 2, 1).
    fn gamma_cdf(shape: usize, x: f64) -> f64 {
        // 1 − e^{−x} Σ_{k<shape} x^k / k!
        let mut term = (-x).exp();
        let mut sum = 0.0;
        for k in 0..shape {
            if k > 0 {
                term *= x / k as f64;
            }
            sum += term;
        }
        1.0 - sum
    }

    fn oracle_off_shell(level: usize, h: f64, energy: f64, thickness: f64) -> f64 {
        let r = energy.sqrt();
        let s = |z: f64| z * z / (2.0 * h);
        let inside =
            gamma_cdf(level + 2, s(r + thickness)) - gamma_cdf(level + 2, s(r - thickness));
        1.0 - inside
    }

    #[test]
    fn gamma_oracle_is_sane() {
        assert!((gamma_cdf(1, 1.0) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        // mean of Gamma(N + 2) sits at s = N + 2
        let (lo, hi) = (gamma_cdf(52, 40.0), gamma_cdf(52, 64.0));
        assert!(lo < 0.1 && hi > 0.9);
    }

    #[test]
    fn shell_marginal_matches_gamma_law() {
        let h = 0.01;
        for (n, m) in [radial_ladder(1.0, h), angular_ladder(1.0, h)] {
            let u = Eigenfunction::oscillator(n, m, h).unwrap();
            let lift = plane_husimi_lift(&u, 1.0, 40, 1.0).unwrap();
            assert!((lift.total_mass() - 1.0).abs() < 1e-12);
            let level = 2 * n + m.unsigned_abs() as usize;
            for t in [0.05, 0.1, 0.2] {
                let got = lift.mass_off_shell(t);
                let want = oracle_off_shell(level, h, 1.0, t);
                assert!(
                    (got - want).abs() < 0.03,
                    "(n, m) = ({n}, {m}), t = {t}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn families_concentrate_on_their_supports() {
        let h = 0.01;
        let (n, m) = radial_ladder(1.0, h);
        let radial =
            plane_husimi_lift(&Eigenfunction::oscillator(n, m, h).unwrap(), 1.0, 40, 1.0).unwrap();
        let (n, m) = angular_ladder(1.0, h);
        let circ =
            plane_husimi_lift(&Eigenfunction::oscillator(n, m, h).unwrap(), 1.0, 40, 1.0).unwrap();
        let zero = ZeroMomentumLagrangian { energy: 1.0 };
        let orbit = CircularOrbit {
            energy: 1.0,
            sign: 1.0,
        };
        let reversed = CircularOrbit {
            energy: 1.0,
            sign: -1.0,
        };
        assert!(radial.mass_near(&zero, 0.3) > 0.9);
        assert!(radial.mass_near(&orbit, 0.3) < 0.05);
        assert!(circ.mass_near(&orbit, 0.3) > 0.9);
        assert!(circ.mass_near(&reversed, 0.3) < 1e-6);
    }

    #[test]
    #[ignore = "unattainable at h = 1/100: the exact Gamma law puts ≈ 0.16 off the 0.1 shell for every level-N state"]
    fn off_shell_mass_at_most_five_percent() {
        let h = 0.01;
        for (n, m) in [radial_ladder(1.0, h), angular_ladder(1.0, h)] {
            let lift =
                plane_husimi_lift(&Eigenfunction::oscillator(n, m, h).unwrap(), 1.0, 40, 1.0)
                    .unwrap();
            let off = lift.mass_off_shell(0.1);
            assert!(off <= 0.05, "(n, m) = ({n}, {m}): {off}");
        }
    }

    #[test]
    fn off_shell_mass_falls_below_five_percent_by_h_over_400() {
        let h = 0.0025;
        let (n, m) = radial_ladder(1.0, h);
        let lift =
            plane_husimi_lift(&Eigenfunction::oscillator(n, m, h).unwrap(), 1.0, 40, 1.0).unwrap();
        assert!(lift.mass_off_shell(0.1) <= 0.05);
        assert!(oracle_off_shell(2 * n, h, 1.0, 0.1) <= 0.05);
        assert!(oracle_off_shell(2 * radial_ladder(1.0, 0.01).0, 0.01, 1.0, 0.1) > 0.15);
    }

    #[test]
    fn preconditions() {
        let u = Eigenfunction::oscillator(2, 0, 0.01).unwrap();
        assert!(matches!(
            plane_husimi_lift(&u, 1.0, 4, 1.0),
            Err(LabError::ResolutionMismatch(_))
        ));
        assert!(matches!(
            plane_husimi_lift(&u, 1.0, 40, 3.0),
            Err(LabError::InvalidArgument(_))
        ));
        let z = Eigenfunction::zonal(4);
        assert!(matches!(
            plane_husimi_lift(&z, 1.0, 40, 1.0),
            Err(LabError::UnsupportedModel(_))
        ));
    }
}
