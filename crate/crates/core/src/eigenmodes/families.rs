//! Closed-form eigenfunction families.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::eigenmodes::legendre::{assoc_legendre_row, legendre_p, zonal_norm};
use crate::error::{LabError, Result};
use crate::geometry::model::{dot, Frame, ManifoldModel, ModelKind, Vec3};
use crate::numeric::{gauss_legendre, pairwise_sum};
use crate::schrodinger::oscillator::oscillator_value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Zonal { k: usize },
    HighestWeight { k: usize },
    TorusWave { kvec: [i64; 2] },
    SphereRandomWave { k: usize, seed: u64 },
    OscillatorMode { n: usize, m: i64 },
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Zonal { .. } => "zonal",
            Family::HighestWeight { .. } => "highest-weight",
            Family::TorusWave { .. } => "torus-wave",
            Family::SphereRandomWave { .. } => "random-wave",
            Family::OscillatorMode { .. } => "oscillator",
        }
    }

    pub fn model_kind(&self) -> ModelKind {
        match self {
            Family::TorusWave { .. } => ModelKind::FlatTorus2,
            Family::OscillatorMode { .. } => ModelKind::EuclideanPlane2,
            _ => ModelKind::RoundSphere2,
        }
    }

    /// Sphere degree, if any.
    pub fn degree(&self) -> Option<usize> {
        match *self {
            Family::Zonal { k }
            | Family::HighestWeight { k }
            | Family::SphereRandomWave { k, .. } => Some(k),
            _ => None,
        }
    }
}

/// A normalized eigenfunction u = norm_constant · base.
///
/// Base functions: zonal P_k(cos r); highest weight sin^k r e^{ikθ}; torus
/// e^{i⟨k,x⟩}; random wave Σ c_m Y_k^m with the raw Gaussian draw; oscillator
/// modes already carry their analytic normalization in the base.
#[derive(Debug, Clone)]
pub struct Eigenfunction {
    pub family: Family,
    pub lambda: f64,
    pub h: f64,
    pub norm_constant: f64,
    /// Polar frame of the sphere families (pole = e3).
    pub frame: Frame,
    coeffs: Option<Arc<Vec<Complex64>>>,
}

impl Eigenfunction {
    pub fn zonal(k: usize) -> Self {
        Self::build(Family::Zonal { k }, zonal_norm(k), None, 0.0)
    }

    pub fn highest_weight(k: usize) -> Self {
        Self::build(
            Family::HighestWeight { k },
            highest_weight_constant(k),
            None,
            0.0,
        )
    }

    pub fn torus_wave(kvec: [i64; 2]) -> Result<Self> {
        if kvec == [0, 0] {
            return Err(LabError::InvalidArgument(
                "torus wave needs kvec ≠ 0".into(),
            ));
        }
        Ok(Self::build(
            Family::TorusWave { kvec },
            1.0 / (2.0 * PI),
            None,
            0.0,
        ))
    }

    pub fn random_wave(k: usize, seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(LabError::InvalidArgument("random wave needs k ≥ 1".into()));
        }
        let coeffs = random_coefficients(k, seed);
        let sq: Vec<f64> = coeffs.iter().map(|c| c.norm_sqr()).collect();
        let norm = pairwise_sum(&sq).sqrt();
        Ok(Self::build(
            Family::SphereRandomWave { k, seed },
            1.0 / norm,
            Some(Arc::new(coeffs)),
            0.0,
        ))
    }

    /// Oscillator eigenfunction at semiclassical parameter h (eigenvalue
    /// 2h(2n + |m| + 1) of −h²Δ + |x|²).
    pub fn oscillator(n: usize, m: i64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(LabError::InvalidArgument(format!("h = {h}")));
        }
        Ok(Self::build(Family::OscillatorMode { n, m }, 1.0, None, h))
    }

    fn build(
        family: Family,
        norm_constant: f64,
        coeffs: Option<Arc<Vec<Complex64>>>,
        h_osc: f64,
    ) -> Self {
        let (lambda, h) = match family {
            Family::Zonal { k }
            | Family::HighestWeight { k }
            | Family::SphereRandomWave { k, .. } => {
                let l = ((k * (k + 1)) as f64).sqrt();
                (l, if k == 0 { f64::INFINITY } else { 1.0 / l })
            }
            Family::TorusWave { kvec } => {
                let l = (kvec[0] as f64).hypot(kvec[1] as f64);
                (l, 1.0 / l)
            }
            Family::OscillatorMode { .. } => (1.0 / h_osc, h_osc),
        };
        Eigenfunction {
            family,
            lambda,
            h,
            norm_constant,
            frame: Frame::STANDARD,
            coeffs,
        }
    }

    /// Same function with its polar frame moved (sphere families).
    pub fn with_frame(mut self, frame: Frame) -> Self {
        self.frame = frame;
        self
    }

    /// u multiplied by a real scalar.
    pub fn scaled(mut self, c: f64) -> Self {
        self.norm_constant *= c;
        self
    }

    pub fn model(&self) -> ManifoldModel {
        match self.family.model_kind() {
            ModelKind::RoundSphere2 => ManifoldModel::sphere_with_frame(self.frame),
            ModelKind::FlatTorus2 => ManifoldModel::torus(),
            ModelKind::EuclideanPlane2 => ManifoldModel::plane(),
        }
    }

    pub fn pole(&self) -> Vec3 {
        self.frame.e3
    }

    /// Whether |u| depends on the polar radius only.
    pub fn modulus_is_radial(&self) -> bool {
        matches!(
            self.family,
            Family::Zonal { .. } | Family::HighestWeight { .. } | Family::OscillatorMode { .. }
        )
    }

    /// u at a point of S² (sphere families).
    pub fn eval_sphere(&self, p: Vec3) -> Complex64 {
        let f = &self.frame;
        let a = dot(p, f.e1);
        let b = dot(p, f.e2);
        let c = dot(p, f.e3).clamp(-1.0, 1.0);
        let s = (a * a + b * b).sqrt();
        let r = s.atan2(c);
        let theta = b.atan2(a);
        self.eval_polar(r, theta)
    }

    /// u at polar coordinates (r, θ) of its own frame, or at the chart point
    /// x = (r, θ) / (x₁, x₂) for flat models.
    pub fn eval_polar(&self, r: f64, theta: f64) -> Complex64 {
        match self.family {
            Family::Zonal { k } => Complex64::new(self.norm_constant * legendre_p(k, r.cos()), 0.0),
            Family::HighestWeight { k } => {
                let s = r.sin().abs();
                let mag = if k == 0 {
                    self.norm_constant
                } else if s == 0.0 {
                    0.0
                } else {
                    (self.norm_constant.ln() + k as f64 * s.ln()).exp()
                };
                Complex64::from_polar(mag, k as f64 * theta)
            }
            Family::TorusWave { kvec } => Complex64::from_polar(
                self.norm_constant,
                kvec[0] as f64 * r + kvec[1] as f64 * theta,
            ),
            Family::SphereRandomWave { k, .. } => {
                let row = assoc_legendre_row(k, r);
                let a = self.ring_coefficients(&row);
                let mut acc = Complex64::new(0.0, 0.0);
                let step = Complex64::from_polar(1.0, theta);
                let mut ph = Complex64::from_polar(1.0, -(k as f64) * theta);
                for am in &a {
                    acc += am * ph;
                    ph *= step;
                }
                acc * self.norm_constant
            }
            Family::OscillatorMode { n, m } => {
                let x = [r, theta];
                oscillator_value(n, m, self.h, x) * self.norm_constant
            }
        }
    }

    /// u at a chart point of `model`.
    pub fn eval_at(&self, model: &ManifoldModel, x: [f64; 2]) -> Complex64 {
        match model.kind {
            ModelKind::RoundSphere2 => {
                if model.frame == self.frame {
                    self.eval_polar(x[0], x[1])
                } else {
                    self.eval_sphere(model.sphere_point(x))
                }
            }
            _ => self.eval_polar(x[0], x[1]),
        }
    }

    /// Fourier coefficients in θ on the ring of polar radius r: entry j holds
    /// the coefficient of e^{i(j−k)θ} (random waves, unnormalized).
    fn ring_coefficients(&self, row: &[f64]) -> Vec<Complex64> {
        let k = row.len() - 1;
        let c = self.coeffs.as_ref().expect("random wave coefficients");
        let mut a = vec![Complex64::new(0.0, 0.0); 2 * k + 1];
        for m in 0..=k {
            // Y_k^{-m} = (-1)^m conj(Y_k^m) = (-1)^m P̄_k^m e^{-imθ}
            a[k + m] += c[k + m] * row[m];
            if m > 0 {
                let sgn = if m % 2 == 1 { -1.0 } else { 1.0 };
                a[k - m] += c[k - m] * (sgn * row[m]);
            }
        }
        a
    }

    /// u on the ring of polar radius r at θ_j = 2πj/nθ, in the function's own
    /// frame. Random waves use an inverse FFT when nθ ≥ 2k + 1.
    pub fn eval_ring(&self, r: f64, ntheta: usize) -> Vec<Complex64> {
        let thetas = (0..ntheta).map(|j| 2.0 * PI * j as f64 / ntheta as f64);
        match self.family {
            Family::SphereRandomWave { k, .. } if ntheta > 2 * k => {
                let row = assoc_legendre_row(k, r);
                let a = self.ring_coefficients(&row);
                let mut buf = vec![Complex64::new(0.0, 0.0); ntheta];
                for (j, am) in a.iter().enumerate() {
                    let m = j as i64 - k as i64;
                    buf[m.rem_euclid(ntheta as i64) as usize] = *am * self.norm_constant;
                }
                let mut planner = FftPlanner::new();
                planner.plan_fft_inverse(ntheta).process(&mut buf);
                buf
            }
            _ => thetas.map(|t| self.eval_polar(r, t)).collect(),
        }
    }
}

/// c_k with ∫|c_k sin^k r|² dA = 1, from Gauss–Legendre quadrature of
/// ∫_{-1}^{1} (1 − x²)^k dx (exact with k + 1 nodes).
pub fn highest_weight_constant(k: usize) -> f64 {
    let (x, w) = gauss_legendre(k + 1);
    let terms: Vec<f64> = x
        .iter()
        .zip(&w)
        .map(|(x, w)| {
            let q = 1.0 - x * x;
            if k == 0 {
                *w
            } else {
                w * (k as f64 * q.ln()).exp()
            }
        })
        .collect();
    let integral = pairwise_sum(&terms);
    1.0 / (2.0 * PI * integral).sqrt()
}

fn random_coefficients(k: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    (0..2 * k + 1)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        })
        .collect()
}

/// Normalized highest-weight harmonic at a standard-chart point.
pub fn eval_highest_weight(k: usize, x: [f64; 2]) -> Result<Complex64> {
    ManifoldModel::sphere().check_chart(x)?;
    Ok(Eigenfunction::highest_weight(k).eval_polar(x[0], x[1]))
}

/// (2π)⁻¹ e^{i⟨k, x⟩}.
pub fn eval_torus_wave(kvec: [i64; 2], x: [f64; 2]) -> Result<Complex64> {
    Ok(Eigenfunction::torus_wave(kvec)?.eval_polar(x[0], x[1]))
}

/// Seeded random spherical harmonic of degree k at a standard-chart point.
pub fn eval_random_wave(k: usize, seed: u64, x: [f64; 2]) -> Result<Complex64> {
    Ok(Eigenfunction::random_wave(k, seed)?.eval_polar(x[0], x[1]))
}
