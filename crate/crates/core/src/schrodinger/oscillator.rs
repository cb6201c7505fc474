//! Isotropic oscillator P(h) = −h²Δ + |x|² on the plane.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::numeric::ln_factorial;

/// Energy level of the fixed-energy ladders.
pub const OSCILLATOR_ENERGY: f64 = 1.0;

/// V(x) = |x|² with an energy level and semiclassical parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialModel {
    pub energy: f64,
    pub h: f64,
}

impl PotentialModel {
    pub fn oscillator(energy: f64, h: f64) -> Result<Self> {
        if !(energy > 0.0) {
            return Err(LabError::InvalidArgument(format!(
                "energy {energy} must exceed min V = 0"
            )));
        }
        Ok(PotentialModel { energy, h })
    }

    pub fn potential(&self, x: [f64; 2]) -> f64 {
        x[0] * x[0] + x[1] * x[1]
    }

    /// p(x, ξ) = |ξ|² + V(x).
    pub fn symbol(&self, x: [f64; 2], xi: [f64; 2]) -> f64 {
        xi[0] * xi[0] + xi[1] * xi[1] + self.potential(x)
    }

    /// Classical period of every orbit of p.
    pub fn period(&self) -> f64 {
        PI
    }
}

/// Eigenvalue of u_{n,m}: 2h(2n + |m| + 1).
pub fn oscillator_eigenvalue(n: usize, m: i64, h: f64) -> f64 {
    2.0 * h * (2 * n + m.unsigned_abs() as usize + 1) as f64
}

/// (n, m) on the m = 0 ladder: eigenvalue closest to `energy`.
pub fn radial_ladder(energy: f64, h: f64) -> (usize, i64) {
    let n = ((energy / (2.0 * h) - 1.0) / 2.0).round().max(0.0) as usize;
    (n, 0)
}

/// (n, m) on the n = 0 ladder with maximal |m|: eigenvalue closest to `energy`.
pub fn angular_ladder(energy: f64, h: f64) -> (usize, i64) {
    let m = (energy / (2.0 * h) - 1.0).round().max(0.0) as i64;
    (0, m)
}

/// Whether the eigenvalue of u_{n,m} is within one level spacing 2h of E.
pub fn on_ladder(n: usize, m: i64, h: f64, energy: f64) -> bool {
    (oscillator_eigenvalue(n, m, h) - energy).abs() <= 2.0 * h * (1.0 + 1e-9)
}

/// Normalized u_{n,m} at a plane point (unit L² over ℝ²).
///
/// u = h^{-1/2} v(x/√h) with v = √(n!/(π(n+|m|)!)) ρ^{|m|} L_n^{|m|}(ρ²)
/// e^{−ρ²/2} e^{imθ}; magnitudes are assembled in log form.
pub fn oscillator_value(n: usize, m: i64, h: f64, x: [f64; 2]) -> Complex64 {
    let am = m.unsigned_abs() as usize;
    let y = [x[0] / h.sqrt(), x[1] / h.sqrt()];
    let rho2 = y[0] * y[0] + y[1] * y[1];
    if am > 0 && rho2 == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let (lag, lag_shift) = laguerre_scaled(n, am as f64, rho2);
    if lag == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut ln_mag = 0.5 * (ln_factorial(n) - PI.ln() - ln_factorial(n + am)) - 0.5 * h.ln();
    if am > 0 {
        ln_mag += 0.5 * am as f64 * rho2.ln();
    }
    ln_mag += -0.5 * rho2 + lag.abs().ln() + lag_shift;
    let theta = y[1].atan2(y[0]);
    Complex64::from_polar(lag.signum() * ln_mag.exp(), m as f64 * theta)
}

/// L_n^α(s) as (value, log-shift) with the true value value·e^{shift}.
fn laguerre_scaled(n: usize, alpha: f64, s: f64) -> (f64, f64) {
    let mut shift = 0.0;
    let mut l0 = 1.0;
    if n == 0 {
        return (l0, shift);
    }
    let mut l1 = 1.0 + alpha - s;
    for j in 1..n {
        let jf = j as f64;
        let l2 = ((2.0 * jf + 1.0 + alpha - s) * l1 - (jf + alpha) * l0) / (jf + 1.0);
        l0 = l1;
        l1 = l2;
        if l1.abs() > 1e200 {
            l0 *= 1e-200;
            l1 *= 1e-200;
            shift += 200.0 * 10f64.ln();
        }
    }
    (l1, shift)
}

/// u_{n,m}(x) on the unit-energy ladder: the eigenvalue 2h(2n + |m| + 1)
/// must lie within 2h of E = 1.
pub fn oscillator_mode(n: usize, m: i64, h: f64, x: [f64; 2]) -> Result<Complex64> {
    if !(h > 0.0 && h <= 0.1) {
        return Err(LabError::InvalidArgument(format!(
            "h = {h} outside (0, 0.1]"
        )));
    }
    if !on_ladder(n, m, h, OSCILLATOR_ENERGY) {
        return Err(LabError::LadderMismatch(format!(
            "eigenvalue {} of (n, m) = ({n}, {m}) is off the E = 1 ladder at h = {h}",
            oscillator_eigenvalue(n, m, h)
        )));
    }
    Ok(oscillator_value(n, m, h, x))
}

/// Fiber Σ_x = {ξ : |ξ|² = E − V(x)}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaFiber {
    pub x: [f64; 2],
    pub radius: f64,
}

pub fn sigma_fiber(model: &PotentialModel, x: [f64; 2]) -> Result<SigmaFiber> {
    let gap = model.energy - model.potential(x);
    if !(gap > 0.0) {
        return Err(LabError::ForbiddenRegion(format!("V(x) − E = {}", -gap)));
    }
    Ok(SigmaFiber {
        x,
        radius: gap.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_residual(n: usize, m: i64, h: f64, x: [f64; 2]) -> f64 {
        let d = 1e-3 * h.sqrt();
        let u = |p: [f64; 2]| oscillator_value(n, m, h, p);
        let c = u(x);
        let lap =
            (u([x[0] + d, x[1]]) + u([x[0] - d, x[1]]) + u([x[0], x[1] + d]) + u([x[0], x[1] - d])
                - c * 4.0)
                / (d * d);
        let pu = -lap * (h * h) + c * (x[0] * x[0] + x[1] * x[1]);
        (pu - c * oscillator_eigenvalue(n, m, h)).norm() / c.norm()
    }

    #[test]
    fn modes_are_eigenfunctions() {
        for &(n, m) in &[(0usize, 0i64), (3, 2), (5, -4), (0, 9)] {
            let r = laplacian_residual(n, m, 0.05, [0.31, -0.22]);
            assert!(r < 1e-4, "n={n} m={m}: {r}");
        }
    }

    #[test]
    fn modes_have_unit_norm() {
        use crate::eigenmodes::families::Eigenfunction;
        use crate::eigenmodes::grid::EvalGrid;
        let h = 0.02;
        let g = EvalGrid::plane_polar(2.0, 200, 64);
        for &(n, m) in &[(0usize, 0i64), (12, 0), (0, 24), (6, -12)] {
            let u = Eigenfunction::oscillator(n, m, h).unwrap();
            let s = g.norm_sq(&u);
            assert!((s - 1.0).abs() < 1e-9, "n={n} m={m}: {s}");
        }
    }

    #[test]
    fn origin_value_is_closed_form() {
        let h = 1.0 / 100.0;
        let (n, m) = radial_ladder(1.0, h);
        assert_eq!((n, m), (25, 0));
        let v = oscillator_mode(n, m, h, [0.0, 0.0]).unwrap();
        assert!((v.re - 1.0 / (PI * h).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn ladder_is_enforced() {
        assert!(matches!(
            oscillator_mode(3, 0, 0.01, [0.0, 0.0]),
            Err(LabError::LadderMismatch(_))
        ));
        assert_eq!(angular_ladder(1.0, 0.01), (0, 49));
        assert!(oscillator_mode(0, 49, 0.01, [0.0, 0.0]).is_ok());
    }

    #[test]
    fn forbidden_region_decay() {
        let h = 0.01;
        let sup = oscillator_value(0, 49, h, [(0.5f64).sqrt(), 0.0]).norm();
        let far = oscillator_value(0, 49, h, [1.5, 0.0]).norm();
        assert!(far <= 1e-6 * sup, "{far} vs {sup}");
    }

    #[test]
    fn sigma_fiber_examples() {
        let p = PotentialModel::oscillator(1.0, 0.01).unwrap();
        assert!((sigma_fiber(&p, [0.0, 0.0]).unwrap().radius - 1.0).abs() < 1e-15);
        let x = [0.75f64.sqrt(), 0.0];
        assert!((sigma_fiber(&p, x).unwrap().radius - 0.5).abs() < 1e-12);
        assert!(matches!(
            sigma_fiber(&p, [1.0, 0.0]),
            Err(LabError::ForbiddenRegion(_))
        ));
    }
}
