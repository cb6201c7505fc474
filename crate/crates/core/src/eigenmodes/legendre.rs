//! Legendre and associated Legendre functions with unit-sphere normalization.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::numeric::{ln_factorial, pairwise_sum};

/// P_k(x) by the upward three-term recurrence.
pub fn legendre_p(k: usize, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut p0 = 1.0;
    let mut p1 = x;
    for l in 2..=k {
        let lf = l as f64;
        let p2 = ((2.0 * lf - 1.0) * x * p1 - (lf - 1.0) * p0) / lf;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// √((2k+1)/4π), the L²(S²) normalization of P_k(cos r).
pub fn zonal_norm(k: usize) -> f64 {
    ((2 * k + 1) as f64 / (4.0 * PI)).sqrt()
}

/// Normalized zonal harmonic √((2k+1)/4π) P_k(cos r), recurrence route.
pub fn eval_zonal_legendre(k: usize, r: f64) -> f64 {
    zonal_norm(k) * legendre_p(k, r.cos())
}

/// Normalized zonal harmonic from the Laplace integral
/// (1/2π) ∫₀^{2π} (cos r + i sin r cos τ)^k dτ, evaluated by the periodic
/// trapezoid rule (exact once nquad > k) with powers taken in log-polar form.
pub fn eval_zonal_integral(k: usize, r: f64, nquad: usize) -> Result<f64> {
    if nquad < 4 * k + 16 {
        return Err(LabError::Underresolved(format!(
            "nquad = {nquad} below 4k + 16 = {}",
            4 * k + 16
        )));
    }
    let (s, c) = r.sin_cos();
    let kf = k as f64;
    let terms: Vec<(f64, f64)> = (0..nquad)
        .map(|j| {
            let tau = 2.0 * PI * j as f64 / nquad as f64;
            let z = Complex64::new(c, s * tau.cos());
            if k == 0 {
                return Ok((1.0, 0.0));
            }
            let modulus = z.norm();
            if modulus == 0.0 {
                return Ok((0.0, 0.0));
            }
            let lm = kf * modulus.ln();
            if lm > f64::MAX.ln() {
                return Err(LabError::DegreeOverflow(k));
            }
            let mag = lm.exp();
            let arg = kf * z.arg();
            Ok((mag * arg.cos(), mag * arg.sin()))
        })
        .collect::<Result<_>>()?;
    let re: Vec<f64> = terms.iter().map(|t| t.0).collect();
    let im: Vec<f64> = terms.iter().map(|t| t.1).collect();
    let re = pairwise_sum(&re) / nquad as f64;
    let im = pairwise_sum(&im) / nquad as f64;
    if im.abs() > 1e-12 * re.abs().max(1.0) {
        return Err(LabError::Underresolved(format!(
            "imaginary residue {im:e} in zonal integral"
        )));
    }
    Ok(zonal_norm(k) * re)
}

/// Normalized associated Legendre P̄_k^m(cos r) (Condon–Shortley phase,
/// Y_k^m = P̄_k^m e^{imθ} orthonormal on S²) by the column recurrence:
/// first P̄_m^m, then upward in degree to k.
pub fn assoc_legendre_column(k: usize, m: usize, r: f64) -> f64 {
    assert!(m <= k);
    let (s, x) = r.sin_cos();
    let s = s.abs();
    // ln P̄_m^m magnitude: ½ ln((2m+1)/4π · (2m)!/(2^{2m} (m!)²)) + m ln s
    let mf = m as f64;
    let mut lmm = 0.5 * ((2.0 * mf + 1.0) / (4.0 * PI)).ln();
    lmm += 0.5 * (ln_factorial(2 * m) - 2.0 * mf * 2f64.ln() - 2.0 * ln_factorial(m));
    let mut pmm = if m == 0 {
        lmm.exp()
    } else if s == 0.0 {
        0.0
    } else {
        (lmm + mf * s.ln()).exp()
    };
    if m % 2 == 1 {
        pmm = -pmm;
    }
    if k == m {
        return pmm;
    }
    let mut p_prev = pmm;
    let mut p = x * (2.0 * mf + 3.0).sqrt() * pmm;
    for l in (m + 2)..=k {
        let lf = l as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let b =
            (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
        let next = a * (x * p - b * p_prev);
        p_prev = p;
        p = next;
    }
    p
}

/// All orders P̄_k^m(cos r), m = 0..=k, at fixed degree k in O(k).
///
/// Runs the order recurrence downward from the closed-form P̄_k^k, which is
/// the growing direction in the evanescent band near the poles. Values are
/// carried with a running log-scale so sin^k r never underflows mid-way.
pub fn assoc_legendre_row(k: usize, r: f64) -> Vec<f64> {
    let (s, x) = r.sin_cos();
    let s_abs = s.abs();
    let mut out = vec![0.0; k + 1];
    if s_abs < 1e-300 {
        out[0] = zonal_norm(k) * if x < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
        return out;
    }
    if k == 0 {
        out[0] = zonal_norm(0);
        return out;
    }
    let kf = k as f64;
    // ln |P̄_k^k| = ½ ln((2k+1)!/4π) − k ln 2 − ln k! + k ln s
    let mut ln0 =
        0.5 * (ln_factorial(2 * k + 1) - (4.0 * PI).ln()) - kf * 2f64.ln() - ln_factorial(k)
            + kf * s_abs.ln();
    let sign_kk = if k % 2 == 1 { -1.0 } else { 1.0 };
    let cot = x / s;
    // scaled values v_m with true value v_m · exp(shift_m)
    let mut vals = vec![0.0f64; k + 1];
    let mut shifts = vec![0.0f64; k + 1];
    vals[k] = sign_kk;
    shifts[k] = ln0;
    let mut v_next = 0.0; // order m + 1
    let mut v_cur = sign_kk; // order m
    for m in (1..=k).rev() {
        let mf = m as f64;
        let c_up = ((kf - mf) * (kf + mf + 1.0)).sqrt();
        let c_dn = ((kf + mf) * (kf - mf + 1.0)).sqrt();
        let v_prev = -(v_next * c_up + 2.0 * mf * cot * v_cur) / c_dn;
        v_next = v_cur;
        v_cur = v_prev;
        if v_cur.abs() > 1e150 || v_next.abs() > 1e150 {
            v_cur *= 1e-150;
            v_next *= 1e-150;
            ln0 += 150.0 * 10f64.ln();
        }
        vals[m - 1] = v_cur;
        shifts[m - 1] = ln0;
    }
    for m in 0..=k {
        let v = vals[m];
        out[m] = if v == 0.0 {
            0.0
        } else {
            v.signum() * (v.abs().ln() + shifts[m]).exp()
        };
    }
    out
}
