//! Analytic supports of oscillator defect measures, in the plane embedding
//! (x, ξ, 0, 0) with the Euclidean distance of ℝ⁴.

use crate::geometry::model::Ambient;
use crate::microlocal::PhaseSet;

/// Orbits through the origin on {p = E}: pairs (x, ξ) with x ∧ ξ = 0.
///
/// Stacking x and ξ as the rows of a 2×2 matrix A, the set is the rank-one
/// matrices of Frobenius norm c = √E, and the nearest one is c u₁v₁ᵀ from
/// the top singular pair, so d² = |A|² − 2cσ₁ + c².
pub struct ZeroMomentumLagrangian {
    pub energy: f64,
}

impl PhaseSet for ZeroMomentumLagrangian {
    fn distance_capped(&self, a: &Ambient, _cap: f64) -> f64 {
        let fro2 = a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3];
        let det = a[0] * a[3] - a[1] * a[2];
        let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0);
        let sigma1 = (0.5 * (fro2 + disc.sqrt())).sqrt();
        let c = self.energy.sqrt();
        (fro2 - 2.0 * c * sigma1 + c * c).max(0.0).sqrt()
    }
}

/// The circular orbit |x| = √(E/2) run with angular momentum `sign`·E/2:
/// points (y, sign·Jy) with J the quarter turn.
///
/// Minimizing |x − y|² + |ξ − sJy|² over |y| = r₀ gives
/// d² = |x|² + |ξ|² − 2r₀|x + sJᵀξ| + 2r₀².
pub struct CircularOrbit {
    pub energy: f64,
    pub sign: f64,
}

impl PhaseSet for CircularOrbit {
    fn distance_capped(&self, a: &Ambient, _cap: f64) -> f64 {
        let r0 = (0.5 * self.energy).sqrt();
        let w = [a[0] + self.sign * a[3], a[1] - self.sign * a[2]];
        let n2 = a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3];
        (n2 - 2.0 * r0 * w[0].hypot(w[1]) + 2.0 * r0 * r0)
            .max(0.0)
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    fn amb(x: [f64; 2], xi: [f64; 2]) -> Ambient {
        [x[0], x[1], xi[0], xi[1], 0.0, 0.0]
    }

    fn brute_min(points: impl Iterator<Item = Ambient>, a: &Ambient) -> f64 {
        points
            .map(|p| (0..4).map(|i| (p[i] - a[i]).powi(2)).sum::<f64>().sqrt())
            .fold(f64::INFINITY, f64::min)
    }

    fn zero_momentum_samples(e: f64, n: usize) -> impl Iterator<Item = Ambient> {
        let c = e.sqrt();
        (0..n * n).map(move |k| {
            let (u, s) = (
                TAU * (k / n) as f64 / n as f64,
                TAU * (k % n) as f64 / n as f64,
            );
            amb(
                [c * s.cos() * u.cos(), c * s.cos() * u.sin()],
                [c * s.sin() * u.cos(), c * s.sin() * u.sin()],
            )
        })
    }

    #[test]
    fn members_have_zero_distance() {
        let z = ZeroMomentumLagrangian { energy: 1.0 };
        for p in zero_momentum_samples(1.0, 16) {
            assert!(z.distance_capped(&p, 1.0) < 1e-7);
        }
        let c = CircularOrbit {
            energy: 1.0,
            sign: 1.0,
        };
        let r0 = 0.5f64.sqrt();
        for k in 0..32 {
            let th = TAU * k as f64 / 32.0;
            let y = [r0 * th.cos(), r0 * th.sin()];
            assert!(c.distance_capped(&amb(y, [-y[1], y[0]]), 1.0) < 1e-7);
            // the reversed orbit is far away
            assert!(c.distance_capped(&amb(y, [y[1], -y[0]]), 1.0) > 1.0);
        }
    }

    proptest! {
        #[test]
        fn zero_momentum_matches_brute_force(v in proptest::array::uniform4(-1.2f64..1.2)) {
            let a = amb([v[0], v[1]], [v[2], v[3]]);
            let d = ZeroMomentumLagrangian { energy: 1.0 }.distance_capped(&a, 10.0);
            let b = brute_min(zero_momentum_samples(1.0, 400), &a);
            // lattice step 2π/400 on a set of radius 1
            prop_assert!(d <= b + 1e-9 && b - d < 0.02, "{d} vs {b}");
        }

        #[test]
        fn circle_matches_brute_force(v in proptest::array::uniform4(-1.2f64..1.2), neg in any::<bool>()) {
            let sign = if neg { -1.0 } else { 1.0 };
            let a = amb([v[0], v[1]], [v[2], v[3]]);
            let d = CircularOrbit { energy: 1.0, sign }.distance_capped(&a, 10.0);
            let r0 = 0.5f64.sqrt();
            let b = brute_min((0..20000).map(|k| {
                let th = TAU * k as f64 / 20000.0;
                let y = [r0 * th.cos(), r0 * th.sin()];
                amb(y, [-sign * y[1], sign * y[0]])
            }), &a);
            prop_assert!(d <= b + 1e-9 && b - d < 1e-3, "{d} vs {b}");
        }
    }
}
