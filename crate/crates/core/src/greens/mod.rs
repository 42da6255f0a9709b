//! Regularized Green's functions of the sphere Laplacian.
//!
//! `G⁽q⁾` is the zonal kernel with spherical-harmonic weights
//! `1/(l(l+1))^{q+1}` and no l = 0 component:
//!
//! ```text
//! G⁽q⁾(x) = (1/4π) Σ_{l≥1} (2l+1) / (l(l+1))^{q+1} · P_l(x),
//! ```
//!
//! where `x` is the cosine of the geodesic angle between the two points.
//! Orders 0, 1, 2 have closed forms in terms of logarithms and
//! polylogarithms; [`green_series`] evaluates the partial Legendre sum for
//! any order as a cross-check.

mod polylog;

pub use polylog::{dilog, trilog};

use crate::error::GreensError;
use crate::scalar::{real, zeta3, KahanSum, Real};
use crate::special::legendre_next;

/// Green's function order for the closed-form evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenOrder {
    Zero,
    One,
    Two,
}

impl GreenOrder {
    pub fn from_q(q: u32) -> Result<Self, GreensError> {
        match q {
            0 => Ok(Self::Zero),
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            other => Err(GreensError::UnsupportedOrder(other)),
        }
    }

    pub fn q(self) -> u32 {
        match self {
            Self::Zero => 0,
            Self::One => 1,
            Self::Two => 2,
        }
    }
}

/// Cosine of the geodesic angle; validated to [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicCosine<T>(T);

impl<T: Real> GeodesicCosine<T> {
    pub fn new(x: T) -> Result<Self, GreensError> {
        if !(x >= -T::one() && x <= T::one()) {
            return Err(GreensError::OutOfDomain(x.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self(x))
    }

    pub fn value(self) -> T {
        self.0
    }
}

fn quarter_pi_inv<T: Real>() -> T {
    (real::<T>(4.0) * T::PI()).recip()
}

/// Closed-form G⁽q⁾(x), including the 1/4π prefactor.
///
/// Coincidence (x = 1) is a logarithmic singularity for q = 0 and the
/// antipode (x = -1) is rejected for q = 1, where the closed form would
/// need a limit; q = 2 is finite on all of [-1, 1].
pub fn green_closed<T: Real>(order: GreenOrder, x: GeodesicCosine<T>) -> Result<T, GreensError> {
    let x = x.value();
    let one = T::one();
    let half = real::<T>(0.5);
    match order {
        GreenOrder::Zero => {
            if x == one {
                return Err(GreensError::SingularPoint {
                    q: 0,
                    x: x.to_f64().unwrap_or(1.0),
                });
            }
            Ok(quarter_pi_inv::<T>() * (real::<T>(2.0).ln() - one - (one - x).ln()))
        }
        GreenOrder::One => {
            if x == -one {
                return Err(GreensError::SingularPoint {
                    q: 1,
                    x: x.to_f64().unwrap_or(-1.0),
                });
            }
            if x == one {
                return Ok(quarter_pi_inv());
            }
            let ratio = (one - x) / (one + x);
            let ln_ratio = ratio.ln();
            let ln_half_arg = (real::<T>(2.0) / (one + x)).ln();
            let value = ln_ratio * ln_half_arg - half * ln_half_arg * ln_half_arg
                + polylog::dilog_ext(-ratio)
                + one;
            Ok(quarter_pi_inv::<T>() * value)
        }
        GreenOrder::Two => {
            let y = half * (one - x);
            let pi2_6 = T::PI() * T::PI() / real(6.0);
            let log_term = if y == T::zero() {
                T::zero()
            } else {
                y.ln() * dilog(y)?
            };
            let value = pi2_6 - real::<T>(2.0) + real::<T>(2.0) * zeta3::<T>() + log_term
                - dilog(one - y)?
                - real::<T>(2.0) * trilog(y)?;
            Ok(quarter_pi_inv::<T>() * value)
        }
    }
}

/// Partial Legendre sum of G⁽q⁾ through degree `l_max`, any q ≥ 0.
pub fn green_series<T: Real>(q: u32, x: T, l_max: u32) -> T {
    let mut acc = KahanSum::new();
    let mut pm1 = T::one(); // P_0
    let mut p = x; // P_1
    for l in 1..=l_max {
        let lam = real::<T>((l as f64) * (l as f64 + 1.0));
        let weight = real::<T>(2.0 * l as f64 + 1.0) / lam.powi(q as i32 + 1);
        acc.add(weight * p);
        let next = legendre_next(l, x, p, pm1);
        pm1 = p;
        p = next;
    }
    quarter_pi_inv::<T>() * acc.value()
}

/// Cesàro (C,1) average of the partial sums through `l_max`; the sanctioned
/// acceleration for the conditionally convergent q = 0 series.
pub fn green_series_cesaro<T: Real>(q: u32, x: T, l_max: u32) -> T {
    let mut partial = KahanSum::new();
    let mut avg = KahanSum::new();
    let mut pm1 = T::one();
    let mut p = x;
    for l in 1..=l_max {
        let lam = real::<T>((l as f64) * (l as f64 + 1.0));
        let weight = real::<T>(2.0 * l as f64 + 1.0) / lam.powi(q as i32 + 1);
        partial.add(weight * p);
        avg.add(partial.value());
        let next = legendre_next(l, x, p, pm1);
        pm1 = p;
        p = next;
    }
    quarter_pi_inv::<T>() * avg.value() / real(l_max as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    const ZETA3: f64 = 1.202_056_903_159_594_3;

    fn g<T: Real>(q: u32, x: T) -> T {
        green_closed(GreenOrder::from_q(q).unwrap(), GeodesicCosine::new(x).unwrap()).unwrap()
    }

    #[test]
    fn closed_form_reference_points() {
        // antipode of order zero: log terms cancel
        assert_abs_diff_eq!(g(0, -1.0f64), -1.0 / (4.0 * PI), epsilon = 1e-15);
        // root of log 2 - 1 - log(1-x)
        let root = 1.0 - 2.0 / std::f64::consts::E;
        assert_abs_diff_eq!(g(0, root), 0.0, epsilon = 1e-15);
        // coincidence limits carry the full trace of the propagator weights
        assert_abs_diff_eq!(g(1, 1.0f64), 1.0 / (4.0 * PI), epsilon = 1e-15);
        assert_abs_diff_eq!(
            g(2, 1.0f64),
            (2.0 * ZETA3 - 2.0) / (4.0 * PI),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            g(2, -1.0f64),
            (PI * PI / 6.0 - 2.0) / (4.0 * PI),
            epsilon = 1e-15
        );
    }

    #[test]
    fn singular_points_rejected() {
        assert!(matches!(
            green_closed(GreenOrder::Zero, GeodesicCosine::new(1.0f64).unwrap()),
            Err(GreensError::SingularPoint { q: 0, .. })
        ));
        assert!(matches!(
            green_closed(GreenOrder::One, GeodesicCosine::new(-1.0f64).unwrap()),
            Err(GreensError::SingularPoint { q: 1, .. })
        ));
        assert!(GeodesicCosine::new(1.0 + 1e-12).is_err());
        assert!(GeodesicCosine::new(f64::NAN).is_err());
    }

    #[test]
    fn series_telescopes_for_order_one_at_coincidence() {
        // Σ_{l<=L} (2l+1)/(l(l+1))² = 1 - 1/(L+1)²
        let l = 100u32;
        let expect = (1.0 - 1.0 / 101.0f64.powi(2)) / (4.0 * PI);
        assert_abs_diff_eq!(green_series(1, 1.0f64, l), expect, epsilon = 1e-15);
    }

    #[test]
    fn series_alternating_limit_at_antipode() {
        // order zero at x = -1 is alternating; Cesàro averaging converges
        // with an O(1/L) bias
        let v = green_series_cesaro(0, -1.0f64, 200_000);
        assert_abs_diff_eq!(v, -1.0 / (4.0 * PI), epsilon = 1e-6);
        let finer = green_series_cesaro(0, -1.0f64, 800_000);
        assert!((finer + 1.0 / (4.0 * PI)).abs() < (v + 1.0 / (4.0 * PI)).abs());
    }

    #[test]
    fn high_order_terms_decay() {
        let x = 0.3f64;
        let v50 = green_series(5, x, 50);
        let v49 = green_series(5, x, 49);
        assert!((v50 - v49).abs() < 1e-10);
        assert!(v50.is_finite());
    }

    #[test]
    fn series_matches_closed_forms() {
        for x in [-0.9f64, 0.0, 0.9] {
            assert_abs_diff_eq!(green_series(1, x, 10_000), g(1, x), epsilon = 1e-8);
            assert_abs_diff_eq!(green_series(2, x, 10_000), g(2, x), epsilon = 1e-12);
            // conditionally convergent order zero: raw vs Cesàro
            assert_abs_diff_eq!(green_series(0, x, 10_000), g(0, x), epsilon = 1e-3);
            assert_abs_diff_eq!(green_series_cesaro(0, x, 1_000_000), g(0, x), epsilon = 1e-6);
        }
    }
}
