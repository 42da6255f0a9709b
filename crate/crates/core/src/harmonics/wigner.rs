//! Wigner 3j symbols by the Racah single-sum formula.
//!
//! Two evaluation paths share the selection rules: a fast floating-point
//! path using a compensated log-factorial table, and an exact big-rational
//! path that represents a 3j symbol as sign · √(p/q). The exact path is the
//! validation oracle for the floating one.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::DomainError;
use crate::scalar::{real, KahanSum, Real};
use crate::special::{BigFactorials, LnFactorials};

/// A 3j value in exact form: `sign * sqrt(square)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Exact3j {
    pub negative: bool,
    pub square: BigRational,
}

impl Exact3j {
    pub fn zero() -> Self {
        Self {
            negative: false,
            square: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.square.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        let mag = big_ratio_to_f64(self.square.numer(), self.square.denom()).sqrt();
        if self.negative {
            -mag
        } else {
            mag
        }
    }
}

/// Ratio of two big integers as f64, scaled by bit length so that huge
/// factorial products do not overflow on the way through.
fn big_ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift_n = num.bits().saturating_sub(512) as i64;
    let shift_d = den.bits().saturating_sub(512) as i64;
    let n = (num >> shift_n as u64).to_f64().unwrap();
    let d = (den >> shift_d as u64).to_f64().unwrap();
    (n / d) * 2f64.powi((shift_n - shift_d) as i32)
}

fn check_indices(l: [i64; 3], m: [i64; 3]) -> Result<(), DomainError> {
    for i in 0..3 {
        if l[i] < 0 || m[i].abs() > l[i] {
            return Err(DomainError::InvalidHarmonicIndex { l: l[i], m: m[i] });
        }
    }
    Ok(())
}

fn selection_zero(l: [i64; 3], m: [i64; 3]) -> bool {
    m[0] + m[1] + m[2] != 0 || l[2] < (l[0] - l[1]).abs() || l[2] > l[0] + l[1]
}

/// Wigner 3j evaluator with a growable log-factorial table.
pub struct Wigner3j<T> {
    lnfact: LnFactorials<T>,
    bigfact: BigFactorials,
}

impl<T: Real> Wigner3j<T> {
    pub fn new() -> Self {
        Self {
            lnfact: LnFactorials::new(),
            bigfact: BigFactorials::new(),
        }
    }

    /// Floating-point 3j symbol.
    pub fn eval(
        &self,
        l1: i64,
        l2: i64,
        l3: i64,
        m1: i64,
        m2: i64,
        m3: i64,
    ) -> Result<T, DomainError> {
        let (l, m) = ([l1, l2, l3], [m1, m2, m3]);
        check_indices(l, m)?;
        if selection_zero(l, m) {
            return Ok(T::zero());
        }
        // cyclic rotation putting the largest l in the third column keeps
        // the value unchanged and minimizes the Racah sum length
        let (l, m) = cycle_to_max(l, m);
        Ok(self.racah(l, m))
    }

    fn lnf(&self, n: i64) -> T {
        debug_assert!(n >= 0);
        self.lnfact.get(n as usize)
    }

    fn racah(&self, l: [i64; 3], m: [i64; 3]) -> T {
        let [j1, j2, j3] = l;
        let [m1, m2, m3] = m;
        let t_min = 0.max(j2 - j3 - m1).max(j1 - j3 + m2);
        let t_max = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);
        if t_min > t_max {
            return T::zero();
        }
        // ln of the squared prefactor: triangle coefficient and (l±m)! products
        let ln_delta = self.lnf(j1 + j2 - j3) + self.lnf(j1 - j2 + j3) + self.lnf(-j1 + j2 + j3)
            - self.lnf(j1 + j2 + j3 + 1);
        let ln_mfact = self.lnf(j1 - m1)
            + self.lnf(j1 + m1)
            + self.lnf(j2 - m2)
            + self.lnf(j2 + m2)
            + self.lnf(j3 - m3)
            + self.lnf(j3 + m3);
        let ln_terms: Vec<T> = (t_min..=t_max)
            .map(|t| {
                -(self.lnf(t)
                    + self.lnf(j3 - j2 + t + m1)
                    + self.lnf(j3 - j1 + t - m2)
                    + self.lnf(j1 + j2 - j3 - t)
                    + self.lnf(j1 - t - m1)
                    + self.lnf(j2 - t + m2))
            })
            .collect();
        let ln_max = ln_terms
            .iter()
            .copied()
            .fold(T::neg_infinity(), |a, b| a.max(b));
        let mut acc = KahanSum::new();
        for (k, ln_t) in ln_terms.iter().enumerate() {
            let t = t_min + k as i64;
            let sign = if t.rem_euclid(2) == 0 { T::one() } else { -T::one() };
            acc.add(sign * (*ln_t - ln_max).exp());
        }
        let phase = if (j1 - j2 - m3).rem_euclid(2) == 0 {
            T::one()
        } else {
            -T::one()
        };
        phase * acc.value() * (real::<T>(0.5) * (ln_delta + ln_mfact) + ln_max).exp()
    }

    /// Exact 3j symbol as sign · √(rational); any degree, cost grows with l.
    pub fn eval_exact(
        &self,
        l1: i64,
        l2: i64,
        l3: i64,
        m1: i64,
        m2: i64,
        m3: i64,
    ) -> Result<Exact3j, DomainError> {
        let (l, m) = ([l1, l2, l3], [m1, m2, m3]);
        check_indices(l, m)?;
        if selection_zero(l, m) {
            return Ok(Exact3j::zero());
        }
        let (l, m) = cycle_to_max(l, m);
        let [j1, j2, j3] = l;
        let [m1, m2, m3] = m;
        let t_min = 0.max(j2 - j3 - m1).max(j1 - j3 + m2);
        let t_max = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);
        if t_min > t_max {
            return Ok(Exact3j::zero());
        }
        let f = |n: i64| self.bigfact.get(n as usize);
        let mut sum = BigRational::zero();
        for t in t_min..=t_max {
            let den = f(t)
                * f(j3 - j2 + t + m1)
                * f(j3 - j1 + t - m2)
                * f(j1 + j2 - j3 - t)
                * f(j1 - t - m1)
                * f(j2 - t + m2);
            let term = BigRational::new(BigInt::from(1), den);
            if t.rem_euclid(2) == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        let delta = BigRational::new(
            f(j1 + j2 - j3) * f(j1 - j2 + j3) * f(-j1 + j2 + j3),
            f(j1 + j2 + j3 + 1),
        );
        let mfact = f(j1 - m1) * f(j1 + m1) * f(j2 - m2) * f(j2 + m2) * f(j3 - m3) * f(j3 + m3);
        let square = delta * BigRational::from(mfact) * &sum * &sum;
        let phase_neg = (j1 - j2 - m3).rem_euclid(2) == 1;
        Ok(Exact3j {
            negative: sum.is_negative() != phase_neg && !sum.is_zero(),
            square,
        })
    }
}

impl<T: Real> Default for Wigner3j<T> {
    fn default() -> Self {
        Self::new()
    }
}

fn cycle_to_max(l: [i64; 3], m: [i64; 3]) -> ([i64; 3], [i64; 3]) {
    let mut idx = 0;
    for i in 1..3 {
        if l[i] > l[idx] {
            idx = i;
        }
    }
    match idx {
        2 => (l, m),
        0 => ([l[1], l[2], l[0]], [m[1], m[2], m[0]]),
        _ => ([l[2], l[0], l[1]], [m[2], m[0], m[1]]),
    }
}

/// Squared 3j symbol with all m = 0, by telescoped factorial ratios.
///
/// For `(l, l', l₁; 0, 0, 0)` with small `l₁` this needs only O(l₁) factor
/// pairs regardless of how large `l` is, so the spectral kernels can sum it
/// to very high degree. Interleaving numerator and denominator factors keeps
/// every partial product within range.
pub fn three_j_squared_m0<T: Real>(l1: i64, l2: i64, l3: i64) -> T {
    let j = l1 + l2 + l3;
    if j % 2 != 0 || l3 < (l1 - l2).abs() || l3 > l1 + l2 {
        return T::zero();
    }
    let g = j / 2;
    let a = g - l1;
    let b = g - l2;
    let small = l3;
    // binomial part (2a)!(2b)!/(a! b!)²  =  C(2a, a) · C(2b, b)
    let mut r = T::one();
    for k in 1..=a {
        r = r * real::<T>((a + k) as f64) / real::<T>(k as f64);
    }
    for k in 1..=b {
        r = r * real::<T>((b + k) as f64) / real::<T>(k as f64);
    }
    // [g!/(g-l3)!]² / [(2g-2l3+1) ... (2g+1)]
    for k in 0..small {
        let num = real::<T>((g - k) as f64);
        let d1 = real::<T>((2 * g - 2 * small + 1 + 2 * k) as f64);
        let d2 = real::<T>((2 * g - 2 * small + 2 + 2 * k) as f64);
        r = r * num / d1 * num / d2;
    }
    r / real::<T>((2 * g + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn w3j(l1: i64, l2: i64, l3: i64, m1: i64, m2: i64, m3: i64) -> f64 {
        Wigner3j::<f64>::new().eval(l1, l2, l3, m1, m2, m3).unwrap()
    }

    #[test]
    fn reference_values() {
        assert_abs_diff_eq!(w3j(1, 1, 2, 0, 0, 0), (2.0f64 / 15.0).sqrt(), epsilon = 1e-14);
        assert_eq!(w3j(1, 1, 1, 0, 0, 0), 0.0);
        assert_abs_diff_eq!(w3j(1, 1, 0, 0, 0, 0), -1.0 / 3.0f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn exact_oracle_agrees_with_float() {
        let engine = Wigner3j::<f64>::new();
        // the tuple with m-sum 1 is zero by selection on both paths
        let ex = engine.eval_exact(2, 1, 1, 1, 1, -1).unwrap();
        assert!(ex.is_zero());
        assert_eq!(engine.eval(2, 1, 1, 1, 1, -1).unwrap(), ex.to_f64());
        let ex = engine.eval_exact(2, 1, 1, 1, -1, 0).unwrap();
        assert_abs_diff_eq!(ex.to_f64(), -(10.0f64).sqrt() / 10.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            engine.eval(2, 1, 1, 1, -1, 0).unwrap(),
            ex.to_f64(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn exact_oracle_large_degrees() {
        let engine = Wigner3j::<f64>::new();
        // thin triangles keep the Racah sum short: full precision
        for (l1, l2, l3, m1, m2, m3) in [(80, 79, 3, 2, -1, -1), (120, 121, 1, 5, -5, 0)] {
            let exact = engine.eval_exact(l1, l2, l3, m1, m2, m3).unwrap().to_f64();
            let float = engine.eval(l1, l2, l3, m1, m2, m3).unwrap();
            assert_abs_diff_eq!(float, exact, epsilon = 1e-12);
        }
        // fat triangles cancel heavily in the alternating sum; the floating
        // path keeps only ~8 digits there
        for (l1, l2, l3, m1, m2, m3) in [(40, 40, 40, 5, -17, 12), (66, 70, 8, -30, 28, 2)] {
            let exact = engine.eval_exact(l1, l2, l3, m1, m2, m3).unwrap().to_f64();
            let float = engine.eval(l1, l2, l3, m1, m2, m3).unwrap();
            assert_relative_eq!(float, exact, max_relative = 1e-6);
        }
    }

    #[test]
    fn domain_errors() {
        let engine = Wigner3j::<f64>::new();
        assert!(engine.eval(1, 1, 2, 2, 0, -2).is_err());
        assert!(engine.eval(-1, 1, 2, 0, 0, 0).is_err());
    }

    #[test]
    fn squared_m0_matches_racah() {
        let engine = Wigner3j::<f64>::new();
        for l1 in 1..=12i64 {
            for l3 in 0..=6i64 {
                for l2 in (l1 - l3).abs()..=(l1 + l3) {
                    if l2 < 1 {
                        continue;
                    }
                    let direct = engine.eval(l1, l2, l3, 0, 0, 0).unwrap();
                    let squared: f64 = three_j_squared_m0(l1, l2, l3);
                    assert_abs_diff_eq!(squared, direct * direct, epsilon = 1e-15);
                }
            }
        }
    }

    #[test]
    fn squared_m0_no_overflow_at_high_degree() {
        let v: f64 = three_j_squared_m0(8000, 8001, 3);
        assert!(v > 0.0 && v.is_finite());
        let w: f32 = three_j_squared_m0(2000, 2001, 3);
        assert!(w > 0.0 && w.is_finite());
    }
}
