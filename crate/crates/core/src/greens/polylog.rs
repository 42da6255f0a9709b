//! Real dilogarithm and trilogarithm.
//!
//! The power series Σ zᵏ/kˢ is used on |z| ≤ 1/2 where it converges fast;
//! the rest of [-1, 1] is mapped into that region with the standard Landen,
//! reflection and square identities. Accuracy is a few ulps (absolute error
//! well below 1e-14 in f64).

use crate::error::GreensError;
use crate::scalar::{real, zeta3, KahanSum, Real};

fn series<T: Real>(z: T, s: u32) -> T {
    debug_assert!(z.abs() <= real(0.5 + 1e-12));
    let mut acc = KahanSum::new();
    let mut zk = z;
    let mut k = 1u32;
    loop {
        let term = zk / real::<T>(k as f64).powi(s as i32);
        acc.add(term);
        if term.abs() < T::epsilon() * real(0.25) {
            break;
        }
        zk = zk * z;
        k += 1;
        if k > 200 {
            break;
        }
    }
    acc.value()
}

fn pi2_over_6<T: Real>() -> T {
    T::PI() * T::PI() / real(6.0)
}

/// Li₂ on the whole real line z ≤ 1; callers outside the crate go through
/// [`dilog`], which restricts to [-1, 1].
pub(crate) fn dilog_ext<T: Real>(z: T) -> T {
    let half = real::<T>(0.5);
    if z == T::zero() {
        T::zero()
    } else if z.abs() <= half {
        series(z, 2)
    } else if z < -T::one() {
        // inversion: Li2(z) = -π²/6 - ln²(-z)/2 - Li2(1/z)
        let ln = (-z).ln();
        -pi2_over_6::<T>() - half * ln * ln - dilog_ext(z.recip())
    } else if z < T::zero() {
        // Landen: Li2(z) = -Li2(z/(z-1)) - ln²(1-z)/2, z/(z-1) in (1/3, 1/2]
        let w = z / (z - T::one());
        let ln = (T::one() - z).ln();
        -series(w, 2) - half * ln * ln
    } else if z == T::one() {
        pi2_over_6()
    } else {
        // reflection: Li2(z) = π²/6 - ln(z) ln(1-z) - Li2(1-z), 1-z in [0, 1/2)
        let om = T::one() - z;
        pi2_over_6::<T>() - z.ln() * om.ln() - series(om, 2)
    }
}

fn trilog_inner<T: Real>(z: T) -> T {
    let half = real::<T>(0.5);
    if z == T::zero() {
        T::zero()
    } else if z.abs() <= half {
        series(z, 3)
    } else if z < T::zero() {
        // square identity: Li3(z) = Li3(z²)/4 - Li3(-z), both args in (1/4, 1]
        let sq = z * z;
        real::<T>(0.25) * trilog_inner(sq) - trilog_inner(-z)
    } else if z == T::one() {
        zeta3()
    } else {
        // Li3(z) + Li3(1-z) + Li3(1-1/z)
        //   = ζ(3) + ln³z/6 + π² ln z/6 - ln²z ln(1-z)/2
        let ln = z.ln();
        let om = T::one() - z;
        let rhs = zeta3::<T>()
            + ln * ln * ln / real(6.0)
            + pi2_over_6::<T>() * ln
            - half * ln * ln * om.ln();
        rhs - series(om, 3) - trilog_inner(-om / z)
    }
}

/// Li₂(z) for z in [-1, 1].
pub fn dilog<T: Real>(z: T) -> Result<T, GreensError> {
    if !(z >= -T::one() && z <= T::one()) {
        return Err(GreensError::OutOfDomain(z.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(dilog_ext(z))
}

/// Li₃(z) for z in [-1, 1].
pub fn trilog<T: Real>(z: T) -> Result<T, GreensError> {
    if !(z >= -T::one() && z <= T::one()) {
        return Err(GreensError::OutOfDomain(z.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(trilog_inner(z))
}
