//! Legendre polynomials via the stable three-term recurrence.

use crate::scalar::Real;

/// P_l(x) for a single degree.
pub fn legendre_pl<T: Real>(l: u32, x: T) -> T {
    if l == 0 {
        return T::one();
    }
    let mut pm1 = T::one();
    let mut p = x;
    for k in 1..l {
        let next = legendre_next(k, x, p, pm1);
        pm1 = p;
        p = next;
    }
    p
}

/// Given P_k and P_{k-1} at `x`, returns P_{k+1}(x).
#[inline]
pub fn legendre_next<T: Real>(k: u32, x: T, pk: T, pkm1: T) -> T {
    let k = T::from_u32(k).unwrap();
    let two = T::one() + T::one();
    ((two * k + T::one()) * x * pk - k * pkm1) / (k + T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn low_degrees() {
        let x = 0.37f64;
        assert_abs_diff_eq!(legendre_pl(0, x), 1.0);
        assert_abs_diff_eq!(legendre_pl(1, x), x);
        assert_abs_diff_eq!(legendre_pl(2, x), 0.5 * (3.0 * x * x - 1.0), epsilon = 1e-15);
        assert_abs_diff_eq!(
            legendre_pl(3, x),
            0.5 * (5.0 * x * x * x - 3.0 * x),
            epsilon = 1e-15
        );
    }

    #[test]
    fn endpoint_values() {
        for l in 0..40u32 {
            assert_abs_diff_eq!(legendre_pl(l, 1.0f64), 1.0, epsilon = 1e-12);
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            assert_abs_diff_eq!(legendre_pl(l, -1.0f64), sign, epsilon = 1e-12);
        }
    }
}
