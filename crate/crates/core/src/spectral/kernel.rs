//! Degree-summed kernels for the quadratic traces.
//!
//! Contracting the order sums of tr(D_a S' D_b S') with the 3j orthogonality
//! relation leaves, per density degree l₁, a double sum over (l, l') that
//! depends only on the power spectrum:
//!
//! ```text
//! tr(D_a S' D_b S') = Σ_{l1} ρ_{l1} K_{l1}^{(a,b)},
//! K_{l1}^{(a,b)} = (1/4π) Σ_{l,l'>=1} (2l+1)(2l'+1) [3j(l,l',l1;0,0,0)]²
//!                  / ((l(l+1))^{a+1} (l'(l'+1))^{b+1}).
//! ```
//!
//! Terms decay like l^{-(2a+2b+3)}; the sum is truncated at a large degree
//! and completed by fitting a three-term inverse-power tail to sampled
//! terms, with the remainder summed by Euler–Maclaurin.

use crate::harmonics::three_j_squared_m0;
use crate::scalar::{real, KahanSum, Real};
use crate::special::tail_inv_pow;

use super::sigma::lambda;

/// Per-l term of the kernel sum.
fn kernel_term<T: Real>(a: u32, b: u32, l1: u32, l: u32) -> T {
    let mut acc = T::zero();
    let lo = (l as i64 - l1 as i64).max(1) as u32;
    for lp in lo..=(l + l1) {
        if (l + lp + l1) % 2 != 0 {
            continue;
        }
        let tj2 = three_j_squared_m0::<T>(l as i64, lp as i64, l1 as i64);
        if tj2 == T::zero() {
            continue;
        }
        let weight = real::<T>((2.0 * l as f64 + 1.0) * (2.0 * lp as f64 + 1.0));
        acc = acc
            + tj2 * weight
                * lambda::<T>(l).powi(-(a as i32 + 1))
                * lambda::<T>(lp).powi(-(b as i32 + 1));
    }
    acc / (real::<T>(4.0) * T::PI())
}

/// K_{l1}^{(a,b)} summed to `cutoff` with the fitted analytic tail.
pub fn pair_trace_kernel<T: Real>(a: u32, b: u32, l1: u32, cutoff: u32) -> T {
    let cutoff = cutoff.max(64).max(4 * l1);
    let samples = [cutoff / 4, cutoff / 2, cutoff];
    let mut acc = KahanSum::new();
    let mut sampled = [T::zero(); 3];
    for l in 1..=cutoff {
        let t = kernel_term::<T>(a, b, l1, l);
        acc.add(t);
        for (slot, &s) in sampled.iter_mut().zip(&samples) {
            if l == s {
                *slot = t;
            }
        }
    }
    let sigma = 2 * (a + b) + 3;
    acc.add(fitted_tail(sigma, &samples, &sampled, cutoff));
    acc.value()
}

/// Fits t(l) ≈ α/l^σ + β/l^{σ+1} + γ/l^{σ+2} through three sampled terms and
/// returns Σ_{l>cutoff} of the fit.
fn fitted_tail<T: Real>(sigma: u32, ls: &[u32; 3], ts: &[T; 3], cutoff: u32) -> T {
    let mut m = [[T::zero(); 3]; 3];
    let mut rhs = *ts;
    for (i, &l) in ls.iter().enumerate() {
        let lf = real::<T>(l as f64);
        m[i][0] = lf.powi(-(sigma as i32));
        m[i][1] = lf.powi(-(sigma as i32 + 1));
        m[i][2] = lf.powi(-(sigma as i32 + 2));
    }
    // Gaussian elimination with partial pivoting on the 3x3 system
    for col in 0..3 {
        let mut pivot = col;
        for row in col + 1..3 {
            if m[row][col].abs() > m[pivot][col].abs() {
                pivot = row;
            }
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        if m[col][col] == T::zero() {
            return T::zero();
        }
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] = m[row][k] - f * m[col][k];
            }
            rhs[row] = rhs[row] - f * rhs[col];
        }
    }
    let mut coeff = [T::zero(); 3];
    for row in (0..3).rev() {
        let mut v = rhs[row];
        for k in row + 1..3 {
            v = v - m[row][k] * coeff[k];
        }
        coeff[row] = v / m[row][row];
    }
    let mut tail = T::zero();
    for (k, &c) in coeff.iter().enumerate() {
        tail = tail + c * tail_inv_pow(real::<T>((sigma + k as u32) as f64), cutoff);
    }
    tail
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn closed_form_kernels_for_degree_one() {
        // telescoping sums give K_1^{(0,0)} = 1/8π and K_1^{(0,1)} = 1/32π
        assert_abs_diff_eq!(
            pair_trace_kernel::<f64>(0, 0, 1, 2048),
            1.0 / (8.0 * PI),
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            pair_trace_kernel::<f64>(0, 1, 1, 2048),
            1.0 / (32.0 * PI),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            pair_trace_kernel::<f64>(1, 0, 1, 2048),
            1.0 / (32.0 * PI),
            epsilon = 1e-14
        );
    }

    #[test]
    fn tail_fit_matches_long_direct_sum() {
        for (a, b, l1) in [(0u32, 0u32, 2u32), (0, 1, 3), (1, 1, 2)] {
            let fitted = pair_trace_kernel::<f64>(a, b, l1, 1024);
            let mut direct = 0.0;
            for l in 1..=400_000u32 {
                direct += kernel_term::<f64>(a, b, l1, l);
            }
            assert_abs_diff_eq!(fitted, direct, epsilon = 1e-11);
        }
    }
}
