//! Weyl-law tail completion: with total mass 4π the counting function obeys
//! N(E) ≈ E, so eigenvalues beyond the retained Ritz set are approximated
//! by E_n ≈ n and their inverse-power sum is ζ(p) - H_N^(p).

use crate::scalar::{real, Real};
use crate::special::tail_inv_pow;

/// ζ(p) - Σ_{n<=N} n^{-p}, the analytic completion beyond index N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylTail<T> {
    pub order: u32,
    pub n_start: usize,
    pub value: T,
}

pub fn weyl_tail<T: Real>(order: u32, n_start: usize) -> WeylTail<T> {
    assert!(order >= 2, "tail diverges for p < 2");
    assert!(n_start >= 1);
    WeylTail {
        order,
        n_start,
        value: tail_inv_pow(real::<T>(order as f64), n_start as u32),
    }
}

impl<T: Real> WeylTail<T> {
    /// Elementary bound 0 < value < N^{1-p}/(p-1).
    pub fn upper_bound(&self) -> T {
        let p = real::<T>(self.order as f64);
        real::<T>(self.n_start as f64).powf(T::one() - p) / (p - T::one())
    }
}
