//! Zeta values and inverse-power tail sums via Euler–Maclaurin.

use crate::scalar::{real, KahanSum, Real};

/// Σ_{k>n} k^{-s} for s > 1, accurate to a few ulps.
///
/// Terms up to k = 64 are summed directly, the rest by the Euler–Maclaurin
/// expansion, whose omitted term is O(s⁷ n^{-s-7}).
pub fn tail_inv_pow<T: Real>(s: T, n: u32) -> T {
    assert!(s > T::one(), "tail diverges for s <= 1");
    let base = n.max(64);
    let mut acc = KahanSum::new();
    for k in (n + 1)..=base {
        acc.add(real::<T>(k as f64).powf(-s));
    }
    let x = real::<T>(base as f64);
    let inv = x.powf(-s);
    let half = real::<T>(0.5);
    // ∫_x^∞ t^{-s} dt + EM corrections at the left endpoint
    let mut tail = x * inv / (s - T::one()) - half * inv;
    let mut deriv = s * inv / x; // -f'(x) with f = t^{-s}
    tail = tail + deriv / real::<T>(12.0);
    deriv = deriv * (s + T::one()) * (s + real::<T>(2.0)) / (x * x); // -f'''(x)
    tail = tail - deriv / real::<T>(720.0);
    deriv = deriv * (s + real::<T>(3.0)) * (s + real::<T>(4.0)) / (x * x); // -f⁽⁵⁾(x)
    tail = tail + deriv / real::<T>(30240.0);
    acc.add(tail);
    acc.value()
}

/// ζ(s) for integer s ≥ 2.
pub fn zeta_int<T: Real>(s: u32) -> T {
    assert!(s >= 2);
    let sf = real::<T>(s as f64);
    let mut acc = KahanSum::new();
    acc.add(T::one());
    acc.add(tail_inv_pow(sf, 1));
    acc.value()
}
