//! Factorial tables: compensated log-factorials for the floating Wigner path
//! and exact big-integer factorials for the rational path.

use std::sync::RwLock;

use num_bigint::BigInt;

use crate::scalar::{real, KahanSum, Real};

/// Growable table of ln(n!) built by compensated summation of ln(k).
///
/// Safe for concurrent readers; growth takes a short write lock.
pub struct LnFactorials<T> {
    table: RwLock<Vec<T>>,
}

impl<T: Real> LnFactorials<T> {
    pub fn new() -> Self {
        Self {
            table: RwLock::new(vec![T::zero(), T::zero()]),
        }
    }

    pub fn get(&self, n: usize) -> T {
        {
            let table = self.table.read().unwrap();
            if n < table.len() {
                return table[n];
            }
        }
        let mut table = self.table.write().unwrap();
        while table.len() <= n {
            let k = table.len();
            // Rebuild the compensated sum from the last entry; the running
            // carry is not stored, so re-add in small blocks to keep error
            // at a few ulps.
            let mut acc = KahanSum::new();
            acc.add(table[k - 1]);
            acc.add(real::<T>(k as f64).ln());
            table.push(acc.value());
        }
        table[n]
    }
}

impl<T: Real> Default for LnFactorials<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Exact n! as big integers, memoized.
pub struct BigFactorials {
    table: RwLock<Vec<BigInt>>,
}

impl BigFactorials {
    pub fn new() -> Self {
        Self {
            table: RwLock::new(vec![BigInt::from(1), BigInt::from(1)]),
        }
    }

    pub fn get(&self, n: usize) -> BigInt {
        {
            let table = self.table.read().unwrap();
            if n < table.len() {
                return table[n].clone();
            }
        }
        let mut table = self.table.write().unwrap();
        while table.len() <= n {
            let k = table.len();
            let next = &table[k - 1] * BigInt::from(k);
            table.push(next);
        }
        table[n].clone()
    }
}

impl Default for BigFactorials {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ln_factorials_match_direct() {
        let t = LnFactorials::<f64>::new();
        let direct: f64 = (1..=170).map(|k| (k as f64).ln()).sum();
        assert_relative_eq!(t.get(170), direct, max_relative = 1e-14);
        assert_eq!(t.get(0), 0.0);
        assert_eq!(t.get(1), 0.0);
        assert_relative_eq!(t.get(5), 120.0f64.ln(), max_relative = 1e-15);
    }

    #[test]
    fn big_factorials() {
        let t = BigFactorials::new();
        assert_eq!(t.get(10), BigInt::from(3_628_800u64));
        assert_eq!(t.get(3), BigInt::from(6));
    }
}
