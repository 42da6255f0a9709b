//! Gaunt coefficients: integrals of a conjugated spherical harmonic against
//! two others,
//!
//! ```text
//! W(l1 m1, l2 m2, l3 m3) = ∫ Y*_{l1 m1} Y_{l2 m2} Y_{l3 m3} dΩ
//!   = (-1)^{m1} √((2l1+1)(2l2+1)(2l3+1)/4π)
//!     · 3j(l1 l2 l3; 0 0 0) · 3j(l1 l2 l3; -m1 m2 m3).
//! ```
//!
//! Nonzero only when m1 = m2 + m3, the triangle rule holds and l1+l2+l3 is
//! even. Values are memoized on a canonical key (the two unstarred factors
//! commute, and flipping the sign of every m leaves W unchanged).

use std::collections::HashMap;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{OnceLock, RwLock};

use crate::error::DomainError;
use crate::scalar::{real, Real};

use super::wigner::Wigner3j;

type Key = (u32, i32, u32, i32, u32, i32);

pub struct GauntTable<T> {
    wigner: Wigner3j<T>,
    memo: RwLock<HashMap<Key, T>>,
    covered: AtomicU32,
}

impl<T: Real> GauntTable<T> {
    pub fn new() -> Self {
        Self {
            wigner: Wigner3j::new(),
            memo: RwLock::new(HashMap::new()),
            covered: AtomicU32::new(0),
        }
    }

    /// Largest degree that has been computed so far.
    pub fn covered_degree(&self) -> u32 {
        self.covered.load(Ordering::Relaxed)
    }

    pub fn len(&self) -> usize {
        self.memo.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn wigner(&self) -> &Wigner3j<T> {
        &self.wigner
    }

    pub fn eval(
        &self,
        l1: u32,
        m1: i32,
        l2: u32,
        m2: i32,
        l3: u32,
        m3: i32,
    ) -> Result<T, DomainError> {
        for (l, m) in [(l1, m1), (l2, m2), (l3, m3)] {
            if m.unsigned_abs() > l {
                return Err(DomainError::InvalidHarmonicIndex {
                    l: l as i64,
                    m: m as i64,
                });
            }
        }
        if m1 != m2 + m3
            || (l1 + l2 + l3) % 2 != 0
            || l3 + l1.min(l2) < l1.max(l2)
            || l3 > l1 + l2
        {
            return Ok(T::zero());
        }
        let key = canonical_key(l1, m1, l2, m2, l3, m3);
        if let Some(v) = self.memo.read().unwrap().get(&key) {
            return Ok(*v);
        }
        let v = self.compute(key)?;
        self.covered.fetch_max(l1.max(l2).max(l3), Ordering::Relaxed);
        self.memo.write().unwrap().insert(key, v);
        Ok(v)
    }

    fn compute(&self, (l1, m1, l2, m2, l3, m3): Key) -> Result<T, DomainError> {
        let (l1, l2, l3) = (l1 as i64, l2 as i64, l3 as i64);
        let (m1, m2, m3) = (m1 as i64, m2 as i64, m3 as i64);
        let parity = self.wigner.eval(l1, l2, l3, 0, 0, 0)?;
        let coupling = self.wigner.eval(l1, l2, l3, -m1, m2, m3)?;
        let norm = (real::<T>(((2 * l1 + 1) * (2 * l2 + 1) * (2 * l3 + 1)) as f64)
            / (real::<T>(4.0) * T::PI()))
        .sqrt();
        let sign = if m1.rem_euclid(2) == 0 { T::one() } else { -T::one() };
        Ok(sign * norm * parity * coupling)
    }
}

impl<T: Real> Default for GauntTable<T> {
    fn default() -> Self {
        Self::new()
    }
}

fn canonical_key(l1: u32, m1: i32, l2: u32, m2: i32, l3: u32, m3: i32) -> Key {
    let (mut m1, mut m2, mut m3) = (m1, m2, m3);
    // W is invariant under negating all m (even total parity)
    let lead = if m1 != 0 {
        m1
    } else if m2 != 0 {
        m2
    } else {
        m3
    };
    if lead < 0 {
        m1 = -m1;
        m2 = -m2;
        m3 = -m3;
    }
    // the two unstarred harmonics commute
    if (l3, m3) < (l2, m2) {
        (l1, m1, l3, m3, l2, m2)
    } else {
        (l1, m1, l2, m2, l3, m3)
    }
}

static GLOBAL_TABLE: OnceLock<GauntTable<f64>> = OnceLock::new();

/// Process-wide table at working precision.
pub fn global_gaunt() -> &'static GauntTable<f64> {
    GLOBAL_TABLE.get_or_init(GauntTable::new)
}

/// Convenience wrapper over [`global_gaunt`].
pub fn gaunt(l1: u32, m1: i32, l2: u32, m2: i32, l3: u32, m3: i32) -> Result<f64, DomainError> {
    global_gaunt().eval(l1, m1, l2, m2, l3, m3)
}

/// Free-function 3j at working precision (shared engine).
pub fn wigner3j(l1: i64, l2: i64, l3: i64, m1: i64, m2: i64, m3: i64) -> Result<f64, DomainError> {
    global_gaunt().wigner().eval(l1, l2, l3, m1, m2, m3)
}
