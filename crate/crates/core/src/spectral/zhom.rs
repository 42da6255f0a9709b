//! Homogeneous sum rules Z_p = Σ_{l>=1} (2l+1)/(l(l+1))^p.
//!
//! Writing 2l+1 = (l+1)² - l², the summand splits into inverse powers of l
//! and l+1 whose sums telescope into zeta values:
//!
//! ```text
//! (2l+1)/(l(l+1))^p = Σ_j A_j/l^j + (-1)^{j+1} A_j/(l+1)^j
//! Z_p = Σ_{j even} A_j + Σ_{j odd} (2 ζ(j) - 1) A_j
//! ```
//!
//! giving Z_2 = 1 and Z_3 = 2(ζ(3) - 1) exactly.

use crate::error::SpectralError;
use crate::scalar::{real, zeta3, KahanSum, Real};
use crate::special::zeta_int;

pub fn homogeneous_z<T: Real>(p: u32) -> Result<T, SpectralError> {
    if p < 2 {
        return Err(SpectralError::DivergentOrder(p));
    }
    if p == 2 {
        return Ok(T::one());
    }
    if p == 3 {
        return Ok(real::<T>(2.0) * (zeta3::<T>() - T::one()));
    }
    let mut acc = KahanSum::new();
    for j in 2..=p {
        let k = p - j;
        // A_j = [2·(1-p)(−p)···  −  (−p)(−p−1)···] / k!, k factors each
        let mut fall1 = 1.0f64;
        let mut fall2 = 1.0f64;
        for i in 0..k {
            fall1 *= 1.0 - p as f64 - i as f64;
            fall2 *= -(p as f64) - i as f64;
        }
        let mut kfact = 1.0f64;
        for i in 1..=k {
            kfact *= i as f64;
        }
        let a = real::<T>((2.0 * fall1 - fall2) / kfact);
        if j % 2 == 0 {
            acc.add(a);
        } else {
            acc.add(a * (real::<T>(2.0) * zeta_int::<T>(j) - T::one()));
        }
    }
    Ok(acc.value())
}
