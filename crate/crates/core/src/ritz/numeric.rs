//! Numerical sum rules: partial sum over the retained Ritz eigenvalues,
//! completed by the Weyl tail.

use crate::error::RitzError;
use crate::scalar::{real, KahanSum, Real};

use super::weyl::{weyl_tail, WeylTail};
use super::SpectrumApprox;

/// Σ_{n<=N} 1/E_n^p + (ζ(p) - H_N^(p)).
pub fn numeric_sum_rule<T: Real>(
    spectrum: &SpectrumApprox<T>,
    order: u32,
    n_retained: usize,
) -> Result<(T, WeylTail<T>), RitzError> {
    if n_retained > spectrum.dim() {
        return Err(RitzError::RetainedTooLarge {
            n: n_retained,
            dim: spectrum.dim(),
        });
    }
    let mut acc = KahanSum::new();
    // ascending eigenvalues summed from the smallest terms up
    for &e in spectrum.eigenvalues()[..n_retained].iter().rev() {
        acc.add(e.powi(-(order as i32)));
    }
    let tail = weyl_tail::<T>(order, n_retained);
    acc.add(tail.value);
    Ok((acc.value(), tail))
}

/// One cutoff of a convergence sweep.
#[derive(Debug, Clone)]
pub struct SweepRow<T> {
    pub l_max: u32,
    pub n_retained: usize,
    pub numeric: T,
    pub abs_err: T,
    pub weyl_tail: T,
}

/// Numerical sum rule against the exact value across basis cutoffs.
pub fn convergence_sweep<T: Real>(
    spectra: &[SpectrumApprox<T>],
    order: u32,
    exact: T,
) -> Result<Vec<SweepRow<T>>, RitzError> {
    spectra
        .iter()
        .map(|s| {
            let n = s.n_retained();
            let (numeric, tail) = numeric_sum_rule(s, order, n)?;
            Ok(SweepRow {
                l_max: s.l_max(),
                n_retained: n,
                numeric,
                abs_err: (numeric - exact).abs(),
                weyl_tail: tail.value,
            })
        })
        .collect()
}

/// Weyl-tail-only residual: the numeric error floor of the homogeneous case.
pub fn homogeneous_residual<T: Real>(order: u32, l_max: u32) -> T {
    let dim = crate::spectral::basis_dim(l_max);
    let n = dim / 3;
    let mut acc = KahanSum::new();
    let mut count = 0usize;
    'outer: for l in 1..=l_max {
        let e = real::<T>((l * (l + 1)) as f64);
        for _ in 0..(2 * l + 1) {
            count += 1;
            acc.add(e.powi(-(order as i32)));
            if count == n {
                break 'outer;
            }
        }
    }
    acc.add(weyl_tail::<T>(order, n).value);
    (acc.value() - crate::spectral::homogeneous_z::<T>(order).unwrap()).abs()
}
