//! Rayleigh–Ritz spectrum of -Δψ = E Σ ψ in the truncated harmonic basis,
//! plus Weyl-completed numerical sum rules.
//!
//! Restricting both quadratic forms to harmonics with l <= l_max gives the
//! Hermitian pencil (A, B) with A = diag(l(l+1)) and B the density overlap
//! matrix. The constant (l = 0) must be part of the variational space: the
//! nonzero eigenfunctions are Σ-orthogonal to it, not L²-orthogonal, so
//! dropping the l = 0 row would bias every eigenvalue at first order in the
//! inhomogeneity. The constant itself is the zero mode of the pencil,
//! exactly, and its zero eigenvalue is discarded after the solve; the
//! remaining l_max (l_max + 2) eigenvalues are strictly positive.
//!
//! B is factored (Cholesky), the problem reduced to standard form and
//! solved with a dense Hermitian eigensolver. When the density couples only
//! some order classes, independent m-blocks are solved separately and
//! merged.

mod numeric;
mod weyl;

pub use numeric::{convergence_sweep, homogeneous_residual, numeric_sum_rule, SweepRow};
pub use weyl::{weyl_tail, WeylTail};

use nalgebra::{DMatrix, RealField};
use num_complex::Complex;
use rayon::prelude::*;

use crate::error::RitzError;
use crate::harmonics::{Density, GauntTable};
use crate::scalar::Real;
use crate::spectral::{lambda, m_blocks, sigma_prime_entry};

/// Sorted Rayleigh–Ritz eigenvalues at a basis cutoff.
#[derive(Debug, Clone)]
pub struct SpectrumApprox<T> {
    l_max: u32,
    eigenvalues: Vec<T>,
    n_retained: usize,
}

impl<T: Real> SpectrumApprox<T> {
    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Ascending eigenvalues; all strictly positive.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// Default retained count dim/3: the upper part of the Ritz spectrum is
    /// polluted by basis truncation and is replaced by the Weyl tail.
    pub fn n_retained(&self) -> usize {
        self.n_retained
    }
}

/// Options for [`solve_spectrum`].
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Dense-solve guard; above this, set `allow_large`.
    pub guard: u32,
    pub allow_large: bool,
    /// Scale B by a constant (the pencil scaling law divides eigenvalues).
    pub overlap_scale: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            guard: 96,
            allow_large: false,
            overlap_scale: 1.0,
        }
    }
}

/// Eigenvalues of the pencil (A, B) at basis cutoff `l_max`.
pub fn solve_spectrum<T: Real + RealField>(
    d: &Density<T>,
    l_max: u32,
    gaunt: &GauntTable<T>,
    options: &SolveOptions,
) -> Result<SpectrumApprox<T>, RitzError> {
    if l_max > options.guard && !options.allow_large {
        return Err(RitzError::CutoffGuard {
            l_max,
            cap: options.guard,
        });
    }
    if l_max < d.band_limit() + 1 {
        return Err(RitzError::CutoffTooSmall {
            l_max,
            band_limit: d.band_limit(),
        });
    }
    let blocks = m_blocks(&d.coupling_orders(), l_max);
    let solved: Result<Vec<Vec<(T, usize, usize)>>, RitzError> = blocks
        .par_iter()
        .enumerate()
        .map(|(block_idx, orders)| {
            let evs = solve_block(d, l_max, gaunt, orders, options)?;
            Ok(evs
                .into_iter()
                .enumerate()
                .map(|(k, e)| (e, block_idx, k))
                .collect())
        })
        .collect();
    let mut merged: Vec<(T, usize, usize)> = solved?.into_iter().flatten().collect();
    merged.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    // the smallest eigenvalue is the exact zero mode of the constant
    let eigenvalues: Vec<T> = merged.into_iter().skip(1).map(|(e, _, _)| e).collect();
    let n_retained = eigenvalues.len() / 3;
    Ok(SpectrumApprox {
        l_max,
        eigenvalues,
        n_retained,
    })
}

/// Basis indices of one m-block, ascending (l, m); the block containing
/// m = 0 carries the constant as well.
fn block_indices(orders: &[i32], l_max: u32) -> Vec<(u32, i32)> {
    let mut idx = Vec::new();
    for l in 0..=l_max {
        for &m in orders {
            if m.unsigned_abs() <= l {
                idx.push((l, m));
            }
        }
    }
    idx.sort_unstable();
    idx
}

fn solve_block<T: Real + RealField>(
    d: &Density<T>,
    l_max: u32,
    gaunt: &GauntTable<T>,
    orders: &[i32],
    options: &SolveOptions,
) -> Result<Vec<T>, RitzError> {
    let indices = block_indices(orders, l_max);
    let n = indices.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let scale = Complex::new(
        <T as num_traits::FromPrimitive>::from_f64(options.overlap_scale).unwrap(),
        T::zero(),
    );
    let mut b = DMatrix::from_element(n, n, Complex::new(T::zero(), T::zero()));
    for (i, &(l, m)) in indices.iter().enumerate() {
        for (j, &(lp, mp)) in indices.iter().enumerate().skip(i) {
            let mut v = sigma_prime_entry(d, gaunt, l, m, lp, mp);
            if i == j {
                v = Complex::new(v.re + T::one(), T::zero());
            }
            b[(i, j)] = v * scale;
            b[(j, i)] = (v * scale).conj();
        }
    }
    let chol = b
        .clone()
        .cholesky()
        .ok_or(RitzError::NotPositiveDefinite { l_max })?;
    // standard form: C = L^{-1} A L^{-†}, spectrum of the pencil unchanged
    let mut a = DMatrix::from_element(n, n, Complex::new(T::zero(), T::zero()));
    for (i, &(l, _)) in indices.iter().enumerate() {
        a[(i, i)] = Complex::new(lambda::<T>(l), T::zero());
    }
    let l_factor = chol.l();
    let y = l_factor
        .solve_lower_triangular(&a)
        .expect("Cholesky factor is invertible");
    let c = l_factor
        .solve_lower_triangular(&y.adjoint())
        .expect("Cholesky factor is invertible");
    // symmetrize rounding noise before the Hermitian eigensolver
    let c = (&c + c.adjoint()) * Complex::new(<T as num_traits::FromPrimitive>::from_f64(0.5).unwrap(), T::zero());
    let eig = c.symmetric_eigen();
    let mut evs: Vec<T> = eig.eigenvalues.iter().copied().collect();
    evs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(evs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::DensitySpec;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn gaunt() -> GauntTable<f64> {
        GauntTable::new()
    }

    #[test]
    fn homogeneous_spectrum_is_exact() {
        let d = DensitySpec::<f64>::empty().validated().unwrap();
        let spec = solve_spectrum(&d, 3, &gaunt(), &SolveOptions::default()).unwrap();
        let expect: Vec<f64> = [2.0; 3]
            .iter()
            .chain([6.0; 5].iter())
            .chain([12.0; 7].iter())
            .copied()
            .collect();
        assert_eq!(spec.dim(), 15);
        for (got, want) in spec.eigenvalues().iter().zip(&expect) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-10);
        }
    }

    #[test]
    fn kappa_spectrum_basics() {
        let d = DensitySpec::kappa_y10(1.0f64).validated().unwrap();
        let g = gaunt();
        let spec = solve_spectrum(&d, 30, &g, &SolveOptions::default()).unwrap();
        assert_eq!(spec.dim(), 960);
        assert_eq!(spec.n_retained(), 320);
        let lowest = spec.eigenvalues()[0];
        assert!(lowest > 0.0 && lowest < 2.0, "lowest = {lowest}");
        // doubled cutoff: lowest eigenvalues already converged
        let fine = solve_spectrum(&d, 60, &g, &SolveOptions::default()).unwrap();
        for k in 0..100 {
            assert_relative_eq!(
                spec.eigenvalues()[k],
                fine.eigenvalues()[k],
                max_relative = 1e-6
            );
        }
    }

    #[test]
    fn near_boundary_density_still_definite() {
        let d = DensitySpec::kappa_y10(2.0f64).validated().unwrap();
        let spec = solve_spectrum(&d, 30, &gaunt(), &SolveOptions::default()).unwrap();
        assert!(spec.eigenvalues().iter().all(|&e| e > 0.0));
    }

    #[test]
    fn guard_and_cutoff_errors() {
        let d = DensitySpec::kappa_y10(1.0f64).validated().unwrap();
        assert!(matches!(
            solve_spectrum(&d, 200, &gaunt(), &SolveOptions::default()),
            Err(RitzError::CutoffGuard { .. })
        ));
        let wide = DensitySpec::new([(
            crate::harmonics::HarmonicIndex { l: 3, m: 0 },
            num_complex::Complex::new(0.1f64, 0.0),
        )])
        .unwrap()
        .validated()
        .unwrap();
        assert!(matches!(
            solve_spectrum(&wide, 3, &gaunt(), &SolveOptions::default()),
            Err(RitzError::CutoffTooSmall { .. })
        ));
    }

    #[test]
    fn variational_bound_under_basis_growth() {
        let d = DensitySpec::kappa_y10(1.5f64).validated().unwrap();
        let g = gaunt();
        let coarse = solve_spectrum(&d, 20, &g, &SolveOptions::default()).unwrap();
        let fine = solve_spectrum(&d, 40, &g, &SolveOptions::default()).unwrap();
        for k in 0..50 {
            // slack covers eigensolver rounding on eigenvalues up to ~400
            let slack = 1e-10 * (1.0 + fine.eigenvalues()[k]);
            assert!(
                coarse.eigenvalues()[k] >= fine.eigenvalues()[k] - slack,
                "index {k}: {} < {}",
                coarse.eigenvalues()[k],
                fine.eigenvalues()[k]
            );
        }
    }

    #[test]
    fn pencil_scaling() {
        let d = DensitySpec::kappa_y10(1.0f64).validated().unwrap();
        let g = gaunt();
        let base = solve_spectrum(&d, 10, &g, &SolveOptions::default()).unwrap();
        for lam in [0.5f64, 2.0] {
            let opts = SolveOptions {
                overlap_scale: lam,
                ..Default::default()
            };
            let scaled = solve_spectrum(&d, 10, &g, &opts).unwrap();
            for (a, b) in base.eigenvalues().iter().zip(scaled.eigenvalues()) {
                assert_relative_eq!(a / lam, *b, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn weyl_counting_homogeneous() {
        // cumulative count at E = l(l+1) is l(l+2): |N(E) - E| <= C sqrt(E)
        let d = DensitySpec::<f64>::empty().validated().unwrap();
        let spec = solve_spectrum(&d, 20, &gaunt(), &SolveOptions::default()).unwrap();
        let evs = spec.eigenvalues();
        for l in 1..=20u32 {
            let e = (l * (l + 1)) as f64;
            let count = evs.iter().take_while(|&&x| x <= e + 1e-9).count() as f64;
            assert!(
                (count - e).abs() <= 2.0 * e.sqrt() + 1.0,
                "l={l}: N(E)={count}, E={e}"
            );
        }
    }
}
