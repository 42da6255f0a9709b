//! Density matrix elements on the l >= 1 spherical-harmonic basis.
//!
//! `S = I + S'` where `S'[(lm),(l'm')] = Σ' c_{l1 m1} W(l,m,l',m',l1,m1)`
//! is the matrix of multiplication by `Σ - 1`. The Gaunt triangle rule makes
//! `S'` a band matrix: entries vanish for `|l - l'|` beyond the band limit.

use num_complex::Complex;

use nalgebra::DMatrix;

use crate::error::SpectralError;
use crate::harmonics::{Density, GauntTable};
use crate::scalar::Real;

/// Flat index of (l, m) in the l = 1..=L basis: degrees are contiguous,
/// orders ascending. `dim(L) = L (L + 2)`.
#[inline]
pub fn flat_index(l: u32, m: i32) -> usize {
    debug_assert!(l >= 1 && m.unsigned_abs() <= l);
    (l as usize * l as usize - 1) + (m + l as i32) as usize
}

#[inline]
pub fn basis_dim(l_max: u32) -> usize {
    l_max as usize * (l_max as usize + 2)
}

/// Eigenvalue of -Δ at degree l.
#[inline]
pub fn lambda<T: Real>(l: u32) -> T {
    let lf = l as f64;
    T::from_f64(lf * (lf + 1.0)).unwrap()
}

/// Enumerates (l, m) pairs of the basis in flat-index order.
pub fn basis_indices(l_max: u32) -> impl Iterator<Item = (u32, i32)> {
    (1..=l_max).flat_map(|l| (-(l as i32)..=l as i32).map(move |m| (l, m)))
}

/// One matrix element of S' (no identity part).
pub fn sigma_prime_entry<T: Real>(
    d: &Density<T>,
    gaunt: &GauntTable<T>,
    l: u32,
    m: i32,
    lp: u32,
    mp: i32,
) -> Complex<T> {
    let mut v = Complex::new(T::zero(), T::zero());
    for (idx, c) in d.coefficients() {
        if idx.m != m - mp {
            continue;
        }
        let w = gaunt
            .eval(l, m, lp, mp, idx.l, idx.m)
            .expect("indices validated by construction");
        if w != T::zero() {
            v += c * w;
        }
    }
    v
}

/// Diagonal propagator weights 1/(l(l+1))^{q+1} for l = 1..=cutoff.
#[derive(Debug, Clone)]
pub struct PropagatorWeights<T> {
    pub order: u32,
    pub cutoff: u32,
    values: Vec<T>,
}

impl<T: Real> PropagatorWeights<T> {
    pub fn new(order: u32, cutoff: u32) -> Self {
        let values = (1..=cutoff)
            .map(|l| lambda::<T>(l).powi(-(order as i32 + 1)))
            .collect();
        Self {
            order,
            cutoff,
            values,
        }
    }

    pub fn value(&self, l: u32) -> T {
        self.values[(l - 1) as usize]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }
}

/// First-moment contractions of the density against the basis: for l >= 1,
/// the component is just the density coefficient.
#[derive(Debug, Clone)]
pub struct BorderVector<T> {
    pub cutoff: u32,
    components: Vec<(u32, i32, Complex<T>)>,
}

impl<T: Real> BorderVector<T> {
    pub fn new(d: &Density<T>, cutoff: u32) -> Self {
        let components = d
            .coefficients()
            .filter(|(idx, _)| idx.l <= cutoff)
            .map(|(idx, c)| (idx.l, idx.m, c))
            .collect();
        Self { cutoff, components }
    }

    pub fn components(&self) -> &[(u32, i32, Complex<T>)] {
        &self.components
    }
}

/// Dense Hermitian S at a basis cutoff; Hermiticity is exact by mirroring.
#[derive(Debug, Clone)]
pub struct SigmaMatrix<T: Real> {
    pub cutoff: u32,
    pub decomposable: bool,
    matrix: DMatrix<Complex<T>>,
}

impl<T: Real + nalgebra::RealField> SigmaMatrix<T> {
    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Materializes S at cutoff `l_max`. Guarded against absurd allocations.
pub fn assemble_sigma_matrix<T: Real + nalgebra::RealField>(
    d: &Density<T>,
    gaunt: &GauntTable<T>,
    l_max: u32,
    guard: u32,
) -> Result<SigmaMatrix<T>, SpectralError> {
    if l_max > guard {
        return Err(SpectralError::CutoffGuard {
            requested: l_max,
            cap: guard,
        });
    }
    if l_max < d.band_limit().max(1) {
        return Err(SpectralError::CutoffTooSmall {
            l: l_max,
            min: d.band_limit().max(1),
        });
    }
    let n = basis_dim(l_max);
    let mut m = DMatrix::from_element(n, n, Complex::new(T::zero(), T::zero()));
    let band = d.band_limit();
    for (l, mm) in basis_indices(l_max) {
        let i = flat_index(l, mm);
        for lp in l.saturating_sub(band).max(1)..=(l + band).min(l_max) {
            for (idx, _) in d.coefficients() {
                let mp = mm - idx.m;
                if mp.unsigned_abs() > lp {
                    continue;
                }
                let j = flat_index(lp, mp);
                if j < i {
                    continue;
                }
                let v = sigma_prime_entry(d, gaunt, l, mm, lp, mp);
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
            }
        }
    }
    for i in 0..n {
        m[(i, i)] = Complex::new(m[(i, i)].re + T::one(), T::zero());
    }
    Ok(SigmaMatrix {
        cutoff: l_max,
        decomposable: d.coupling_orders().iter().all(|&mm| mm == 0),
        matrix: m,
    })
}

/// Partition of the orders -l_max..=l_max into blocks closed under the
/// couplings m -> m + m_density. Axisymmetric densities give singletons;
/// a density coupling all orders gives one block.
pub fn m_blocks(coupling_orders: &[i32], l_max: u32) -> Vec<Vec<i32>> {
    let lmax = l_max as i32;
    let size = (2 * lmax + 1) as usize;
    let mut parent: Vec<usize> = (0..size).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        let mut root = i;
        while parent[root] != root {
            root = parent[root];
        }
        let mut i = i;
        while parent[i] != root {
            let next = parent[i];
            parent[i] = root;
            i = next;
        }
        root
    }
    for m in -lmax..=lmax {
        for &dm in coupling_orders {
            let target = m + dm;
            if target.abs() <= lmax {
                let a = find(&mut parent, (m + lmax) as usize);
                let b = find(&mut parent, (target + lmax) as usize);
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut blocks: std::collections::BTreeMap<usize, Vec<i32>> = Default::default();
    for m in -lmax..=lmax {
        let root = find(&mut parent, (m + lmax) as usize);
        blocks.entry(root).or_default().push(m);
    }
    blocks.into_values().collect()
}

/// All nonzero rows of S' at a cutoff, columns sorted; used by the trace
/// evaluators, which never materialize a dense matrix.
pub struct BandRows<T> {
    pub cutoff: u32,
    rows: Vec<Vec<(u32, Complex<T>)>>,
}

impl<T: Real> BandRows<T> {
    pub fn build(d: &Density<T>, gaunt: &GauntTable<T>, l_max: u32) -> Self {
        let n = basis_dim(l_max);
        let mut rows: Vec<Vec<(u32, Complex<T>)>> = vec![Vec::new(); n];
        let band = d.band_limit();
        let orders = d.coupling_orders();
        for (l, m) in basis_indices(l_max) {
            let i = flat_index(l, m);
            for lp in l.saturating_sub(band).max(1)..=(l + band).min(l_max) {
                for &dm in &orders {
                    let mp = m - dm;
                    if mp.unsigned_abs() > lp {
                        continue;
                    }
                    let j = flat_index(lp, mp);
                    if j < i {
                        continue;
                    }
                    let v = sigma_prime_entry(d, gaunt, l, m, lp, mp);
                    if v.re != T::zero() || v.im != T::zero() {
                        rows[i].push((j as u32, v));
                        if j != i {
                            rows[j].push((i as u32, v.conj()));
                        }
                    }
                }
            }
        }
        for row in &mut rows {
            row.sort_unstable_by_key(|(j, _)| *j);
        }
        Self { cutoff: l_max, rows }
    }

    pub fn row(&self, i: usize) -> &[(u32, Complex<T>)] {
        &self.rows[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        match self.rows[i].binary_search_by_key(&(j as u32), |(c, _)| *c) {
            Ok(pos) => self.rows[i][pos].1,
            Err(_) => Complex::new(T::zero(), T::zero()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::DensitySpec;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn flat_index_layout() {
        assert_eq!(flat_index(1, -1), 0);
        assert_eq!(flat_index(1, 0), 1);
        assert_eq!(flat_index(1, 1), 2);
        assert_eq!(flat_index(2, -2), 3);
        assert_eq!(basis_dim(3), 15);
        let listed: Vec<_> = basis_indices(3).collect();
        assert_eq!(listed.len(), 15);
        for (k, (l, m)) in listed.iter().enumerate() {
            assert_eq!(flat_index(*l, *m), k);
        }
    }

    #[test]
    fn homogeneous_matrix_is_identity() {
        let d = DensitySpec::<f64>::empty().validated().unwrap();
        let gaunt = GauntTable::new();
        let s = assemble_sigma_matrix(&d, &gaunt, 4, 512).unwrap();
        assert!(s.decomposable);
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(s.matrix()[(i, j)].re, expect);
                assert_abs_diff_eq!(s.matrix()[(i, j)].im, 0.0);
            }
        }
    }

    #[test]
    fn kappa_entries_match_gaunt() {
        let kappa = 0.8f64;
        let d = DensitySpec::kappa_y10(kappa).validated().unwrap();
        let gaunt = GauntTable::new();
        let s = assemble_sigma_matrix(&d, &gaunt, 3, 512).unwrap();
        let w = gaunt.eval(1, 0, 2, 0, 1, 0).unwrap();
        assert_abs_diff_eq!(w, 1.0 / (5.0 * PI).sqrt(), epsilon = 1e-14);
        let entry = s.matrix()[(flat_index(1, 0), flat_index(2, 0))];
        assert_abs_diff_eq!(entry.re, kappa * w, epsilon = 1e-14);
        // band structure: |l - l'| = 2 > band limit 1
        let far = s.matrix()[(flat_index(1, 0), flat_index(3, 0))];
        assert_eq!(far.re, 0.0);
        assert_eq!(far.im, 0.0);
    }

    #[test]
    fn guard_rejected() {
        let d = DensitySpec::kappa_y10(0.5f64).validated().unwrap();
        let gaunt = GauntTable::new();
        assert!(matches!(
            assemble_sigma_matrix(&d, &gaunt, 700, 512),
            Err(SpectralError::CutoffGuard { .. })
        ));
    }

    #[test]
    fn m_block_partitions() {
        // axisymmetric: singletons
        let blocks = m_blocks(&[0], 2);
        assert_eq!(blocks.len(), 5);
        // orders {0, +-2}: parity classes
        let blocks = m_blocks(&[-2, 0, 2], 3);
        assert_eq!(blocks.len(), 2);
        // order 1 coupling chains everything together
        let blocks = m_blocks(&[-1, 1], 3);
        assert_eq!(blocks.len(), 1);
    }

    #[test]
    fn band_rows_match_dense() {
        let d = DensitySpec::kappa_y10(1.3f64).validated().unwrap();
        let gaunt = GauntTable::new();
        let dense = assemble_sigma_matrix(&d, &gaunt, 5, 512).unwrap();
        let rows = BandRows::build(&d, &gaunt, 5);
        for i in 0..dense.dim() {
            for j in 0..dense.dim() {
                let expect = if i == j {
                    dense.matrix()[(i, j)] - Complex::new(1.0, 0.0)
                } else {
                    dense.matrix()[(i, j)]
                };
                let got = rows.entry(i, j);
                assert_abs_diff_eq!(got.re, expect.re, epsilon = 1e-15);
                assert_abs_diff_eq!(got.im, expect.im, epsilon = 1e-15);
            }
        }
    }
}
