//! Coefficient-space evaluation of the density contractions against the
//! regularized Green's functions.
//!
//! With `D_q = diag(1/(l(l+1))^{q+1})`, `v` the vector of density
//! coefficients and `S = I + S'` the density matrix, the five integral
//! families are
//!
//! ```text
//! I1^(q)     = v† D_q v                    (exact finite sum)
//! I2^(q,p)   = v† D_q S D_p v              (exact once the band is covered)
//! I3^(q,p,r) = v† D_q S D_p S D_r v
//! J1^(q,p)   = tr(D_q S D_p S)
//! J2^(q,p,r) = tr(D_q S D_p S D_r S)
//! ```
//!
//! The J traces are split into the analytic homogeneous part (`Z_p`), trace
//! terms linear in S' (identically zero: Σ_m |Y_lm|² is constant on the
//! sphere, so the per-degree diagonal sums of S' vanish), quadratic terms
//! evaluated through the degree-summed kernels, and for J2 a cubic banded
//! trace summed at increasing cutoffs until it converges.

use num_complex::Complex;

use crate::error::SpectralError;
use crate::harmonics::{Density, GauntTable};
use crate::scalar::{real, KahanSum, Real};

use super::kernel::pair_trace_kernel;
use super::sigma::{
    basis_indices, flat_index, lambda, sigma_prime_entry, BandRows,
};
use super::zhom::homogeneous_z;

/// Cutoff and tolerance policy for the trace evaluations.
#[derive(Debug, Clone)]
pub struct EngineConfig<T> {
    /// Doubling stops when the last change is below this.
    pub tolerance: T,
    /// Starting cutoff; defaults to max(64, 8 · band_limit).
    pub initial_cutoff: Option<u32>,
    /// Hard cap on the doubling ladder (and on dense assembly).
    pub max_cutoff: u32,
    /// Internal summation length for the degree-summed kernels.
    pub kernel_cutoff: u32,
}

impl<T: Real> Default for EngineConfig<T> {
    fn default() -> Self {
        Self {
            tolerance: real(1e-8),
            initial_cutoff: None,
            max_cutoff: 512,
            kernel_cutoff: 2048,
        }
    }
}

/// A converged trace value with its cutoff and error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Converged<T> {
    pub value: T,
    pub cutoff: u32,
    pub error_estimate: T,
}

/// Coefficient-space integral engine; owns the Gaunt memo.
pub struct Engine<T> {
    gaunt: GauntTable<T>,
    config: EngineConfig<T>,
}

impl<T: Real> Default for Engine<T> {
    fn default() -> Self {
        Self::new(EngineConfig::default())
    }
}

impl<T: Real> Engine<T> {
    pub fn new(config: EngineConfig<T>) -> Self {
        Self {
            gaunt: GauntTable::new(),
            config,
        }
    }

    pub fn gaunt(&self) -> &GauntTable<T> {
        &self.gaunt
    }

    pub fn config(&self) -> &EngineConfig<T> {
        &self.config
    }

    fn start_cutoff(&self, d: &Density<T>) -> u32 {
        self.config
            .initial_cutoff
            .unwrap_or_else(|| (8 * d.band_limit()).max(64))
            .min(self.config.max_cutoff)
    }

    /// I1^(q): exact sum over the density support, no truncation error.
    pub fn integral_i1(&self, d: &Density<T>, q: u32) -> T {
        let mut acc = KahanSum::new();
        for (idx, c) in d.coefficients() {
            acc.add(c.norm_sqr() * lambda::<T>(idx.l).powi(-(q as i32 + 1)));
        }
        acc.value()
    }

    /// I2^(q,p) by the matrix path, under the doubling protocol.
    pub fn integral_i2(&self, d: &Density<T>, q: u32, p: u32) -> Result<Converged<T>, SpectralError> {
        self.doubling(d, |l| self.trace_i2_at(d, q, p, l))
    }

    /// I3^(q,p,r) by the matrix path, under the doubling protocol.
    pub fn integral_i3(
        &self,
        d: &Density<T>,
        q: u32,
        p: u32,
        r: u32,
    ) -> Result<Converged<T>, SpectralError> {
        self.doubling(d, |l| self.trace_i3_at(d, q, p, r, l))
    }

    /// J1^(q,p): homogeneous part in closed form plus the kernel-summed
    /// quadratic trace. The kernel tail makes this exact to ~1e-13.
    pub fn integral_j1(&self, d: &Density<T>, q: u32, p: u32) -> Result<Converged<T>, SpectralError> {
        let z = homogeneous_z::<T>(q + p + 2)?;
        let at = |cutoff: u32| -> T {
            let mut acc = KahanSum::new();
            acc.add(z);
            for (l1, rho) in d.power_spectrum() {
                acc.add(rho * pair_trace_kernel::<T>(q, p, l1, cutoff));
            }
            acc.value()
        };
        let coarse = at(self.config.kernel_cutoff / 2);
        let value = at(self.config.kernel_cutoff);
        Ok(Converged {
            value,
            cutoff: self.config.kernel_cutoff,
            error_estimate: (value - coarse).abs(),
        })
    }

    /// J2^(q,p,r): homogeneous part, kernel-summed quadratic traces and the
    /// banded cubic trace under the doubling protocol.
    pub fn integral_j2(
        &self,
        d: &Density<T>,
        q: u32,
        p: u32,
        r: u32,
    ) -> Result<Converged<T>, SpectralError> {
        let z = homogeneous_z::<T>(q + p + r + 3)?;
        let mut fixed = KahanSum::new();
        fixed.add(z);
        let mut kernel_estimate = T::zero();
        for (a, b) in [(q + r + 1, p), (q, p + r + 1), (q + p + 1, r)] {
            let mut pair = KahanSum::new();
            let mut pair_coarse = KahanSum::new();
            for (l1, rho) in d.power_spectrum() {
                pair.add(rho * pair_trace_kernel::<T>(a, b, l1, self.config.kernel_cutoff));
                pair_coarse
                    .add(rho * pair_trace_kernel::<T>(a, b, l1, self.config.kernel_cutoff / 2));
            }
            fixed.add(pair.value());
            kernel_estimate = kernel_estimate + (pair.value() - pair_coarse.value()).abs();
        }
        if d.is_homogeneous() {
            return Ok(Converged {
                value: fixed.value(),
                cutoff: self.config.kernel_cutoff,
                error_estimate: kernel_estimate,
            });
        }
        let sextic = self.doubling(d, |l| {
            let rows = BandRows::build(d, &self.gaunt, l);
            cubic_banded_trace(&rows, q, p, r, l)
        })?;
        Ok(Converged {
            value: fixed.value() + sextic.value,
            cutoff: sextic.cutoff,
            error_estimate: kernel_estimate + sextic.error_estimate,
        })
    }

    fn doubling<F: Fn(u32) -> T>(&self, d: &Density<T>, f: F) -> Result<Converged<T>, SpectralError> {
        let mut cutoff = self.start_cutoff(d).max(d.band_limit() + 1);
        let mut value = f(cutoff);
        loop {
            let next_cutoff = (cutoff * 2).min(self.config.max_cutoff);
            if next_cutoff == cutoff {
                // cannot double further; accept only if the last step stalled
                return Err(SpectralError::NonConverged {
                    last_change: f64::NAN,
                    tolerance: self.config.tolerance.to_f64().unwrap_or(f64::NAN),
                    cutoff,
                });
            }
            let next = f(next_cutoff);
            let change = (next - value).abs();
            if change <= self.config.tolerance {
                return Ok(Converged {
                    value: next,
                    cutoff: next_cutoff,
                    error_estimate: change,
                });
            }
            if next_cutoff == self.config.max_cutoff {
                return Err(SpectralError::NonConverged {
                    last_change: change.to_f64().unwrap_or(f64::NAN),
                    tolerance: self.config.tolerance.to_f64().unwrap_or(f64::NAN),
                    cutoff: next_cutoff,
                });
            }
            cutoff = next_cutoff;
            value = next;
        }
    }

    /// v† D_q S D_p v truncated at basis cutoff `l_max`.
    pub fn trace_i2_at(&self, d: &Density<T>, q: u32, p: u32, l_max: u32) -> T {
        let mut acc_re = KahanSum::new();
        for (idx, c) in d.coefficients() {
            if idx.l > l_max {
                continue;
            }
            acc_re.add(c.norm_sqr() * lambda::<T>(idx.l).powi(-(q as i32 + p as i32 + 2)));
        }
        let mut cubic = Complex::new(T::zero(), T::zero());
        for (a, ca) in d.coefficients() {
            if a.l > l_max {
                continue;
            }
            for (b, cb) in d.coefficients() {
                if b.l > l_max {
                    continue;
                }
                let s = sigma_prime_entry(d, &self.gaunt, a.l, a.m, b.l, b.m);
                if s.re == T::zero() && s.im == T::zero() {
                    continue;
                }
                cubic += ca.conj()
                    * s
                    * cb
                    * lambda::<T>(a.l).powi(-(q as i32 + 1))
                    * lambda::<T>(b.l).powi(-(p as i32 + 1));
            }
        }
        acc_re.add(cubic.re);
        acc_re.value()
    }

    /// v† D_q S D_p S D_r v truncated at basis cutoff `l_max`.
    pub fn trace_i3_at(&self, d: &Density<T>, q: u32, p: u32, r: u32, l_max: u32) -> T {
        let mut acc = KahanSum::new();
        for (idx, c) in d.coefficients() {
            if idx.l > l_max {
                continue;
            }
            acc.add(c.norm_sqr() * lambda::<T>(idx.l).powi(-(q as i32 + p as i32 + r as i32 + 3)));
        }
        // terms with one S': the inner propagator collapses on either side
        let mut lin = Complex::new(T::zero(), T::zero());
        for (a, ca) in d.coefficients() {
            if a.l > l_max {
                continue;
            }
            for (b, cb) in d.coefficients() {
                if b.l > l_max {
                    continue;
                }
                let s = sigma_prime_entry(d, &self.gaunt, a.l, a.m, b.l, b.m);
                if s.re == T::zero() && s.im == T::zero() {
                    continue;
                }
                let la = lambda::<T>(a.l);
                let lb = lambda::<T>(b.l);
                let both = la.powi(-(q as i32 + 1)) * lb.powi(-(p as i32 + r as i32 + 2))
                    + la.powi(-(q as i32 + p as i32 + 2)) * lb.powi(-(r as i32 + 1));
                lin += ca.conj() * s * cb * both;
            }
        }
        acc.add(lin.re);
        // quartic: v† D_q S' D_p S' D_r v with the intermediate degree free
        let mut quart = Complex::new(T::zero(), T::zero());
        for (a, ca) in d.coefficients() {
            if a.l > l_max {
                continue;
            }
            for (b, cb) in d.coefficients() {
                if b.l > l_max {
                    continue;
                }
                let la = lambda::<T>(a.l).powi(-(q as i32 + 1));
                let lb = lambda::<T>(b.l).powi(-(r as i32 + 1));
                // intermediate (l', m') runs over the basis within both bands;
                // orders are enumerated once each, not once per coefficient
                let band = d.band_limit();
                let lo = a.l.saturating_sub(band).max(b.l.saturating_sub(band)).max(1);
                let hi = (a.l + band).min(b.l + band).min(l_max);
                for lp in lo..=hi {
                    for dm in d.coupling_orders() {
                        let mp = a.m - dm;
                        if mp.unsigned_abs() > lp {
                            continue;
                        }
                        let s1 = sigma_prime_entry(d, &self.gaunt, a.l, a.m, lp, mp);
                        if s1.re == T::zero() && s1.im == T::zero() {
                            continue;
                        }
                        let s2 = sigma_prime_entry(d, &self.gaunt, lp, mp, b.l, b.m);
                        if s2.re == T::zero() && s2.im == T::zero() {
                            continue;
                        }
                        quart += ca.conj()
                            * s1
                            * s2
                            * cb
                            * la
                            * lambda::<T>(lp).powi(-(p as i32 + 1))
                            * lb;
                    }
                }
            }
        }
        acc.add(quart.re);
        acc.value()
    }

    /// tr(D_q S D_p S) truncated at `l_max`, fully banded.
    pub fn trace_j1_at(&self, d: &Density<T>, q: u32, p: u32, l_max: u32) -> T {
        let rows = BandRows::build(d, &self.gaunt, l_max);
        let mut acc = KahanSum::new();
        acc.add(truncated_z::<T>(q + p + 2, l_max));
        acc.add(real::<T>(2.0) * linear_banded_trace(&rows, q + p + 1, l_max));
        acc.add(pair_banded_trace(&rows, q, p, l_max));
        acc.value()
    }

    /// tr(D_q S D_p S D_r S) truncated at `l_max`, fully banded.
    pub fn trace_j2_at(&self, d: &Density<T>, q: u32, p: u32, r: u32, l_max: u32) -> T {
        let rows = BandRows::build(d, &self.gaunt, l_max);
        let mut acc = KahanSum::new();
        acc.add(truncated_z::<T>(q + p + r + 3, l_max));
        acc.add(real::<T>(3.0) * linear_banded_trace(&rows, q + p + r + 2, l_max));
        for (a, b) in [(q + r + 1, p), (q, p + r + 1), (q + p + 1, r)] {
            acc.add(pair_banded_trace(&rows, a, b, l_max));
        }
        acc.add(cubic_banded_trace(&rows, q, p, r, l_max));
        acc.value()
    }
}

/// Σ_{l<=L} (2l+1)/(l(l+1))^p.
pub fn truncated_z<T: Real>(p: u32, l_max: u32) -> T {
    let mut acc = KahanSum::new();
    for l in (1..=l_max).rev() {
        acc.add(real::<T>((2 * l + 1) as f64) * lambda::<T>(l).powi(-(p as i32)));
    }
    acc.value()
}

fn degree_of(flat: usize) -> u32 {
    // flat indices l²-1 .. l²+2l-1 belong to degree l
    let l = ((flat + 1) as f64).sqrt() as u32;
    if (l as usize + 1) * (l as usize + 1) <= flat + 1 {
        l + 1
    } else {
        l
    }
}

/// tr(D_a S') over the truncated basis. Identically zero degree by degree
/// after the order sum; evaluated explicitly for matched-cutoff comparisons.
fn linear_banded_trace<T: Real>(rows: &BandRows<T>, a: u32, l_max: u32) -> T {
    let mut acc = KahanSum::new();
    for (l, m) in basis_indices(l_max) {
        let i = flat_index(l, m);
        let s = rows.entry(i, i);
        acc.add(s.re * lambda::<T>(l).powi(-(a as i32 + 1)));
    }
    acc.value()
}

/// tr(D_a S' D_b S') over the truncated basis.
fn pair_banded_trace<T: Real>(rows: &BandRows<T>, a: u32, b: u32, l_max: u32) -> T {
    let mut acc = KahanSum::new();
    for (l, m) in basis_indices(l_max) {
        let i = flat_index(l, m);
        let di = lambda::<T>(l).powi(-(a as i32 + 1));
        for &(j, s) in rows.row(i) {
            let lj = degree_of(j as usize);
            acc.add(di * lambda::<T>(lj).powi(-(b as i32 + 1)) * s.norm_sqr());
        }
    }
    acc.value()
}

/// tr(D_q S' D_p S' D_r S') over the truncated basis.
fn cubic_banded_trace<T: Real>(rows: &BandRows<T>, q: u32, p: u32, r: u32, l_max: u32) -> T {
    let mut acc_re = KahanSum::new();
    for (l, m) in basis_indices(l_max) {
        let i = flat_index(l, m);
        let di = lambda::<T>(l).powi(-(q as i32 + 1));
        for &(j, sij) in rows.row(i) {
            let dj = lambda::<T>(degree_of(j as usize)).powi(-(p as i32 + 1));
            for &(k, sjk) in rows.row(j as usize) {
                let ski = rows.entry(k as usize, i);
                if ski.re == T::zero() && ski.im == T::zero() {
                    continue;
                }
                let dk = lambda::<T>(degree_of(k as usize)).powi(-(r as i32 + 1));
                acc_re.add((sij * sjk * ski).re * di * dj * dk);
            }
        }
    }
    acc_re.value()
}
