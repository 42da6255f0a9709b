//! Spherical harmonics and the band-limited density model.
//!
//! Harmonics are orthonormal complex `Y_lm` with the Condon–Shortley phase.
//! A density is `Σ(θ,φ) = 1 + Σ'_{lm} c_lm Y_lm` with the l = 0 term fixed
//! (total mass 4π), a coefficient-level reality constraint
//! `c_{l,-m} = (-1)^m conj(c_{lm})`, and strict positivity on the sphere.

mod gaunt;
mod wigner;

pub use gaunt::{gaunt, global_gaunt, wigner3j, GauntTable};
pub use wigner::{three_j_squared_m0, Exact3j, Wigner3j};

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{DensityError, DomainError};
use crate::quad::SphereGrid;
use crate::scalar::{real, Real};

/// Degree/order pair with |m| <= l.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HarmonicIndex {
    pub l: u32,
    pub m: i32,
}

impl HarmonicIndex {
    pub fn new(l: u32, m: i32) -> Result<Self, DomainError> {
        if m.unsigned_abs() > l {
            return Err(DomainError::InvalidHarmonicIndex {
                l: l as i64,
                m: m as i64,
            });
        }
        Ok(Self { l, m })
    }

    pub fn conjugate_partner(self) -> Self {
        Self {
            l: self.l,
            m: -self.m,
        }
    }
}

/// Orthonormal complex Y_lm(θ, φ) with Condon–Shortley phase; ∫|Y_lm|² dΩ = 1.
pub fn ylm_eval<T: Real>(idx: HarmonicIndex, theta: T, phi: T) -> Complex<T> {
    let m_abs = idx.m.unsigned_abs();
    let p = normalized_assoc_legendre(idx.l, m_abs, theta.cos(), theta.sin());
    let mphi = real::<T>(m_abs as f64) * phi;
    let y = Complex::new(p * mphi.cos(), p * mphi.sin());
    if idx.m >= 0 {
        y
    } else {
        let sign = if m_abs % 2 == 0 { T::one() } else { -T::one() };
        Complex::new(sign * y.re, -sign * y.im)
    }
}

/// Fully normalized associated Legendre P̄_l^m (m >= 0) such that
/// Y_lm = P̄_l^m e^{imφ}; stable upward recurrence in l.
fn normalized_assoc_legendre<T: Real>(l: u32, m: u32, cos_t: T, sin_t: T) -> T {
    debug_assert!(m <= l);
    let four_pi = real::<T>(4.0) * T::PI();
    // seed P̄_m^m = (-1)^m sqrt((2m+1)/4π · (2m-1)!!/(2m)!!) sin^m θ
    let mut pmm = (real::<T>(2.0 * m as f64 + 1.0) / four_pi).sqrt();
    for k in 1..=m {
        let ratio = real::<T>((2 * k - 1) as f64) / real::<T>((2 * k) as f64);
        pmm = pmm * ratio.sqrt() * sin_t;
    }
    if m % 2 == 1 {
        pmm = -pmm;
    }
    if l == m {
        return pmm;
    }
    let mut prev = pmm;
    let mut curr = cos_t * real::<T>(2.0 * m as f64 + 3.0).sqrt() * pmm;
    if l == m + 1 {
        return curr;
    }
    for k in (m + 2)..=l {
        let kf = k as f64;
        let mf = m as f64;
        let a = ((4.0 * kf * kf - 1.0) / (kf * kf - mf * mf)).sqrt();
        let b = (((kf - 1.0) * (kf - 1.0) - mf * mf) / (4.0 * (kf - 1.0) * (kf - 1.0) - 1.0))
            .sqrt();
        let next = real::<T>(a) * (cos_t * curr - real::<T>(b) * prev);
        prev = curr;
        curr = next;
    }
    curr
}

/// Options controlling [`DensitySpec::validate`].
#[derive(Debug, Clone)]
pub struct ValidationOptions<T> {
    /// Sampled minimum of Σ must exceed this.
    pub positivity_margin: T,
    /// Grid resolution per direction is `grid_factor * band_limit`, at least
    /// `min_resolution`.
    pub grid_factor: u32,
    pub min_resolution: u32,
}

impl<T: Real> Default for ValidationOptions<T> {
    fn default() -> Self {
        Self {
            positivity_margin: real(1e-9),
            grid_factor: 4,
            min_resolution: 16,
        }
    }
}

/// Outcome of a successful validation.
#[derive(Debug, Clone)]
pub struct ValidationReport<T> {
    pub min_sigma: T,
    pub argmin: (T, T),
    pub max_imag_residue: T,
    pub band_limit: u32,
}

/// Raw band-limited density: structural invariants only (no l = 0, indices
/// in range, finite values). Positivity and reality are checked by
/// [`DensitySpec::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensitySpec<T> {
    coefficients: BTreeMap<HarmonicIndex, Complex<T>>,
    band_limit: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityFileEntry {
    pub l: u32,
    pub m: i32,
    pub re: f64,
    pub im: f64,
}

/// On-disk JSON form: `{"coefficients":[{"l":..,"m":..,"re":..,"im":..},...]}`.
///
/// Missing conjugate partners are filled in from the reality rule only when
/// `autocomplete_conjugates` is present and true.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityFile {
    pub coefficients: Vec<DensityFileEntry>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub autocomplete_conjugates: bool,
}

impl<T: Real> DensitySpec<T> {
    pub fn empty() -> Self {
        Self {
            coefficients: BTreeMap::new(),
            band_limit: 0,
        }
    }

    pub fn new<I>(entries: I) -> Result<Self, DensityError>
    where
        I: IntoIterator<Item = (HarmonicIndex, Complex<T>)>,
    {
        let mut coefficients = BTreeMap::new();
        let mut band_limit = 0;
        for (idx, c) in entries {
            if idx.l == 0 {
                return Err(DensityError::MonopoleForbidden { l: idx.l, m: idx.m });
            }
            if idx.m.unsigned_abs() > idx.l {
                return Err(DensityError::InvalidIndex { l: idx.l, m: idx.m });
            }
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(DensityError::NonFinite { l: idx.l, m: idx.m });
            }
            if c.re != T::zero() || c.im != T::zero() {
                band_limit = band_limit.max(idx.l);
                coefficients.insert(idx, c);
            }
        }
        Ok(Self {
            coefficients,
            band_limit,
        })
    }

    /// The axisymmetric family Σ = 1 + κ Y₁₀.
    pub fn kappa_y10(kappa: T) -> Self {
        Self::new([(HarmonicIndex { l: 1, m: 0 }, Complex::new(kappa, T::zero()))])
            .expect("valid index")
    }

    pub fn from_json_str(json: &str) -> Result<Self, DensityError> {
        let file: DensityFile =
            serde_json::from_str(json).map_err(|e| DensityError::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &DensityFile) -> Result<Self, DensityError> {
        let mut entries: BTreeMap<HarmonicIndex, Complex<T>> = BTreeMap::new();
        for e in &file.coefficients {
            if e.l == 0 {
                return Err(DensityError::MonopoleForbidden { l: e.l, m: e.m });
            }
            if e.m.unsigned_abs() > e.l {
                return Err(DensityError::InvalidIndex { l: e.l, m: e.m });
            }
            let idx = HarmonicIndex { l: e.l, m: e.m };
            let c = Complex::new(real::<T>(e.re), real::<T>(e.im));
            if entries.insert(idx, c).is_some() {
                return Err(DensityError::Duplicate { l: e.l, m: e.m });
            }
        }
        if file.autocomplete_conjugates {
            let present: Vec<HarmonicIndex> = entries.keys().copied().collect();
            for idx in present {
                let partner = idx.conjugate_partner();
                if !entries.contains_key(&partner) {
                    let c = entries[&idx];
                    entries.insert(partner, reality_partner(idx, c));
                }
            }
        }
        Self::new(entries)
    }

    pub fn to_file(&self) -> DensityFile
    where
        T: Real,
    {
        DensityFile {
            coefficients: self
                .coefficients
                .iter()
                .map(|(idx, c)| DensityFileEntry {
                    l: idx.l,
                    m: idx.m,
                    re: c.re.to_f64().unwrap(),
                    im: c.im.to_f64().unwrap(),
                })
                .collect(),
            autocomplete_conjugates: false,
        }
    }

    pub fn band_limit(&self) -> u32 {
        self.band_limit
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (HarmonicIndex, Complex<T>)> + '_ {
        self.coefficients.iter().map(|(i, c)| (*i, *c))
    }

    pub fn coefficient(&self, idx: HarmonicIndex) -> Complex<T> {
        self.coefficients
            .get(&idx)
            .copied()
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Per-degree power Σ_m |c_lm|², a rotation invariant.
    pub fn power_spectrum(&self) -> Vec<(u32, T)> {
        let mut acc: BTreeMap<u32, T> = BTreeMap::new();
        for (idx, c) in &self.coefficients {
            *acc.entry(idx.l).or_insert_with(T::zero) += c.norm_sqr();
        }
        acc.into_iter().collect()
    }

    /// All coefficients multiplied by a real factor.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            coefficients: self
                .coefficients
                .iter()
                .map(|(i, c)| (*i, c * factor))
                .collect(),
            band_limit: if factor == T::zero() { 0 } else { self.band_limit },
        }
    }

    /// Set of orders m carried by the coefficients (used for block detection).
    pub fn coupling_orders(&self) -> Vec<i32> {
        let mut ms: Vec<i32> = self.coefficients.keys().map(|i| i.m).collect();
        ms.sort_unstable();
        ms.dedup();
        ms
    }

    /// 1 + Σ c_lm Y_lm as a complex number; the imaginary part is a residue
    /// that validation bounds.
    pub fn eval_complex(&self, theta: T, phi: T) -> Complex<T> {
        let mut v = Complex::new(T::one(), T::zero());
        for (idx, c) in &self.coefficients {
            v += c * ylm_eval(*idx, theta, phi);
        }
        v
    }

    /// Real density value Σ(θ, φ).
    pub fn eval(&self, theta: T, phi: T) -> T {
        self.eval_complex(theta, phi).re
    }

    /// Exact reality symmetrization: entries with m > 0 (and real parts at
    /// m = 0) are kept, partners are rebuilt from the rule.
    pub fn symmetrized(&self) -> Self {
        let mut out: BTreeMap<HarmonicIndex, Complex<T>> = BTreeMap::new();
        for (idx, c) in &self.coefficients {
            if idx.m > 0 {
                out.insert(*idx, *c);
                out.insert(idx.conjugate_partner(), reality_partner(*idx, *c));
            } else if idx.m == 0 {
                out.insert(*idx, Complex::new(c.re, T::zero()));
            } else if !self.coefficients.contains_key(&idx.conjugate_partner()) {
                let partner = reality_partner(*idx, *c);
                out.insert(idx.conjugate_partner(), partner);
                out.insert(*idx, *c);
            }
        }
        Self::new(out).expect("symmetrization preserves structural invariants")
    }

    /// Projects a pointwise function onto harmonics of degree 1..=band_limit.
    ///
    /// The quadrature grid is exact for band-limited integrands, so feeding
    /// back [`DensitySpec::eval`] of a valid density recovers it. The mean
    /// (l = 0 content) is discarded; it must be 1 for the result to mean
    /// anything.
    pub fn project<F: Fn(T, T) -> T>(f: F, band_limit: u32) -> Self {
        let n_theta = (2 * band_limit + 2) as usize;
        let n_phi = (2 * band_limit + 2) as usize;
        let grid = SphereGrid::new(n_theta, n_phi);
        let mut entries = BTreeMap::new();
        for l in 1..=band_limit {
            for m in 0..=l as i32 {
                let idx = HarmonicIndex { l, m };
                let c = grid.integrate_complex(|theta, phi| {
                    ylm_eval::<T>(idx, theta, phi).conj() * f(theta, phi)
                });
                entries.insert(idx, c);
            }
        }
        DensitySpec {
            coefficients: entries,
            band_limit,
        }
        .symmetrized()
        .trimmed(real(1e-13))
    }

    fn trimmed(&self, cutoff: T) -> Self {
        let coefficients: BTreeMap<_, _> = self
            .coefficients
            .iter()
            .filter(|(_, c)| c.norm_sqr().sqrt() > cutoff)
            .map(|(i, c)| (*i, *c))
            .collect();
        let band_limit = coefficients.keys().map(|i| i.l).max().unwrap_or(0);
        Self {
            coefficients,
            band_limit,
        }
    }

    /// Checks reality exactly and positivity on a sampling grid; returns the
    /// validated density.
    pub fn validate(self, options: &ValidationOptions<T>) -> Result<Density<T>, DensityError> {
        // reality: exact coefficient-level identity
        for (idx, c) in &self.coefficients {
            if idx.m < 0 {
                continue;
            }
            if idx.m == 0 {
                if c.im != T::zero() {
                    return Err(DensityError::RealityViolation { l: idx.l, m: 0 });
                }
                continue;
            }
            let expected = reality_partner(*idx, *c);
            match self.coefficients.get(&idx.conjugate_partner()) {
                Some(actual) if actual.re == expected.re && actual.im == expected.im => {}
                _ => {
                    return Err(DensityError::RealityViolation { l: idx.l, m: idx.m });
                }
            }
        }
        for idx in self.coefficients.keys() {
            if idx.m < 0 && !self.coefficients.contains_key(&idx.conjugate_partner()) {
                return Err(DensityError::RealityViolation { l: idx.l, m: -idx.m });
            }
        }

        // positivity: dense sampling on Gauss-Legendre x uniform, poles added
        let n = (options.grid_factor * self.band_limit).max(options.min_resolution) as usize;
        let grid = SphereGrid::new(n, n);
        let mut min_sigma = T::infinity();
        let mut argmin = (T::zero(), T::zero());
        let mut max_imag = T::zero();
        let mut consider = |theta: T, phi: T, spec: &Self| {
            let v = spec.eval_complex(theta, phi);
            if v.re < min_sigma {
                min_sigma = v.re;
                argmin = (theta, phi);
            }
            max_imag = max_imag.max(v.im.abs());
        };
        for (theta, phi, _) in grid.points() {
            consider(theta, phi, &self);
        }
        consider(T::zero(), T::zero(), &self);
        consider(T::PI(), T::zero(), &self);
        if min_sigma <= options.positivity_margin {
            return Err(DensityError::PositivityViolation {
                min_sigma: min_sigma.to_f64().unwrap_or(f64::NAN),
                theta: argmin.0.to_f64().unwrap_or(f64::NAN),
                phi: argmin.1.to_f64().unwrap_or(f64::NAN),
                margin: options.positivity_margin.to_f64().unwrap_or(f64::NAN),
            });
        }
        let report = ValidationReport {
            min_sigma,
            argmin,
            max_imag_residue: max_imag,
            band_limit: self.band_limit,
        };
        Ok(Density { spec: self, report })
    }

    /// Validation with default options.
    pub fn validated(self) -> Result<Density<T>, DensityError> {
        self.validate(&ValidationOptions::default())
    }
}

fn reality_partner<T: Real>(idx: HarmonicIndex, c: Complex<T>) -> Complex<T> {
    let sign = if idx.m.rem_euclid(2) == 0 { T::one() } else { -T::one() };
    Complex::new(sign * c.re, -sign * c.im)
}

/// A density that passed validation; immutable afterwards.
#[derive(Debug, Clone)]
pub struct Density<T> {
    spec: DensitySpec<T>,
    report: ValidationReport<T>,
}

impl<T: Real> Density<T> {
    pub fn spec(&self) -> &DensitySpec<T> {
        &self.spec
    }

    pub fn report(&self) -> &ValidationReport<T> {
        &self.report
    }

    pub fn band_limit(&self) -> u32 {
        self.spec.band_limit
    }

    pub fn is_homogeneous(&self) -> bool {
        self.spec.is_homogeneous()
    }

    pub fn eval(&self, theta: T, phi: T) -> T {
        self.spec.eval(theta, phi)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (HarmonicIndex, Complex<T>)> + '_ {
        self.spec.coefficients()
    }

    pub fn coefficient(&self, idx: HarmonicIndex) -> Complex<T> {
        self.spec.coefficient(idx)
    }

    pub fn power_spectrum(&self) -> Vec<(u32, T)> {
        self.spec.power_spectrum()
    }

    pub fn coupling_orders(&self) -> Vec<i32> {
        self.spec.coupling_orders()
    }
}
