//! Spectral sum rules for a drum on the unit sphere with variable density.
//!
//! The eigenvalue problem is `-Δψ = E Σ ψ` on S², where `Σ > 0` is a
//! band-limited surface density with mean 1 (total mass 4π). The nonzero
//! eigenvalues admit exact "renormalized" sum rules
//!
//! ```text
//! Z̃_p = Σ_{n≥1} 1 / E_n^p,    p = 2, 3,
//! ```
//!
//! which this crate evaluates two independent ways:
//!
//! * **exactly**, in spherical-harmonic coefficient space, by contracting the
//!   density against regularized Green's functions of the sphere
//!   ([`spectral`], [`sumrules`]);
//! * **numerically**, from a Rayleigh–Ritz spectrum completed with a
//!   Weyl-law tail ([`ritz`]).
//!
//! Supporting layers: spherical harmonics, Wigner 3j and Gaunt coefficients
//! ([`harmonics`]), closed-form Green's functions and the polylogarithms
//! they need ([`greens`]), quadrature rules ([`quad`]) and brute-force
//! verification oracles ([`oracle`]).
//!
//! All numerics are generic over the scalar type through [`scalar::Real`];
//! the `*64` aliases below fix the default working precision.

pub mod error;
pub mod greens;
pub mod harmonics;
pub mod oracle;
pub mod quad;
pub mod ritz;
pub mod scalar;
pub mod special;
pub mod spectral;
pub mod sumrules;

pub use scalar::Real;

/// Band-limited density at working precision.
pub type DensitySpec64 = harmonics::DensitySpec<f64>;
/// Validated density at working precision.
pub type Density64 = harmonics::Density<f64>;
/// Gaunt coefficient table at working precision.
pub type GauntTable64 = harmonics::GauntTable<f64>;
/// Coefficient-space engine configuration at working precision.
pub type EngineConfig64 = spectral::EngineConfig<f64>;
/// Exact sum-rule report at working precision.
pub type SumRuleReport64 = sumrules::SumRuleReport<f64>;
/// Rayleigh–Ritz spectrum at working precision.
pub type SpectrumApprox64 = ritz::SpectrumApprox<f64>;
