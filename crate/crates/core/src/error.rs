//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DomainError {
    #[error("harmonic index out of range: l={l}, m={m} (need |m| <= l)")]
    InvalidHarmonicIndex { l: i64, m: i64 },
    #[error("argument {value} outside domain [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DensityError {
    #[error("could not parse density file: {0}")]
    Parse(String),
    #[error("duplicate coefficient entry at l={l}, m={m}")]
    Duplicate { l: u32, m: i32 },
    #[error("density coefficients must have l >= 1 (got l={l}, m={m}); the mean is fixed to 1")]
    MonopoleForbidden { l: u32, m: i32 },
    #[error("invalid harmonic index in density: l={l}, m={m}")]
    InvalidIndex { l: u32, m: i32 },
    #[error("non-finite coefficient at l={l}, m={m}")]
    NonFinite { l: u32, m: i32 },
    #[error(
        "reality violated at (l={l}, m={m}): need c(l,-m) = (-1)^m conj(c(l,m)) exactly"
    )]
    RealityViolation { l: u32, m: i32 },
    #[error(
        "density not positive: min sigma = {min_sigma} at theta={theta}, phi={phi} (margin {margin})"
    )]
    PositivityViolation {
        min_sigma: f64,
        theta: f64,
        phi: f64,
        margin: f64,
    },
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GreensError {
    #[error("argument {0} outside [-1, 1]")]
    OutOfDomain(f64),
    #[error("green function of order {q} is singular at x = {x}")]
    SingularPoint { q: u32, x: f64 },
    #[error("closed form only available for orders 0, 1, 2 (got {0})")]
    UnsupportedOrder(u32),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SpectralError {
    #[error("cutoff {requested} exceeds the guard {cap}; raise max_cutoff explicitly")]
    CutoffGuard { requested: u32, cap: u32 },
    #[error("cutoff {l} too small: need at least {min}")]
    CutoffTooSmall { l: u32, min: u32 },
    #[error(
        "trace evaluation did not converge: last doubling changed the value by {last_change} \
         (tolerance {tolerance}) at cutoff {cutoff}"
    )]
    NonConverged {
        last_change: f64,
        tolerance: f64,
        cutoff: u32,
    },
    #[error("sum rules implemented for orders 2 and 3 only (got {0})")]
    UnsupportedOrder(u32),
    #[error("homogeneous sum Z_p diverges for p < 2 (got {0})")]
    DivergentOrder(u32),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RitzError {
    #[error("basis cutoff {l_max} exceeds the guard {cap}; pass allow_large to override")]
    CutoffGuard { l_max: u32, cap: u32 },
    #[error("basis cutoff {l_max} too small for band limit {band_limit}: need l_max >= band_limit + 1")]
    CutoffTooSmall { l_max: u32, band_limit: u32 },
    #[error("overlap matrix not positive definite at cutoff {l_max}")]
    NotPositiveDefinite { l_max: u32 },
    #[error("retained count {n} exceeds basis dimension {dim}")]
    RetainedTooLarge { n: usize, dim: usize },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuadError {
    #[error("adaptive quadrature stalled: refinement depth exhausted with error {estimate}")]
    NonConverged { estimate: f64 },
}
