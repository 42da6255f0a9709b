//! Renormalized sum rules of order 2 and 3 and the perturbation
//! coefficients of the lowest eigenvalue they absorb.
//!
//! For a shifted operator the lowest eigenvalue grows linearly with the
//! shift; removing its divergent inverse powers from the full trace leaves
//! finite combinations of the integral families. At total mass 4π the
//! assembled results are
//!
//! ```text
//! Z̃₂ = J1^(0,0) - I2^(0,0)/2π + (I1^(0)/4π)²
//! Z̃₃ = J2^(0,0,0) - 3 I3^(0,0,0)/4π + 3 I1^(0) I2^(0,0)/16π² - (I1^(0)/4π)³
//! ```
//!
//! and the eigenvalue coefficients E₀(γ) = Σ e_k γ^k reduce to
//!
//! ```text
//! e1 = 1
//! e2 = -I1^(0)/4π
//! e3 = [I1^(1) - I2^(0,0)]/4π + (I1^(0))²/8π²
//! e4 = [-I1^(2) + 2 I2^(1,0) - I3^(0,0,0)]/4π - I1^(1) I1^(0)/16π²
//!      + 5 I1^(0) I2^(0,0)/16π² - 5 (I1^(0))³/64π³
//! ```

use serde::{Deserialize, Serialize};

use crate::error::SpectralError;
use crate::harmonics::Density;
use crate::scalar::{real, Real};
use crate::spectral::Engine;

/// Perturbation coefficients of the lowest eigenvalue under a constant
/// shift, at total mass 4π (so e1 = 1 exactly).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct E0Coefficients<T> {
    pub e1: T,
    pub e2: T,
    pub e3: T,
    pub e4: T,
}

/// The integral components entering orders 2 and 3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Components<T> {
    #[serde(rename = "I1_0")]
    pub i1_0: T,
    #[serde(rename = "I2_00")]
    pub i2_00: T,
    #[serde(rename = "I3_000")]
    pub i3_000: T,
    #[serde(rename = "J1_00")]
    pub j1_00: T,
    #[serde(rename = "J2_000")]
    pub j2_000: T,
}

/// Exact sum-rule value with everything that went into it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumRuleReport<T> {
    pub order: u32,
    pub value: T,
    pub components: Components<T>,
    pub e0: E0Coefficients<T>,
    pub cutoff: u32,
    pub error_estimate: T,
}

fn four_pi<T: Real>() -> T {
    real::<T>(4.0) * T::PI()
}

/// e1..e4 for a validated density.
pub fn e0_coefficients<T: Real>(
    engine: &Engine<T>,
    d: &Density<T>,
) -> Result<E0Coefficients<T>, SpectralError> {
    let i1_0 = engine.integral_i1(d, 0);
    let i1_1 = engine.integral_i1(d, 1);
    let i1_2 = engine.integral_i1(d, 2);
    let i2_00 = engine.integral_i2(d, 0, 0)?.value;
    let i2_10 = engine.integral_i2(d, 1, 0)?.value;
    let i3_000 = engine.integral_i3(d, 0, 0, 0)?.value;
    Ok(assemble_e0(i1_0, i1_1, i1_2, i2_00, i2_10, i3_000))
}

fn assemble_e0<T: Real>(i1_0: T, i1_1: T, i1_2: T, i2_00: T, i2_10: T, i3_000: T) -> E0Coefficients<T> {
    let fp = four_pi::<T>();
    let fp2 = fp * fp;
    let fp3 = fp2 * fp;
    let two = real::<T>(2.0);
    let five = real::<T>(5.0);
    E0Coefficients {
        e1: T::one(),
        e2: -i1_0 / fp,
        e3: (i1_1 - i2_00) / fp + i1_0 * i1_0 / (fp2 * real(0.5)),
        e4: (-i1_2 + two * i2_10 - i3_000) / fp - i1_1 * i1_0 / fp2
            + five * i1_0 * i2_00 / fp2
            - five * i1_0 * i1_0 * i1_0 / fp3,
    }
}

/// Value of order `p` from its components; the report invariant is that the
/// stored value reproduces this exactly.
pub fn assemble_value<T: Real>(order: u32, c: &Components<T>) -> Result<T, SpectralError> {
    let fp = four_pi::<T>();
    let ratio = c.i1_0 / fp;
    match order {
        2 => Ok(c.j1_00 - c.i2_00 / (real::<T>(2.0) * T::PI()) + ratio * ratio),
        3 => Ok(c.j2_000 - real::<T>(3.0) * c.i3_000 / fp
            + real::<T>(3.0) * c.i1_0 * c.i2_00 / (fp * fp)
            - ratio * ratio * ratio),
        other => Err(SpectralError::UnsupportedOrder(other)),
    }
}

/// Exact renormalized sum rule of order 2 or 3.
pub fn exact_sum_rule<T: Real>(
    engine: &Engine<T>,
    d: &Density<T>,
    order: u32,
) -> Result<SumRuleReport<T>, SpectralError> {
    if order != 2 && order != 3 {
        return Err(SpectralError::UnsupportedOrder(order));
    }
    let i1_0 = engine.integral_i1(d, 0);
    let i2_00 = engine.integral_i2(d, 0, 0)?;
    let i3_000 = engine.integral_i3(d, 0, 0, 0)?;
    let j1_00 = engine.integral_j1(d, 0, 0)?;
    let j2_000 = engine.integral_j2(d, 0, 0, 0)?;
    let components = Components {
        i1_0,
        i2_00: i2_00.value,
        i3_000: i3_000.value,
        j1_00: j1_00.value,
        j2_000: j2_000.value,
    };
    let e0 = e0_coefficients(engine, d)?;
    let value = assemble_value(order, &components)?;
    let (cutoff, error_estimate) = match order {
        2 => (
            i2_00.cutoff.max(j1_00.cutoff),
            i2_00.error_estimate + j1_00.error_estimate,
        ),
        _ => (
            i3_000.cutoff.max(j2_000.cutoff),
            i3_000.error_estimate + j2_000.error_estimate,
        ),
    };
    Ok(SumRuleReport {
        order,
        value,
        components,
        e0,
        cutoff,
        error_estimate,
    })
}

/// Scaling law for non-unit mean density: eigenvalues of the pencil scale
/// as 1/λ, so Z̃_p(λΣ) = λ^p Z̃_p(Σ).
pub fn scaled_value<T: Real>(value: T, order: u32, lambda: T) -> T {
    value * lambda.powi(order as i32)
}
