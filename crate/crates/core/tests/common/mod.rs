//! Shared helpers for the integration suites: seeded random densities and
//! rotations implemented by projection.

use drumsum::harmonics::{Density, DensitySpec, HarmonicIndex};
use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random real density with the given band limit, reality-symmetrized and
/// validated; amplitude is kept small enough that positivity always holds.
pub fn random_density(seed: u64, band_limit: u32) -> Density<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::new();
    let amp = 0.35 / (band_limit as f64 * (band_limit as f64 + 2.0));
    for l in 1..=band_limit {
        for m in 0..=l as i32 {
            let re = rng.gen_range(-amp..amp);
            let im = if m == 0 { 0.0 } else { rng.gen_range(-amp..amp) };
            entries.push((HarmonicIndex { l, m }, Complex::new(re, im)));
        }
    }
    DensitySpec::new(entries)
        .unwrap()
        .symmetrized()
        .validated()
        .expect("amplitude keeps the density positive")
}

/// 3x3 rotation matrix from z-y-z Euler angles.
pub fn rotation_matrix(alpha: f64, beta: f64, gamma: f64) -> [[f64; 3]; 3] {
    let rz = |a: f64| {
        [
            [a.cos(), -a.sin(), 0.0],
            [a.sin(), a.cos(), 0.0],
            [0.0, 0.0, 1.0],
        ]
    };
    let ry = |a: f64| {
        [
            [a.cos(), 0.0, a.sin()],
            [0.0, 1.0, 0.0],
            [-a.sin(), 0.0, a.cos()],
        ]
    };
    mat_mul(rz(alpha), mat_mul(ry(beta), rz(gamma)))
}

fn mat_mul(a: [[f64; 3]; 3], b: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for (k, row) in b.iter().enumerate() {
                out[i][j] += a[i][k] * row[j];
            }
        }
    }
    out
}

/// The density actively rotated by `r`, reconstructed by projection onto the
/// same band limit (rotations preserve degree), then reality-symmetrized.
pub fn rotated_density(d: &Density<f64>, r: [[f64; 3]; 3]) -> Density<f64> {
    // evaluate Σ at R⁻¹Ω, with R⁻¹ = Rᵀ
    let band = d.band_limit();
    let spec = DensitySpec::project(
        |theta: f64, phi: f64| {
            let v = [
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            ];
            let mut w = [0.0; 3];
            for i in 0..3 {
                for (j, vj) in v.iter().enumerate() {
                    w[i] += r[j][i] * vj;
                }
            }
            let t = w[2].clamp(-1.0, 1.0).acos();
            let p = w[1].atan2(w[0]);
            d.eval(t, p)
        },
        band,
    );
    spec.symmetrized().validated().expect("rotation preserves positivity")
}
