//! Product quadrature on the unit sphere: Gauss–Legendre in cos θ crossed
//! with a uniform (trapezoid) rule in φ.

use num_complex::Complex;

use crate::scalar::{real, KahanSum, Real};

use super::gauss::GaussLegendre;

/// Integrates spherical polynomials of degree up to
/// `min(2 n_theta - 1, n_phi - 1)` exactly.
#[derive(Debug, Clone)]
pub struct SphereGrid<T> {
    cos_nodes: Vec<T>,
    cos_weights: Vec<T>,
    phi_nodes: Vec<T>,
    phi_weight: T,
    phi_offset: T,
}

impl<T: Real> SphereGrid<T> {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        Self::with_phi_offset(n_theta, n_phi, T::zero())
    }

    /// Same rule with all φ nodes shifted; offset grids give node pairs that
    /// never coincide, which the singular-kernel oracles rely on.
    pub fn with_phi_offset(n_theta: usize, n_phi: usize, offset: T) -> Self {
        let rule = GaussLegendre::new(n_theta);
        let step = real::<T>(2.0) * T::PI() / real(n_phi as f64);
        let phi_nodes = (0..n_phi)
            .map(|k| real::<T>(k as f64) * step + offset)
            .collect();
        Self {
            cos_nodes: rule.nodes().to_vec(),
            cos_weights: rule.weights().to_vec(),
            phi_nodes,
            phi_weight: step,
            phi_offset: offset,
        }
    }

    pub fn len(&self) -> usize {
        self.cos_nodes.len() * self.phi_nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn phi_offset(&self) -> T {
        self.phi_offset
    }

    /// Iterates (θ, φ, weight).
    pub fn points(&self) -> impl Iterator<Item = (T, T, T)> + '_ {
        self.cos_nodes.iter().zip(&self.cos_weights).flat_map(move |(&u, &wu)| {
            let theta = u.acos();
            self.phi_nodes
                .iter()
                .map(move |&phi| (theta, phi, wu * self.phi_weight))
        })
    }

    /// Σ w_i f(θ_i, φ_i) for a real field.
    pub fn integrate<F: Fn(T, T) -> T>(&self, f: F) -> T {
        let mut acc = KahanSum::new();
        for (theta, phi, w) in self.points() {
            acc.add(w * f(theta, phi));
        }
        acc.value()
    }

    /// Σ w_i f(θ_i, φ_i) for a complex field.
    pub fn integrate_complex<F: Fn(T, T) -> Complex<T>>(&self, f: F) -> Complex<T> {
        let mut re = KahanSum::new();
        let mut im = KahanSum::new();
        for (theta, phi, w) in self.points() {
            let v = f(theta, phi);
            re.add(w * v.re);
            im.add(w * v.im);
        }
        Complex::new(re.value(), im.value())
    }
}
