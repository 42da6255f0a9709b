//! Gauss–Legendre rules on [-1, 1], nodes by Newton iteration on P_n.

use crate::scalar::{real, Real};
use crate::special::legendre_next;

#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Rule with `n` nodes; exact for polynomials of degree <= 2n - 1.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        for i in 0..n.div_ceil(2) {
            // Tricomi-style initial guess, then Newton on P_n
            let mut x = real::<T>((std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos());
            for _ in 0..100 {
                let (p, dp) = Self::value_and_derivative(n, x);
                let dx = p / dp;
                x = x - dx;
                if dx.abs() <= T::epsilon() * real(2.0) {
                    break;
                }
            }
            let (_, dp) = Self::value_and_derivative(n, x);
            let w = real::<T>(2.0) / ((T::one() - x * x) * dp * dp);
            nodes[i] = -x.abs();
            nodes[n - 1 - i] = x.abs();
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = T::zero();
        }
        Self { nodes, weights }
    }

    fn value_and_derivative(n: usize, x: T) -> (T, T) {
        let mut pm1 = T::one();
        let mut p = x;
        for k in 1..n as u32 {
            let next = legendre_next(k, x, p, pm1);
            pm1 = p;
            p = next;
        }
        let nf = real::<T>(n as f64);
        let dp = nf * (x * p - pm1) / (x * x - T::one());
        (p, dp)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// ∫_a^b f(x) dx.
    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        let half = real::<T>(0.5);
        let mid = half * (a + b);
        let scale = half * (b - a);
        let mut sum = T::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            sum = sum + w * f(mid + scale * x);
        }
        scale * sum
    }
}
