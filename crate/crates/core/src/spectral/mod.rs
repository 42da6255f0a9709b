//! Coefficient-space engine: density matrix elements, propagator weights,
//! the integral families by two independent algorithms, and the homogeneous
//! sums Z_p.

mod integrals;
mod kernel;
pub mod nested;
mod sigma;
mod zhom;

pub use integrals::{truncated_z, Converged, Engine, EngineConfig};
pub use kernel::pair_trace_kernel;
pub use sigma::{
    assemble_sigma_matrix, basis_dim, basis_indices, flat_index, lambda, m_blocks,
    sigma_prime_entry, BandRows, BorderVector, PropagatorWeights, SigmaMatrix,
};
pub use zhom::homogeneous_z;
