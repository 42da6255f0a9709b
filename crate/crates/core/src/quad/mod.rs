//! Quadrature: Gauss–Legendre rules, an adaptive 1-D integrator and the
//! product grid used for integrals over the sphere.

mod adaptive;
mod gauss;
mod sphere;

pub use adaptive::integrate_adaptive;
pub use gauss::GaussLegendre;
pub use sphere::SphereGrid;
