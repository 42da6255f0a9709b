//! Low-level numeric support: Legendre polynomials, Gauss rules, factorial
//! tables and zeta-type tail sums.

mod factorial;
mod legendre;
mod zeta;

pub use factorial::{BigFactorials, LnFactorials};
pub use legendre::{legendre_next, legendre_pl};
pub use zeta::{tail_inv_pow, zeta_int};
