//! Special functions and quadrature used by the throughput expressions.
//!
//! Everything here is generic over [`Scalar`](crate::Scalar) and pure.

// tabulated constants are kept at published precision
#![allow(clippy::excessive_precision)]

mod chebyshev;
mod gamma;
mod normal;
mod quad;
mod tricomi;

pub use chebyshev::{chebyshev_nodes, ChebyshevNodes};
pub use gamma::{
    gamma, gamma_lower, gamma_p, gamma_q, gamma_upper, ln_binomial, ln_factorial, ln_gamma, ln_gamma_lower, ln_gamma_p,
    ln_gamma_q, ln_gamma_upper,
};
pub use normal::{erfc, gauss_pdf, gauss_q, gauss_q_inv};
pub use quad::{integrate, integrate_to_infinity, Integral, QuadOptions};
pub use tricomi::{ln_tricomi_integral, tricomi_u, tricomi_u_with};
