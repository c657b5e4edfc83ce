//! Numerical kernel: Gauss-Legendre quadrature, log-gamma and beta functions,
//! the Kolmogorov survival function, and a Nelder-Mead simplex minimizer.

mod quadrature;
mod simplex;
mod special;

pub use quadrature::{integrate, QuadratureRule, DEFAULT_ORDER, DEFAULT_PANELS};
pub use simplex::{nelder_mead, MinimizeResult, SimplexConfig};
pub use special::{beta, kolmogorov_q, log_gamma};
