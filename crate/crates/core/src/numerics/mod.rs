//! Numerical building blocks: polynomials, bracketed roots, the symmetric
//! tridiagonal eigensolver, quadrature rules and complex log-gamma.

pub mod gamma;
pub mod poly;
pub mod quadrature;
pub mod roots;
pub mod tridiag;

pub use gamma::{arg_gamma_half, ln_gamma};
pub use poly::Poly;
pub use quadrature::{gauss_chebyshev, GaussLegendre};
pub use roots::{bracketed_root, clustered_open_grid, polish_root, sign_change_brackets};
pub use tridiag::{inverse_iteration, residual_norm, tridiagonal_eigenvalues};
