//! Forward solver and fractional-order identification for the 1-D
//! time-fractional diffusion equation
//!
//! ```text
//! ∂_t^α u = D u_xx  on (0, l) × (0, T],   u(0, t) = u(l, t) = 0,   u(x, 0) = f(x)
//! ```
//!
//! with f a finite sine series. The solution is the spectral sum
//! `u(x, t) = Σ f_n E_α(-D λ_n t^α) sin(nπx/l)`, and the unknown Caputo order
//! α is recovered from a single value `d = u(x₀, t₁)` by solving the scalar
//! equation `F(α) = d`.

pub mod cli;
pub mod forward;
pub mod inverse;
pub mod special;
