//! Numerical toolkit for Dirichlet characters, Dirichlet L-functions, and
//! Eisenstein series on Γ₀(q) with nebentypus, together with the truncated
//! strip integrals and sieve estimates needed to track effective lower
//! bounds for L(1,χ).
//!
//! The crate is organised bottom-up:
//!
//! - [`arith`]: exact integer helpers (factorisation, totient, Möbius, CRT).
//! - [`characters`]: Dirichlet characters with exact root-of-unity values,
//!   Gauss sums, CRT decomposition, and twisted divisor sums.
//! - [`quadrature`]: Gauss–Legendre panels and adaptive integration.
//! - [`special`]: K-Bessel (real and purely imaginary order), E₁, Whittaker
//!   closed forms, the oscillatory t-integral, reciprocal gamma, digamma.
//! - [`lfunctions`]: Hurwitz-zeta based analytic continuation of L(s,χ),
//!   the completed Λ(s,χ), functional-equation checks, L′/L(1,χ).
//! - [`eisenstein`]: Fourier and direct (Bruhat) evaluators for E_∞(z,s,χ),
//!   scattering entry φ_{∞1}, truncation, automorphy and cusp geometry.
//! - [`ms`]: strip integrals by Parseval, Maaß–Selberg right-hand sides and
//!   the sandwich inequalities.
//! - [`sieve`]: prime tables, restricted divisor-sum bounds, the
//!   Brun–Titchmarsh check and parameter optimisation for complex characters.
//! - [`bounds`]: the end-to-end modulus scan and report emitters.
//! - [`verify`]: the aggregated verification suite used by tests and the CLI.

pub mod arith;
pub mod bounds;
pub mod characters;
pub mod eisenstein;
pub mod error;
pub mod lfunctions;
pub mod ms;
pub mod quadrature;
pub mod sieve;
pub mod special;
pub mod verify;

pub use error::{Error, Result};

/// Schema version stamped into JSON reports.
pub const SPEC_VERSION: &str = "1.0";
