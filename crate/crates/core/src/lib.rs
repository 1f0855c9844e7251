//! Numerical checks for the Mellin-transform identities that tie the
//! Chebyshev functions to the Riemann zeta function, and for the asymptotic
//!
//! ```text
//! E^(n)(s0) ~ (-1)^(n+1) n! (s0 - 1/2)^(-n-1)      (n -> infinity)
//! ```
//!
//! where `E(s) = ∫₁^∞ (ϑ(t) - ⌊t⌋) t^(-s-1) dt`.
//!
//! The crate is organised bottom-up:
//!
//! | module | contents |
//! |--------|----------|
//! | [`primes`] | segmented sieve, prime-table cache, von Mangoldt jumps, small Möbius values |
//! | [`chebyshev`] | exact step functions for ϑ, ψ and δ = ψ − ϑ; pointwise η |
//! | [`zeta`] | Euler–Maclaurin ζ, ζ′, ζ′/ζ and the combination (−1/s)(ζ′/ζ + ζ) |
//! | [`mellin`] | exact truncated Mellin moments of step functions with tail estimates |
//! | [`closedform`] | Δ(s), E(s) from the zeta side; Taylor coefficients by contour sampling |
//! | [`theorem`] | disk validation, target terms, λₙ and convergence reports |
//! | [`numeric`] | compensated and double-double accumulation helpers |

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chebyshev;
pub mod closedform;
pub mod mellin;
pub mod numeric;
pub mod primes;
pub mod theorem;
pub mod zeta;

mod error;

pub use error::{DiskError, Error, Result};

/// Complex scalar used for every value of s, ζ, E, Δ and H.
pub type ComplexScalar = num_complex::Complex64;

/// Shorthand constructor for a [`ComplexScalar`].
#[inline]
pub fn c64(re: f64, im: f64) -> ComplexScalar {
    ComplexScalar::new(re, im)
}

/// Accumulation tier for contour sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Precision {
    #[default]
    Double,
    DoubleDouble,
}

impl std::fmt::Display for Precision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Precision::Double => f.write_str("double"),
            Precision::DoubleDouble => f.write_str("double-double"),
        }
    }
}
