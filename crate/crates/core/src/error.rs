use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole at s = {0}")]
    Pole(String),

    /// |ζ(s)| fell below the near-zero threshold, i.e. a disk condition is violated.
    #[error("zeta is numerically zero at s = {s} (|zeta| = {magnitude:e})")]
    NearZero { s: String, magnitude: f64 },

    #[error("integral diverges: {0}")]
    Divergence(String),

    #[error("contour of radius {radius} about {center} reaches the pole at 1/2 (distance {distance})")]
    ContourCrossesPole { center: String, radius: f64, distance: f64 },

    #[error("sieve limit {available} is below the required {required}")]
    InsufficientSieve { available: u64, required: u64 },

    #[error("prime cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Disk(#[from] DiskError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Ways a candidate disk D(s0; h) can fail validation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiskError {
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),

    #[error("disk does not contain 1/2 (|s0 - 1/2| = {distance} >= h = {h})")]
    MissingHalf { distance: f64, h: f64 },

    #[error("disk reaches Re <= 1/3 (Re(s0) - h = {min_re})")]
    ReachesOneThird { min_re: f64 },

    #[error("center must satisfy Re(s0) > 1, got {0}")]
    CenterNotRightOfOne(f64),

    #[error("disk extends to |Im| = {max_im} >= 7; zero-freeness of zeta(s) and zeta(2s) is not certified")]
    ZeroFreenessUncertified { max_im: f64 },
}
