//! ζ(s) and ζ′(s) by Euler–Maclaurin summation.
//!
//! ```text
//! ζ(s) = Σ_{n<N} n^(-s) + N^(1-s)/(s-1) + N^(-s)/2
//!        + Σ_{k=1..K} B_{2k}/(2k)! · s(s+1)…(s+2k-2) · N^(-s-2k+1)
//! ```
//!
//! ζ′ comes from differentiating every term of the same formula, so both are
//! produced in one pass. The public functions enforce the validated domain
//! Re(s) > 0.4, |Im(s)| ≤ 8; [`zeta_pair_unchecked`] is used by the closed-form
//! module for dilated arguments js with Re(js) ≥ 1, where it widens N with |s|.

use crate::{ComplexScalar, Error, Result};

pub const DEFAULT_TERMS: usize = 64;
pub const DEFAULT_ORDER: usize = 8;

/// Smallest real part accepted by the checked functions (exclusive).
pub const MIN_RE: f64 = 0.4;
/// Largest |Im(s)| accepted by the checked functions.
pub const MAX_IM: f64 = 8.0;
/// |ζ(s)| below this is treated as a zero.
pub const NEAR_ZERO: f64 = 1e-8;

/// B_{2k}/(2k)! for k = 1..=12.
const BERNOULLI_OVER_FACTORIAL: [f64; 12] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
    -174611.0 / 330.0 / 2432902008176640000.0,
    854513.0 / 138.0 / 1.1240007277776077e21,
    -236364091.0 / 2730.0 / 6.204484017332394e23,
];

/// ζ(s) and ζ′(s) with N = `terms`, K = `order`. No domain checks.
fn euler_maclaurin(s: ComplexScalar, terms: usize, order: usize) -> (ComplexScalar, ComplexScalar) {
    let one = ComplexScalar::new(1.0, 0.0);
    let mut z = ComplexScalar::new(0.0, 0.0);
    let mut dz = ComplexScalar::new(0.0, 0.0);
    // sum the partial series from the small end up; the largest terms come first
    for n in (1..terms).rev() {
        let ln_n = (n as f64).ln();
        let t = (-s * ln_n).exp();
        z += t;
        dz -= t * ln_n;
    }
    let big_n = terms as f64;
    let ln_big = big_n.ln();
    let n_pow = (-s * ln_big).exp(); // N^-s
    let sm1 = s - one;

    // N^(1-s)/(s-1)
    let tail = n_pow * big_n / sm1;
    z += tail;
    dz += -tail * ln_big - tail / sm1;

    // N^-s / 2
    z += n_pow * 0.5;
    dz -= n_pow * 0.5 * ln_big;

    // Bernoulli corrections; poly = s(s+1)…(s+2k-2), dpoly its derivative
    let mut poly = s;
    let mut dpoly = one;
    let mut power = n_pow / big_n; // N^(-s-1)
    let inv_n2 = 1.0 / (big_n * big_n);
    for (k, &coef) in BERNOULLI_OVER_FACTORIAL.iter().enumerate().take(order) {
        let term = poly * power * coef;
        z += term;
        dz += (dpoly - poly * ln_big) * power * coef;
        // advance to k+1: multiply by (s + 2k + 1)(s + 2k + 2)
        for j in [2 * k + 1, 2 * k + 2] {
            let f = s + j as f64;
            dpoly = dpoly * f + poly;
            poly *= f;
        }
        power *= inv_n2;
    }
    (z, dz)
}

fn check_domain(s: ComplexScalar, terms: usize, order: usize) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {s}")));
    }
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::Pole("1".into()));
    }
    if s.re <= MIN_RE || s.im.abs() > MAX_IM {
        return Err(Error::Domain(format!(
            "s = {s} outside Re(s) > {MIN_RE}, |Im(s)| <= {MAX_IM}"
        )));
    }
    if terms < 10 {
        return Err(Error::InvalidArgument(format!("terms must be >= 10, got {terms}")));
    }
    if !(2..=12).contains(&order) {
        return Err(Error::InvalidArgument(format!(
            "bernoulli_order must lie in [2, 12], got {order}"
        )));
    }
    Ok(())
}

fn finite(v: ComplexScalar, what: &str, s: ComplexScalar) -> Result<ComplexScalar> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain(format!("{what} is not finite at s = {s}")))
    }
}

/// ζ(s) on the validated domain.
pub fn zeta_value(s: ComplexScalar, terms: usize, bernoulli_order: usize) -> Result<ComplexScalar> {
    check_domain(s, terms, bernoulli_order)?;
    finite(euler_maclaurin(s, terms, bernoulli_order).0, "zeta", s)
}

/// ζ(s) with the default 64 terms and order 8.
pub fn zeta(s: ComplexScalar) -> Result<ComplexScalar> {
    zeta_value(s, DEFAULT_TERMS, DEFAULT_ORDER)
}

/// ζ′(s) by term-wise differentiation of the Euler–Maclaurin formula.
pub fn zeta_derivative(s: ComplexScalar) -> Result<ComplexScalar> {
    check_domain(s, DEFAULT_TERMS, DEFAULT_ORDER)?;
    finite(euler_maclaurin(s, DEFAULT_TERMS, DEFAULT_ORDER).1, "zeta'", s)
}

/// (ζ(s), ζ′(s)) on the validated domain.
pub fn zeta_pair(s: ComplexScalar) -> Result<(ComplexScalar, ComplexScalar)> {
    check_domain(s, DEFAULT_TERMS, DEFAULT_ORDER)?;
    let (z, dz) = euler_maclaurin(s, DEFAULT_TERMS, DEFAULT_ORDER);
    Ok((finite(z, "zeta", s)?, finite(dz, "zeta'", s)?))
}

/// (ζ(s), ζ′(s)) for any s with Re(s) > 0, s ≠ 1, without the |Im| ceiling.
///
/// N grows with |s| so the Bernoulli remainder stays below rounding.
pub(crate) fn zeta_pair_unchecked(s: ComplexScalar) -> (ComplexScalar, ComplexScalar) {
    let terms = DEFAULT_TERMS.max((2.0 * s.norm()).ceil() as usize);
    euler_maclaurin(s, terms, DEFAULT_ORDER)
}

/// ζ′(s)/ζ(s).
pub fn log_deriv(s: ComplexScalar) -> Result<ComplexScalar> {
    let (z, dz) = zeta_pair(s)?;
    quotient(s, z, dz)
}

fn quotient(s: ComplexScalar, z: ComplexScalar, dz: ComplexScalar) -> Result<ComplexScalar> {
    let magnitude = z.norm();
    if magnitude < NEAR_ZERO {
        return Err(Error::NearZero {
            s: s.to_string(),
            magnitude,
        });
    }
    finite(dz / z, "zeta'/zeta", s)
}

/// Inside this distance of 1 the poles of ζ′/ζ and ζ cancel too badly to
/// add them directly.
const NEAR_ONE: f64 = 0.25;
const CAUCHY_RADIUS: f64 = 0.5;
const CAUCHY_NODES: usize = 64;

fn regular_part(s: ComplexScalar) -> Result<ComplexScalar> {
    let (z, dz) = zeta_pair(s)?;
    Ok(quotient(s, z, dz)? + z)
}

/// ζ′/ζ + ζ near s = 1 from the Cauchy integral over |w − 1| = 1/2; the
/// trapezoid rule error is about (|s − 1| / 0.5)^64.
fn regular_part_near_one(s: ComplexScalar) -> Result<ComplexScalar> {
    let mut acc = crate::numeric::ComplexCompensated::new();
    for k in 0..CAUCHY_NODES {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / CAUCHY_NODES as f64;
        let u = ComplexScalar::from_polar(CAUCHY_RADIUS, theta);
        let w = u + 1.0;
        acc.add(regular_part(w)? * u / (w - s));
    }
    Ok(acc.value() / CAUCHY_NODES as f64)
}

/// (−1/s)(ζ′(s)/ζ(s) + ζ(s)), regular at s = 1.
pub fn lemma1_lhs(s: ComplexScalar) -> Result<ComplexScalar> {
    let g = if (s - 1.0).norm() < NEAR_ONE {
        regular_part_near_one(s)?
    } else {
        regular_part(s)?
    };
    finite(-g / s, "lemma1_lhs", s)
}
