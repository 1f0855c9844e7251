//! Δ(s) and E(s) from the zeta side, and their Taylor coefficients.
//!
//! With F(s) = −ζ′(s)/ζ(s) = Σ Λ(n) n^-s and P(s) = Σ_p log p · p^-s,
//!
//! ```text
//! F(s) = Σ_{k≥1} P(ks)      ⇒      P(s) = Σ_{j≥1} μ(j) F(js)
//! sΔ(s) = F(s) − P(s)
//! E(s)  = (−1/s)(ζ′/ζ + ζ) − Δ(s)
//! ```
//!
//! The Möbius series is taken over j ≤ 40. To make that cut negligible even
//! at Re(s) just above 1/2, the primes 2, 3, 5, 7 are handled in closed form
//! and the series runs over F_B(w) = F(w) − Σ_{p≤7} log p · p^-w / (1 − p^-w),
//! whose terms start at 11^-w. Then
//!
//! ```text
//! P(s)  = Σ_{p≤7} log p · p^-s + Σ_{j≥1} μ(j) F_B(js)
//! sΔ(s) = Σ_{p≤7} log p · p^-2s / (1 − p^-s) − Σ_{j≥2} μ(j) F_B(js)
//! ```
//!
//! Taylor coefficients at s0 come from M equally spaced samples on a circle
//! of radius r: a_n ≈ (1 / (M rⁿ)) Σ_j f(s0 + r ω^j) ω^(-jn), ω = e^(2πi/M).

use rayon::prelude::*;

use crate::numeric::{ComplexCompensated, ComplexDoubleDouble};
use crate::primes::mobius_small;
use crate::zeta::{self, zeta_pair_unchecked};
use crate::{ComplexScalar, Error, Precision, Result};

/// Last j kept in the Möbius series.
pub const MOBIUS_TERMS: u32 = 40;

const SMALL_PRIMES: [f64; 4] = [2.0, 3.0, 5.0, 7.0];
/// First prime not in [`SMALL_PRIMES`].
const FIRST_LARGE_PRIME: f64 = 11.0;

/// F_B(js) terms whose bound falls below this are skipped.
const SKIP_BELOW: f64 = 1e-20;

/// Scale of the per-coefficient rounding floor, in units of ε·max|f|/rⁿ.
pub const NOISE_FACTOR: f64 = 16.0;

/// Largest derivative order (n! must stay finite).
pub const MAX_ORDER: usize = 170;

/// Upper bound on |F_B(w)| = |Σ_{n≥11} Λ(n) n^-w| for Re(w) = sigma > 1.
pub fn large_prime_bound(sigma: f64) -> f64 {
    if sigma <= 1.0 {
        return f64::INFINITY;
    }
    let p = FIRST_LARGE_PRIME;
    let l = p.ln();
    let d = sigma - 1.0;
    // Λ(n) ≤ log n, and log t · t^-σ decreases on [11, ∞)
    l * p.powf(-sigma) + p.powf(-d) * (l / d + 1.0 / (d * d))
}

/// Bound on the Möbius terms dropped after j = 40 at Re(s) = sigma.
pub fn mobius_tail_bound(sigma: f64) -> f64 {
    let mut total = 0.0;
    for j in MOBIUS_TERMS + 1.. {
        let b = large_prime_bound(j as f64 * sigma);
        total += b;
        if b < 1e-40 || !b.is_finite() {
            break;
        }
    }
    total
}

/// Σ_{p≤7} log p · p^-w / (1 − p^-w): the part of F(w) carried by 2, 3, 5, 7.
fn small_prime_part(w: ComplexScalar) -> ComplexScalar {
    SMALL_PRIMES
        .iter()
        .map(|&p| {
            let l = p.ln();
            let q = (-w * l).exp();
            q * l / (1.0 - q)
        })
        .sum()
}

/// F(w) − small_prime_part(w) for Re(w) > 1, any Im(w).
fn f_large(w: ComplexScalar) -> ComplexScalar {
    let (z, dz) = zeta_pair_unchecked(w);
    -dz / z - small_prime_part(w)
}

fn mobius_table() -> [i8; MOBIUS_TERMS as usize + 1] {
    let mut mu = [0i8; MOBIUS_TERMS as usize + 1];
    for (j, slot) in mu.iter_mut().enumerate().skip(1) {
        *slot = mobius_small(j as u32).expect("j <= 40");
    }
    mu
}

/// Σ_{j=2..40} μ(j) F_B(js).
fn dilated_sum(s: ComplexScalar) -> ComplexScalar {
    let mu = mobius_table();
    let mut acc = ComplexCompensated::new();
    for j in 2..=MOBIUS_TERMS {
        let m = mu[j as usize];
        if m == 0 {
            continue;
        }
        let w = s * j as f64;
        if large_prime_bound(w.re) < SKIP_BELOW {
            // bounds decrease in j, so everything after is negligible too
            break;
        }
        acc.add(f_large(w) * f64::from(m));
    }
    acc.value()
}

fn check_half_plane(s: ComplexScalar, what: &str) -> Result<()> {
    if !(s.re > 0.5) {
        return Err(Error::Domain(format!("{what} needs Re(s) > 1/2, got s = {s}")));
    }
    if !(s.im.abs() <= zeta::MAX_IM) {
        return Err(Error::Domain(format!(
            "{what} needs |Im(s)| <= {}, got s = {s}",
            zeta::MAX_IM
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

/// F(s) = −ζ′(s)/ζ(s).
pub fn neg_log_deriv(s: ComplexScalar) -> Result<ComplexScalar> {
    Ok(-zeta::log_deriv(s)?)
}

/// P(s) = Σ_p log p · p^-s by Möbius inversion of F.
pub fn prime_log_sum_p(s: ComplexScalar) -> Result<ComplexScalar> {
    check_half_plane(s, "P(s)")?;
    let f = neg_log_deriv(s)?;
    let small: ComplexScalar = SMALL_PRIMES
        .iter()
        .map(|&p| {
            let l = p.ln();
            (-s * l).exp() * l
        })
        .sum();
    let v = small + f - small_prime_part(s) + dilated_sum(s);
    finite(v, "P(s)", s)
}

/// Δ(s) = (F(s) − P(s)) / s, continued to Re(s) > 1/2.
pub fn delta_closed(s: ComplexScalar) -> Result<ComplexScalar> {
    check_half_plane(s, "Delta(s)")?;
    let head: ComplexScalar = SMALL_PRIMES
        .iter()
        .map(|&p| {
            let l = p.ln();
            let q = (-s * l).exp();
            q * q * l / (1.0 - q)
        })
        .sum();
    finite((head - dilated_sum(s)) / s, "Delta(s)", s)
}

/// E(s) = (−1/s)(ζ′/ζ + ζ) − Δ(s).
pub fn e_closed(s: ComplexScalar) -> Result<ComplexScalar> {
    check_half_plane(s, "E(s)")?;
    Ok(zeta::lemma1_lhs(s)? - delta_closed(s)?)
}

/// Taylor coefficients of a function at `center`, read off a sampled circle.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TaylorCoefficients {
    pub center: ComplexScalar,
    pub radius: f64,
    /// Number of samples M.
    pub count: usize,
    /// a_0, …, a_nmax.
    pub coeffs: Vec<ComplexScalar>,
    /// Estimated absolute rounding error of each a_n.
    pub noise_floor: Vec<f64>,
}

/// e^(-2πik/M) for k = 0..M.
fn twiddles(m: usize) -> Vec<ComplexScalar> {
    (0..m)
        .map(|k| {
            let (sin, cos) = (2.0 * std::f64::consts::PI * k as f64 / m as f64).sin_cos();
            ComplexScalar::new(cos, -sin)
        })
        .collect()
}

fn check_contour_args(r: f64, m: usize, nmax: usize) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "contour radius must be positive, got {r}"
        )));
    }
    if !m.is_power_of_two() || m < 4 {
        return Err(Error::InvalidArgument(format!(
            "sample count must be a power of two >= 4, got {m}"
        )));
    }
    if m < 4 * nmax {
        return Err(Error::InvalidArgument(format!(
            "sample count {m} is below 4 * nmax = {}",
            4 * nmax
        )));
    }
    if nmax > MAX_ORDER {
        return Err(Error::InvalidArgument(format!("nmax {nmax} exceeds {MAX_ORDER}")));
    }
    Ok(())
}

fn sample_circle<F>(f: &F, s0: ComplexScalar, r: f64, m: usize) -> Result<Vec<ComplexScalar>>
where
    F: Fn(ComplexScalar) -> Result<ComplexScalar> + Sync,
{
    let tw = twiddles(m);
    tw.par_iter().map(|w| f(s0 + w.conj() * r)).collect()
}

/// Discrete Cauchy transform of samples taken at s0 + r·e^(2πij/M).
fn coefficients_from_samples(
    samples: &[ComplexScalar],
    center: ComplexScalar,
    r: f64,
    nmax: usize,
    precision: Precision,
) -> TaylorCoefficients {
    let m = samples.len();
    let tw = twiddles(m);
    let max_abs = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut coeffs = Vec::with_capacity(nmax + 1);
    let mut noise_floor = Vec::with_capacity(nmax + 1);
    let mut r_pow = 1.0;
    for n in 0..=nmax {
        let sum = match precision {
            Precision::Double => {
                let mut acc = ComplexCompensated::new();
                for (j, &v) in samples.iter().enumerate() {
                    acc.add(v * tw[(j * n) % m]);
                }
                acc.value()
            }
            Precision::DoubleDouble => {
                let mut acc = ComplexDoubleDouble::new();
                for (j, &v) in samples.iter().enumerate() {
                    acc.add_product(v, tw[(j * n) % m]);
                }
                acc.value()
            }
        };
        let scale = 1.0 / (m as f64 * r_pow);
        coeffs.push(sum * scale);
        noise_floor.push(NOISE_FACTOR * f64::EPSILON * max_abs / r_pow);
        r_pow *= r;
    }
    TaylorCoefficients {
        center,
        radius: r,
        count: m,
        coeffs,
        noise_floor,
    }
}

/// Taylor coefficients a_0..a_nmax of `f` about `s0` from `m` samples on
/// the circle of radius `r`. `f` must be analytic on the closed disk.
pub fn taylor_via_circle<F>(
    f: F,
    s0: ComplexScalar,
    r: f64,
    m: usize,
    nmax: usize,
    precision: Precision,
) -> Result<TaylorCoefficients>
where
    F: Fn(ComplexScalar) -> Result<ComplexScalar> + Sync,
{
    check_contour_args(r, m, nmax)?;
    let samples = sample_circle(&f, s0, r, m)?;
    Ok(coefficients_from_samples(&samples, s0, r, nmax, precision))
}

/// E^(n)(s0) for n = 0..=nmax with error estimates.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DerivativeSeries {
    pub center: ComplexScalar,
    pub radius: f64,
    pub samples: usize,
    pub derivatives: Vec<ComplexScalar>,
    /// n! · noise_floor_n.
    pub noise_floor: Vec<f64>,
    /// n! · |a_n(2M) − a_n(M)| from the refinement pass.
    pub refinement: Vec<f64>,
    pub coefficients: TaylorCoefficients,
}

impl DerivativeSeries {
    /// Error estimate for E^(n): the larger of the noise floor and the
    /// refinement change.
    pub fn error(&self, n: usize) -> f64 {
        self.noise_floor[n].max(self.refinement[n])
    }
}

fn factorials(nmax: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(nmax + 1);
    let mut f = 1.0;
    out.push(f);
    for k in 1..=nmax {
        f *= k as f64;
        out.push(f);
    }
    out
}

/// Checks that the circle of radius r about s0 stays where E is evaluated.
pub fn check_contour(s0: ComplexScalar, r: f64) -> Result<()> {
    let distance = (s0 - 0.5).norm();
    if r >= distance {
        return Err(Error::ContourCrossesPole {
            center: s0.to_string(),
            radius: r,
            distance,
        });
    }
    if s0.re - r <= 0.5 {
        return Err(Error::Domain(format!(
            "contour about {s0} with radius {r} leaves Re(s) > 1/2"
        )));
    }
    if s0.im.abs() + r > zeta::MAX_IM {
        return Err(Error::Domain(format!(
            "contour about {s0} with radius {r} leaves |Im(s)| <= {}",
            zeta::MAX_IM
        )));
    }
    Ok(())
}

/// E^(n)(s0) = n! a_n(E) from `m` samples, plus a 2m-sample refinement pass.
pub fn e_derivs_closed(
    s0: ComplexScalar,
    nmax: usize,
    r: f64,
    m: usize,
    precision: Precision,
) -> Result<DerivativeSeries> {
    check_contour_args(r, m, nmax)?;
    check_contour(s0, r)?;
    // the m-point circle is every other point of the 2m-point circle
    let fine = sample_circle(&e_closed, s0, r, 2 * m)?;
    let coarse: Vec<ComplexScalar> = fine.iter().step_by(2).copied().collect();
    let base = coefficients_from_samples(&coarse, s0, r, nmax, precision);
    let refined = coefficients_from_samples(&fine, s0, r, nmax, precision);
    let fact = factorials(nmax);
    let derivatives = base.coeffs.iter().zip(&fact).map(|(a, f)| a * f).collect();
    let noise_floor = base.noise_floor.iter().zip(&fact).map(|(e, f)| e * f).collect();
    let refinement = base
        .coeffs
        .iter()
        .zip(&refined.coeffs)
        .zip(&fact)
        .map(|((a, b), f)| (a - b).norm() * f)
        .collect();
    Ok(DerivativeSeries {
        center: s0,
        radius: r,
        samples: m,
        derivatives,
        noise_floor,
        refinement,
        coefficients: base,
    })
}
