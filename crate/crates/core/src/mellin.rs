//! Truncated Mellin moments of step functions,
//!
//! ```text
//! M_n(f; s, X) = ∫₁^X f(t) (log t)^n t^(-s-1) dt,
//! ```
//!
//! computed without quadrature. For a right-continuous step function with
//! jumps J_k at x_k,
//!
//! ```text
//! M_n(f; s, X) = Σ_{x_k ≤ X} J_k · (T_n(x_k) − T_n(X)),   T_n(x) = ∫_x^∞ (log t)^n t^(-s-1) dt,
//! ```
//!
//! which is the interval-by-interval sum Σ c_i ∫_{a_i}^{a_i+1} regrouped by
//! jump. T_n obeys T_n = ((log x)^n x^-s + n T_{n-1}) / s; for real s every
//! term is positive, so there is no cancellation inside T_n and each jump
//! contributes a single well-conditioned product.
//!
//! Each moment carries two tail estimates for the missing ∫_X^∞:
//! a crude one from a classical envelope (|η(t)| ≤ t, ϑ(t) < 1.01624 t,
//! ψ(t) < 1.03883 t, δ(t) ≤ 2√t (log t)²) and an empirical one
//! from A·t^e with A measured on the computed range. The empirical tail is
//! a heuristic, not a bound.

use rayon::prelude::*;

use crate::chebyshev::{StepFunction, StepKind};
use crate::numeric::ComplexCompensated;
use crate::{ComplexScalar, Error, Result};

/// Exponent of the empirical envelope for the oscillating functions η and δ.
pub const EMPIRICAL_EXPONENT: f64 = 0.52;

/// A is measured over breakpoints t ≥ this (when X leaves enough room).
pub const EMPIRICAL_FROM: f64 = 1000.0;

const CHUNK: usize = 1 << 15;

/// A truncated moment and its tail estimates. Infinite tails mean the
/// envelope integral diverges at this Re(s).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MomentValue {
    pub value: ComplexScalar,
    /// Upper limit X of the computed part.
    pub truncation: f64,
    pub tail_crude: f64,
    pub tail_empirical: f64,
    /// Measured A of the empirical envelope A·t^e.
    pub envelope_scale: f64,
    pub n: u32,
    pub s: ComplexScalar,
}

/// Which function is being integrated; selects the tail envelopes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Integrand {
    Step(StepKind),
    Eta,
}

impl Integrand {
    fn empirical_exponent(self) -> f64 {
        match self {
            Integrand::Eta | Integrand::Step(StepKind::Delta) => EMPIRICAL_EXPONENT,
            Integrand::Step(_) => 1.0,
        }
    }

    /// Tail of the crude envelope for moment n at real part `sigma`.
    fn crude_tail(self, x: f64, n: u32, sigma: f64) -> f64 {
        let linear = |c: f64| c * real_tail(x, n, sigma - 1.0);
        match self {
            Integrand::Eta => linear(1.0),
            Integrand::Step(StepKind::Theta) => linear(1.01624),
            Integrand::Step(StepKind::Psi) => linear(1.03883),
            Integrand::Step(StepKind::Delta) => 2.0 * real_tail(x, n + 2, sigma - 0.5),
        }
    }
}

/// ∫_x^∞ (log t)^n t^(-p-1) dt for real p, or +∞ when p ≤ 0.
fn real_tail(x: f64, n: u32, p: f64) -> f64 {
    if p <= 0.0 {
        return f64::INFINITY;
    }
    let l = x.ln();
    let xp = (-p * l).exp();
    let mut t = xp / p;
    let mut ln_pow = 1.0;
    for k in 1..=n {
        ln_pow *= l;
        t = (ln_pow * xp + k as f64 * t) / p;
    }
    t
}

/// T_0(x), …, T_nmax(x) for complex s, Re(s) > 0.
#[inline]
fn tail_moments(x: f64, s: ComplexScalar, inv_s: ComplexScalar, out: &mut [ComplexScalar]) {
    let l = x.ln();
    let xs = (-s * l).exp();
    let mut t = xs * inv_s;
    out[0] = t;
    let mut ln_pow = 1.0;
    for (k, slot) in out.iter_mut().enumerate().skip(1) {
        ln_pow *= l;
        t = (xs * ln_pow + t * k as f64) * inv_s;
        *slot = t;
    }
}

/// ∫_0^w v^k e^(-s v) dv for k = 0..=n.
fn head_moments(w: f64, s: ComplexScalar, n: u32) -> Vec<ComplexScalar> {
    let z = s * w;
    let ez = (-z).exp();
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut w_pow = 1.0; // w^k
    for k in 0..=n {
        let kf = k as f64;
        let j = if z.norm() <= kf + 1.0 {
            // w^(k+1) e^-z Σ_j z^j / ((k+1)(k+2)…(k+1+j))
            let mut term = ComplexScalar::new(1.0 / (kf + 1.0), 0.0);
            let mut sum = term;
            for i in 1..1000 {
                term = term * z / (kf + 1.0 + i as f64);
                sum += term;
                if term.norm() <= 1e-18 * sum.norm() {
                    break;
                }
            }
            sum * ez * (w_pow * w)
        } else if k == 0 {
            -expm1(-z) / s
        } else {
            (out[k as usize - 1] * kf - ez * w_pow) / s
        };
        out.push(j);
        w_pow *= w;
    }
    out
}

fn expm1(z: ComplexScalar) -> ComplexScalar {
    let (sin, cos) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    ComplexScalar::new(z.re.exp_m1() * cos - 2.0 * half * half, z.re.exp() * sin)
}

/// ∫_a^b (log t)^n t^(-s-1) dt, with `b = f64::INFINITY` allowed.
///
/// With u = log t the integral is e^(-sα) Σ_k C(n,k) α^(n-k) ∫_0^w v^k e^(-sv) dv
/// (α = log a, w = log b − log a). The inner moments use the Kummer series
/// when |s w| ≤ k + 1 and the forward recurrence otherwise; the outer sum has
/// positive terms for real s.
pub fn basic_log_moment(a: f64, b: f64, n: u32, s: ComplexScalar) -> Result<ComplexScalar> {
    if !(a >= 1.0 && a.is_finite()) || !(b > a) {
        return Err(Error::InvalidArgument(format!(
            "basic_log_moment needs 1 <= a < b, got a = {a}, b = {b}"
        )));
    }
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite s = {s}")));
    }
    let alpha = a.ln();
    let inner: Vec<ComplexScalar> = if b.is_infinite() {
        if s.re <= 0.0 {
            return Err(Error::Divergence(format!("∫ to infinity needs Re(s) > 0, got s = {s}")));
        }
        // k!/s^(k+1)
        let inv_s = 1.0 / s;
        let mut v = inv_s;
        (0..=n)
            .map(|k| {
                if k > 0 {
                    v = v * k as f64 * inv_s;
                }
                v
            })
            .collect()
    } else {
        let w = ((b - a) / a).ln_1p();
        head_moments(w, s, n)
    };
    let mut binom = 1.0;
    let mut acc = ComplexCompensated::new();
    for k in (0..=n).rev() {
        // C(n, k) α^(n-k), walking k downward
        let i = n - k;
        if i > 0 {
            binom *= (k + 1) as f64 / i as f64;
        }
        let coef = binom * alpha.powi(i as i32);
        acc.add(inner[k as usize] * coef);
    }
    let v = acc.value() * (-s * alpha).exp();
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain(format!(
            "moment overflowed for a = {a}, b = {b}, n = {n}, s = {s}"
        )))
    }
}

fn check_truncation(limit: u64, x: f64) -> Result<()> {
    if !(x >= 1.0 && x <= limit as f64) {
        return Err(Error::Domain(format!("truncation X = {x} outside [1, {limit}]")));
    }
    Ok(())
}

/// Accumulates Σ J_k T_n(x_k) over a list of (x_k, J_k), chunked for rayon
/// and merged in chunk order.
fn jump_sums(
    count: usize,
    point: impl Fn(usize) -> (f64, f64) + Sync,
    nmax: u32,
    s: ComplexScalar,
) -> Vec<ComplexScalar> {
    let width = nmax as usize + 1;
    let inv_s = 1.0 / s;
    let chunks = count.div_ceil(CHUNK);
    let partials: Vec<Vec<ComplexCompensated>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![ComplexCompensated::new(); width];
            let mut t = vec![ComplexScalar::new(0.0, 0.0); width];
            for i in c * CHUNK..((c + 1) * CHUNK).min(count) {
                let (x, jump) = point(i);
                if jump == 0.0 {
                    continue;
                }
                tail_moments(x, s, inv_s, &mut t);
                for (a, &tn) in acc.iter_mut().zip(&t) {
                    a.add(tn * jump);
                }
            }
            acc
        })
        .collect();
    let mut total = vec![ComplexCompensated::new(); width];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            t.merge(p);
        }
    }
    total.iter().map(ComplexCompensated::value).collect()
}

/// Finite-interval fallback for Re(s) ≤ 0: Σ J_k ∫_{x_k}^X.
fn jump_sums_finite(
    count: usize,
    point: impl Fn(usize) -> (f64, f64) + Sync,
    nmax: u32,
    s: ComplexScalar,
    x_end: f64,
) -> Result<Vec<ComplexScalar>> {
    let width = nmax as usize + 1;
    let mut acc = vec![ComplexCompensated::new(); width];
    for i in 0..count {
        let (x, jump) = point(i);
        if jump == 0.0 || x >= x_end {
            continue;
        }
        for (n, a) in acc.iter_mut().enumerate() {
            a.add(basic_log_moment(x, x_end, n as u32, s)? * jump);
        }
    }
    Ok(acc.iter().map(ComplexCompensated::value).collect())
}

fn assemble(
    integrand: Integrand,
    sums: Vec<ComplexScalar>,
    value_at_end: f64,
    x: f64,
    s: ComplexScalar,
    scale: f64,
    closed_end: bool,
) -> Vec<MomentValue> {
    let width = sums.len();
    let mut at_end = vec![ComplexScalar::new(0.0, 0.0); width];
    if closed_end {
        tail_moments(x, s, 1.0 / s, &mut at_end);
    }
    let e = integrand.empirical_exponent();
    sums.into_iter()
        .zip(at_end)
        .enumerate()
        .map(|(n, (sum, end))| {
            let n = n as u32;
            let tail_crude = integrand.crude_tail(x, n, s.re);
            let empirical = scale * real_tail(x, n, s.re - e);
            MomentValue {
                value: sum - end * value_at_end,
                truncation: x,
                tail_crude,
                tail_empirical: empirical.min(tail_crude),
                envelope_scale: scale,
                n,
                s,
            }
        })
        .collect()
}

/// Lower end of the window on which A is measured.
fn envelope_window_start(x: f64) -> f64 {
    if x >= 2.0 * EMPIRICAL_FROM {
        EMPIRICAL_FROM
    } else {
        1.0
    }
}

/// Moments n = 0..=nmax of a step function.
pub fn step_moments(f: &StepFunction, nmax: u32, s: ComplexScalar, x: f64) -> Result<Vec<MomentValue>> {
    check_truncation(f.limit(), x)?;
    let integrand = Integrand::Step(f.kind());
    let jumps = f.jumps();
    let count = f.jumps_up_to(x);
    let point = |i: usize| (jumps[i].at as f64, jumps[i].size);

    // A = sup |f(t)| / t^e over [t0, X]; on each constancy piece the sup sits at its left end
    let e = integrand.empirical_exponent();
    let t0 = envelope_window_start(x);
    let start = f.jumps_up_to(t0);
    let mut scale = f.value_unchecked(t0).abs() / t0.powf(e);
    for j in &jumps[start..count] {
        scale = scale.max(j.cumulative.abs() / (j.at as f64).powf(e));
    }

    let value_at_end = f.value_unchecked(x);
    let sums = if s.re > 0.0 {
        jump_sums(count, point, nmax, s)
    } else {
        jump_sums_finite(count, point, nmax, s, x)?
    };
    Ok(assemble(integrand, sums, value_at_end, x, s, scale, s.re > 0.0))
}

/// ∫₁^X f(t) (log t)^n t^(-s-1) dt with tail estimates.
pub fn step_moment(f: &StepFunction, n: u32, s: ComplexScalar, x: f64) -> Result<MomentValue> {
    let mut all = step_moments(f, n, s, x)?;
    Ok(all.pop().expect("n + 1 moments"))
}

/// η-moments ∫₁^X η(t)(log t)^n t^(-s-1) dt for n = 0..=nmax,
/// streaming the merged grid of integers and primes. Needs Re(s) > 0.
fn eta_moments(theta: &StepFunction, nmax: u32, s: ComplexScalar, x: f64) -> Result<Vec<MomentValue>> {
    check_truncation(theta.limit(), x)?;
    let last = x.floor() as u64;
    let jumps = theta.jumps();

    // net jump at integer m: -1 from ⌊t⌋, plus log m when m is prime
    let jump_at = |m: u64, idx: &mut usize| -> f64 {
        while *idx < jumps.len() && jumps[*idx].at < m {
            *idx += 1;
        }
        if *idx < jumps.len() && jumps[*idx].at == m {
            jumps[*idx].size - 1.0
        } else {
            -1.0
        }
    };

    let width = nmax as usize + 1;
    let inv_s = 1.0 / s;
    let count = last as usize;
    let chunks = count.div_ceil(CHUNK);
    let e = EMPIRICAL_EXPONENT;
    let t0 = envelope_window_start(x);

    let partials: Vec<(Vec<ComplexCompensated>, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let first = (c * CHUNK) as u64 + 1;
            let end = (((c + 1) * CHUNK) as u64).min(last);
            let mut idx = jumps.partition_point(|j| j.at < first);
            let mut theta_val = if idx == 0 { 0.0 } else { jumps[idx - 1].cumulative };
            let mut acc = vec![ComplexCompensated::new(); width];
            let mut t = vec![ComplexScalar::new(0.0, 0.0); width];
            let mut scale: f64 = 0.0;
            for m in first..=end {
                let jump = jump_at(m, &mut idx);
                if idx < jumps.len() && jumps[idx].at == m {
                    theta_val = jumps[idx].cumulative;
                }
                let mf = m as f64;
                // η is constant on [m, m+1); its envelope ratio peaks at t = m
                if mf >= t0 {
                    scale = scale.max((theta_val - mf).abs() / mf.powf(e));
                }
                tail_moments(mf, s, inv_s, &mut t);
                for (a, &tn) in acc.iter_mut().zip(&t) {
                    a.add(tn * jump);
                }
            }
            (acc, scale)
        })
        .collect();

    let mut total = vec![ComplexCompensated::new(); width];
    let mut scale: f64 = 0.0;
    for (acc, sc) in &partials {
        scale = scale.max(*sc);
        for (t, p) in total.iter_mut().zip(acc) {
            t.merge(p);
        }
    }
    let eta_end = theta.value_unchecked(x) - x.floor();
    let sums = total.iter().map(ComplexCompensated::value).collect();
    Ok(assemble(Integrand::Eta, sums, eta_end, x, s, scale, true))
}

fn signed(mut moments: Vec<MomentValue>) -> Vec<MomentValue> {
    for m in &mut moments {
        if m.n % 2 == 1 {
            m.value = -m.value;
        }
    }
    moments
}

/// E^(n)(s0) ≈ (−1)^n ∫₁^X η(t)(log t)^n t^(-s0-1) dt for n = 0..=nmax.
pub fn e_n_integrals(theta: &StepFunction, nmax: u32, s0: ComplexScalar, x: f64) -> Result<Vec<MomentValue>> {
    if theta.kind() != StepKind::Theta {
        return Err(Error::InvalidArgument(format!("expected theta, got {}", theta.kind())));
    }
    if !(s0.re > 1.0) {
        return Err(Error::Domain(format!(
            "the η-integral for E^(n) converges only for Re(s) > 1, got s0 = {s0}"
        )));
    }
    Ok(signed(eta_moments(theta, nmax, s0, x)?))
}

pub fn e_n_integral(theta: &StepFunction, n: u32, s0: ComplexScalar, x: f64) -> Result<MomentValue> {
    Ok(e_n_integrals(theta, n, s0, x)?.pop().expect("n + 1 moments"))
}

/// Δ^(n)(s0) ≈ (−1)^n ∫₁^X δ(t)(log t)^n t^(-s0-1) dt for n = 0..=nmax.
pub fn delta_n_integrals(delta: &StepFunction, nmax: u32, s0: ComplexScalar, x: f64) -> Result<Vec<MomentValue>> {
    if delta.kind() != StepKind::Delta {
        return Err(Error::InvalidArgument(format!("expected delta, got {}", delta.kind())));
    }
    if !(s0.re > 0.5) {
        return Err(Error::Domain(format!(
            "the δ-integral converges only for Re(s) > 1/2, got s0 = {s0}"
        )));
    }
    Ok(signed(step_moments(delta, nmax, s0, x)?))
}

pub fn delta_n_integral(delta: &StepFunction, n: u32, s0: ComplexScalar, x: f64) -> Result<MomentValue> {
    Ok(delta_n_integrals(delta, n, s0, x)?.pop().expect("n + 1 moments"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::chebyshev::{build_delta, build_psi, build_theta};
    use crate::primes::{mangoldt_jumps, sieve_primes};

    #[test]
    fn infinite_range_closed_forms() {
        let s = c64(2.0, 0.0);
        assert!((basic_log_moment(1.0, f64::INFINITY, 0, s).unwrap() - 0.5).norm() < 1e-16);
        assert!((basic_log_moment(1.0, f64::INFINITY, 3, s).unwrap() - 0.375).norm() < 1e-16);
    }

    #[test]
    fn finite_range_reference() {
        // ∫_1^e (log t)^2 t^-2 dt = 2 - 5/e
        let v = basic_log_moment(1.0, std::f64::consts::E, 2, c64(1.0, 0.0)).unwrap();
        let exact = 2.0 - 5.0 / std::f64::consts::E;
        assert!((v.re - exact).abs() < 1e-15);
        assert!((v.re - 0.160603).abs() < 1e-6);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn argument_errors() {
        let s = c64(2.0, 0.0);
        assert!(matches!(
            basic_log_moment(0.5, 2.0, 0, s),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            basic_log_moment(3.0, 2.0, 0, s),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            basic_log_moment(2.0, 2.0, 0, s),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            basic_log_moment(1.0, f64::INFINITY, 0, c64(0.0, 1.0)),
            Err(Error::Divergence(_))
        ));
        // finite ranges do not need Re(s) > 0
        assert!(basic_log_moment(1.0, 10.0, 2, c64(-1.0, 0.5)).is_ok());
    }

    #[test]
    fn tail_recurrence_matches_closed_form() {
        let s = c64(1.7, 0.8);
        let mut t = vec![c64(0.0, 0.0); 9];
        tail_moments(37.5, s, 1.0 / s, &mut t);
        for (n, tn) in t.iter().enumerate() {
            let direct = basic_log_moment(37.5, f64::INFINITY, n as u32, s).unwrap();
            assert!((tn - direct).norm() <= 1e-14 * direct.norm());
        }
    }

    #[test]
    fn additivity_over_split_ranges() {
        let s = c64(0.9, -1.3);
        for n in 0..8 {
            let whole = basic_log_moment(2.0, 40.0, n, s).unwrap();
            let parts = basic_log_moment(2.0, 7.5, n, s).unwrap() + basic_log_moment(7.5, 40.0, n, s).unwrap();
            assert!((whole - parts).norm() <= 1e-13 * whole.norm(), "n = {n}");
        }
    }

    #[test]
    fn theta_moment_up_to_ten() {
        let theta = build_theta(&sieve_primes(10).unwrap());
        let m = step_moment(&theta, 0, c64(2.0, 0.0), 10.0).unwrap();
        // four constant pieces: Σ_p log p (p^-2 - 10^-2) / 2
        let hand: f64 = [2.0f64, 3.0, 5.0, 7.0]
            .iter()
            .map(|p| p.ln() * (p.powi(-2) - 0.01) / 2.0)
            .sum();
        assert!((m.value.re - hand).abs() < 1e-15);
        assert!((m.value.re - 0.172987).abs() < 1e-6);
        assert!(m.tail_crude >= m.tail_empirical && m.tail_empirical >= 0.0);
    }

    #[test]
    fn delta_is_zero_below_four() {
        let table = sieve_primes(100).unwrap();
        let theta = build_theta(&table);
        let delta = build_delta(&build_psi(&mangoldt_jumps(&table).unwrap()), &theta).unwrap();
        let m = delta_n_integral(&delta, 0, c64(2.0, 0.0), 3.9).unwrap();
        assert_eq!(m.value, c64(0.0, 0.0));
    }

    #[test]
    fn eta_empty_range() {
        let theta = build_theta(&sieve_primes(100).unwrap());
        let m = e_n_integral(&theta, 0, c64(2.0, 0.0), 1.0).unwrap();
        assert_eq!(m.value, c64(0.0, 0.0));
        // the crude tail covers the whole integral |E(2)| ≈ 0.576
        assert!(m.tail_crude >= 0.576);
        assert!(m.tail_empirical >= 0.576);
    }

    #[test]
    fn eta_small_range_by_hand() {
        // ∫_1^5 η(t) t^-3 dt over pieces [1,2),[2,3),[3,4),[4,5)
        let theta = build_theta(&sieve_primes(100).unwrap());
        let eta = |t: f64| crate::chebyshev::eta_at(&theta, t).unwrap();
        let piece = |a: f64, b: f64| (a.powi(-2) - b.powi(-2)) / 2.0;
        let hand: f64 = (1..5).map(|a| eta(a as f64) * piece(a as f64, a as f64 + 1.0)).sum();
        let m = e_n_integral(&theta, 0, c64(2.0, 0.0), 5.0).unwrap();
        assert!((m.value.re - hand).abs() < 1e-15);
        // odd n flips sign
        let m1 = e_n_integral(&theta, 1, c64(2.0, 0.0), 5.0).unwrap();
        let raw1: f64 = (1..5)
            .map(|a| eta(a as f64) * basic_log_moment(a as f64, a as f64 + 1.0, 1, c64(2.0, 0.0)).unwrap().re)
            .sum();
        assert!((m1.value.re + raw1).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        let table = sieve_primes(100).unwrap();
        let theta = build_theta(&table);
        let delta = build_delta(&build_psi(&mangoldt_jumps(&table).unwrap()), &theta).unwrap();
        assert!(matches!(
            e_n_integral(&theta, 0, c64(1.0, 0.0), 50.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            e_n_integral(&theta, 0, c64(2.0, 0.0), 101.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            delta_n_integral(&delta, 0, c64(0.5, 0.0), 50.0),
            Err(Error::Domain(_))
        ));
        assert!(delta_n_integral(&delta, 0, c64(0.6, 0.0), 50.0).is_ok());
        assert!(matches!(
            e_n_integral(&delta, 0, c64(2.0, 0.0), 50.0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn crude_tail_is_infinite_outside_convergence() {
        let table = sieve_primes(1000).unwrap();
        let theta = build_theta(&table);
        let delta = build_delta(&build_psi(&mangoldt_jumps(&table).unwrap()), &theta).unwrap();
        let m = step_moment(&theta, 1, c64(0.9, 0.0), 500.0).unwrap();
        assert!(m.tail_crude.is_infinite() && m.tail_empirical.is_infinite());
        let d = delta_n_integral(&delta, 1, c64(0.7, 0.0), 500.0).unwrap();
        assert!(d.tail_crude.is_finite());
        // the finite-range route handles Re(s) ≤ 0
        let neg = step_moment(&theta, 2, c64(-0.5, 0.3), 200.0).unwrap();
        assert!(neg.value.re.is_finite() && neg.tail_crude.is_infinite());
    }
}
