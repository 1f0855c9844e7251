//! Disk validation, the asymptotic target (−1)^(n+1) n! (s0 − 1/2)^(−n−1),
//! λ_n and the convergence scan.
//!
//! H(s) = E(s) + 1/(s − 1/2) is analytic on any validated disk, so the
//! Taylor coefficients h_n = E^(n)(s0)/n! + (−1)ⁿ (s0 − 1/2)^(−n−1) shrink
//! faster than |s0 − 1/2|^(−n), which is the statement λ_n → 0. The nearest
//! singularity of H on the real axis is at 1/3, so for real s0 the decay is
//! geometric with ratio (s0 − 1/2)/(s0 − 1/3).

use serde::Serialize;

use crate::chebyshev::{StepFunction, StepKind};
use crate::closedform::{e_derivs_closed, MAX_ORDER};
use crate::mellin::e_n_integrals;
use crate::{ComplexScalar, DiskError, Error, Precision, Result};

/// Zero-freeness of ζ(s) and ζ(2s) is taken for granted below this ordinate.
pub const ZERO_FREE_ORDINATE: f64 = 7.0;

/// λ fit starts here; smaller n are transient.
pub const FIT_FROM: usize = 5;

/// Trend checks need at least this many rows.
pub const TREND_MIN_NMAX: usize = 20;

/// A row is trusted while noise < λ / TRUST_RATIO.
pub const TRUST_RATIO: f64 = 10.0;

/// Cross-route comparison covers n up to this.
pub const CROSS_NMAX: usize = 10;

/// Relative slack allowed between the two routes on top of their budgets.
pub const CROSS_RELATIVE: f64 = 1e-5;

/// A disk D(s0; h) containing 1/2 on which E + 1/(s − 1/2) is analytic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiskSpec {
    s0: ComplexScalar,
    h: f64,
    margin_re: f64,
    contains_half: bool,
}

impl DiskSpec {
    pub fn s0(&self) -> ComplexScalar {
        self.s0
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// min Re over the disk, minus 1/3.
    pub fn margin_re(&self) -> f64 {
        self.margin_re
    }

    pub fn contains_half(&self) -> bool {
        self.contains_half
    }
}

pub fn validate_disk(s0: ComplexScalar, h: f64) -> std::result::Result<DiskSpec, DiskError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(DiskError::NonPositiveRadius(h));
    }
    let distance = (s0 - 0.5).norm();
    if !(distance < h) {
        return Err(DiskError::MissingHalf { distance, h });
    }
    let min_re = s0.re - h;
    if !(min_re > 1.0 / 3.0) {
        return Err(DiskError::ReachesOneThird { min_re });
    }
    if !(s0.re > 1.0) {
        return Err(DiskError::CenterNotRightOfOne(s0.re));
    }
    let max_im = s0.im.abs() + h;
    if !(max_im < ZERO_FREE_ORDINATE) {
        return Err(DiskError::ZeroFreenessUncertified { max_im });
    }
    Ok(DiskSpec {
        s0,
        h,
        margin_re: min_re - 1.0 / 3.0,
        contains_half: true,
    })
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// (−1)^(n+1) n! (s0 − 1/2)^(−n−1) as magnitude and phase. The magnitude
/// is a running product of k/|s0 − 1/2|, which stays finite as long as the
/// result does, and consecutive terms differ by exactly one rounding.
pub fn target_term(n: usize, s0: ComplexScalar) -> ComplexScalar {
    let d = s0 - 0.5;
    let k = (n + 1) as f64;
    let r = d.norm();
    let magnitude = (1..=n).fold(1.0 / r, |m, j| m * (j as f64 / r));
    let sign = if n.is_multiple_of(2) { -1.0 } else { 1.0 };
    ComplexScalar::from_polar(sign * magnitude, -k * d.arg())
}

/// λ_n = |E_n / target_n − 1|.
pub fn lambda_of(e_n: ComplexScalar, n: usize, s0: ComplexScalar) -> f64 {
    (e_n / target_term(n, s0) - 1.0).norm()
}

/// h_n = E_n/n! + (−1)ⁿ (s0 − 1/2)^(−n−1), the Taylor coefficient of H.
pub fn h_coefficient(n: usize, e_n: ComplexScalar, s0: ComplexScalar) -> ComplexScalar {
    let d = s0 - 0.5;
    let k = (n + 1) as f64;
    let inv_fact = (-ln_factorial(n)).exp();
    let pole = ComplexScalar::from_polar((-k * d.norm().ln()).exp(), -k * d.arg());
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    e_n * inv_fact + pole * sign
}

/// How E^(n)(s0) is obtained.
#[derive(Debug, Clone, Copy)]
pub enum Route<'a> {
    /// Contour sampling of the zeta-side closed form.
    Closed,
    /// Mellin moments of η, truncated at the table limit.
    Integral(&'a StepFunction),
    /// Closed rows, plus a comparison against the integral route for small n.
    Both(&'a StepFunction),
}

impl Route<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            Route::Closed => "closed",
            Route::Integral(_) => "integral",
            Route::Both(_) => "both",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    pub nmax: usize,
    pub radius: f64,
    pub samples: usize,
    pub precision: Precision,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub e: ComplexScalar,
    pub target: ComplexScalar,
    pub lambda: f64,
    pub ratio: ComplexScalar,
    /// Error of E_n, in units of |target_n| (directly comparable to λ).
    pub noise: f64,
}

impl ConvergenceRow {
    fn new(n: usize, e: ComplexScalar, abs_error: f64, s0: ComplexScalar) -> Self {
        let target = target_term(n, s0);
        let ratio = e / target;
        Self {
            n,
            e,
            target,
            lambda: (ratio - 1.0).norm(),
            ratio,
            noise: abs_error / target.norm(),
        }
    }
}

/// One comparison of E^(n)(s0) between the two routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossRow {
    pub n: usize,
    pub closed: ComplexScalar,
    pub integral: ComplexScalar,
    pub gap: f64,
    pub relative_gap: f64,
    /// Allowed gap: relative slack plus both routes' error estimates.
    pub budget: f64,
    /// Integral-route tail estimate alone.
    pub tail: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, ok: bool, detail: String) -> Self {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        Self { name, status, detail }
    }

    fn skipped(name: &'static str, detail: &str) -> Self {
        Self {
            name,
            status: CheckStatus::NotApplicable,
            detail: detail.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub disk: DiskSpec,
    pub route: &'static str,
    pub radius: f64,
    pub samples: usize,
    pub precision: Precision,
    pub rows: Vec<ConvergenceRow>,
    /// exp(slope) of the least-squares line through (n, ln λ_n) on the
    /// trusted window from n = 5.
    pub fitted_rate: Option<f64>,
    pub slope: Option<f64>,
    /// Last n before the first row whose noise reaches λ/10.
    pub trusted_nmax: Option<usize>,
    pub cross: Vec<CrossRow>,
    pub checks: Vec<Check>,
}

impl ConvergenceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn row(&self, n: usize) -> Option<&ConvergenceRow> {
        self.rows.get(n)
    }
}

/// Table limit needed for the integral route to reach order `nmax` at s0:
/// the η integrand peaks near log t = n/(Re s0 − 1/2); twice that is asked.
pub fn required_sieve_limit(nmax: usize, s0: ComplexScalar) -> f64 {
    (2.0 * nmax as f64 / (s0.re - 0.5)).exp().max(2.0)
}

fn check_sieve(theta: &StepFunction, nmax: usize, s0: ComplexScalar) -> Result<()> {
    if theta.kind() != StepKind::Theta {
        return Err(Error::InvalidArgument(format!(
            "integral route needs theta, got {}",
            theta.kind()
        )));
    }
    let required = required_sieve_limit(nmax, s0);
    if (theta.limit() as f64) < required {
        return Err(Error::InsufficientSieve {
            available: theta.limit(),
            required: if required < u64::MAX as f64 {
                required.ceil() as u64
            } else {
                u64::MAX
            },
        });
    }
    Ok(())
}

/// E^(n)(s0) by both routes for n ≤ nmax, compared within budget.
pub fn cross_validate(
    theta: &StepFunction,
    s0: ComplexScalar,
    nmax: usize,
    opts: &ScanOptions,
) -> Result<Vec<CrossRow>> {
    let closed = e_derivs_closed(s0, nmax, opts.radius, opts.samples, opts.precision)?;
    let integral = e_n_integrals(theta, nmax as u32, s0, theta.limit() as f64)?;
    Ok(integral
        .iter()
        .enumerate()
        .map(|(n, m)| {
            let c = closed.derivatives[n];
            let gap = (c - m.value).norm();
            let tail = m.tail_empirical;
            let budget = CROSS_RELATIVE * c.norm() + tail + closed.error(n);
            CrossRow {
                n,
                closed: c,
                integral: m.value,
                gap,
                relative_gap: gap / c.norm(),
                budget,
                tail,
                passed: gap <= budget,
            }
        })
        .collect())
}

/// Least-squares slope of ln λ against n.
fn log_slope(rows: &[ConvergenceRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.lambda > 0.0)
        .map(|r| (r.n as f64, r.lambda.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

fn trusted_nmax(rows: &[ConvergenceRow]) -> Option<usize> {
    let first_bad = rows
        .iter()
        .position(|r| !(r.noise < r.lambda / TRUST_RATIO))
        .unwrap_or(rows.len());
    first_bad.checked_sub(1)
}

/// Rows n = 0..=nmax with λ_n, the trusted window, the fitted decay rate and
/// pass/fail checks.
pub fn scan_convergence(disk: &DiskSpec, route: Route<'_>, opts: &ScanOptions) -> Result<ConvergenceReport> {
    let s0 = disk.s0;
    if opts.nmax > MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "nmax {} exceeds {MAX_ORDER}",
            opts.nmax
        )));
    }
    let rows: Vec<ConvergenceRow> = match route {
        Route::Closed | Route::Both(_) => {
            let d = e_derivs_closed(s0, opts.nmax, opts.radius, opts.samples, opts.precision)?;
            (0..=opts.nmax)
                .map(|n| ConvergenceRow::new(n, d.derivatives[n], d.error(n), s0))
                .collect()
        }
        Route::Integral(theta) => {
            check_sieve(theta, opts.nmax, s0)?;
            e_n_integrals(theta, opts.nmax as u32, s0, theta.limit() as f64)?
                .iter()
                .enumerate()
                .map(|(n, m)| ConvergenceRow::new(n, m.value, m.tail_empirical, s0))
                .collect()
        }
    };
    let cross = match route {
        Route::Both(theta) => {
            let n = opts.nmax.min(CROSS_NMAX);
            check_sieve(theta, n, s0)?;
            cross_validate(theta, s0, n, opts)?
        }
        _ => Vec::new(),
    };

    let trusted = trusted_nmax(&rows);
    let window: &[ConvergenceRow] = match trusted {
        Some(t) if t >= FIT_FROM => &rows[FIT_FROM..=t],
        _ => &[],
    };
    let slope = log_slope(window);
    let fitted_rate = slope.map(f64::exp);

    let shown = |v: Option<f64>| {
        v.map_or_else(
            || "undefined (fewer than 3 trusted rows)".to_string(),
            |v| format!("{v:.6}"),
        )
    };
    let mut checks = Vec::new();
    if opts.nmax >= TREND_MIN_NMAX {
        let t = trusted.unwrap_or(0);
        checks.push(Check::new(
            "noise-floor",
            trusted.is_some_and(|t| t >= TREND_MIN_NMAX),
            format!("trusted window ends at n = {t}"),
        ));
        checks.push(Check::new(
            "negative-slope",
            slope.is_some_and(|s| s < 0.0),
            format!("slope of ln lambda = {}", shown(slope)),
        ));
        let (l5, lt) = (rows[FIT_FROM].lambda, rows[t].lambda);
        checks.push(Check::new(
            "halving",
            t > FIT_FROM && lt < l5 / 2.0,
            format!("lambda_{t} = {lt:e}, lambda_5 = {l5:e}"),
        ));
        checks.push(Check::new(
            "rate-below-one",
            fitted_rate.is_some_and(|r| r > 0.0 && r < 1.0),
            format!("fitted rate = {}", shown(fitted_rate)),
        ));
    } else {
        let why = "needs nmax >= 20";
        for name in ["noise-floor", "negative-slope", "halving", "rate-below-one"] {
            checks.push(Check::skipped(name, why));
        }
    }
    if let Route::Both(_) = route {
        let bad = cross.iter().filter(|c| !c.passed).count();
        checks.push(Check::new(
            "cross-route",
            bad == 0,
            format!("{bad} of {} rows outside budget", cross.len()),
        ));
    }

    Ok(ConvergenceReport {
        disk: *disk,
        route: route.name(),
        radius: opts.radius,
        samples: opts.samples,
        precision: opts.precision,
        rows,
        fitted_rate,
        slope,
        trusted_nmax: trusted,
        cross,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use proptest::prelude::*;

    #[test]
    fn disk_examples() {
        let d = validate_disk(c64(1.01, 0.0), 0.52).unwrap();
        assert!(d.contains_half());
        let d = validate_disk(c64(3.0, 0.0), 2.55).unwrap();
        assert!((d.margin_re() - (0.45 - 1.0 / 3.0)).abs() < 1e-12);
        let e = validate_disk(c64(2.0, 0.0), 3.0).unwrap_err();
        assert!(matches!(e, DiskError::ReachesOneThird { .. }));
        assert!(e.to_string().contains("disk reaches Re <= 1/3"));
    }

    #[test]
    fn each_condition_has_its_own_error() {
        assert!(matches!(
            validate_disk(c64(3.0, 0.0), 0.0),
            Err(DiskError::NonPositiveRadius(_))
        ));
        assert!(matches!(
            validate_disk(c64(3.0, 0.0), 2.0),
            Err(DiskError::MissingHalf { .. })
        ));
        assert!(matches!(
            validate_disk(c64(0.9, 0.0), 0.5),
            Err(DiskError::CenterNotRightOfOne(_))
        ));
        assert!(matches!(
            validate_disk(c64(8.0, 0.5), 7.6),
            Err(DiskError::ZeroFreenessUncertified { .. })
        ));
    }

    #[test]
    fn target_examples() {
        assert!((target_term(0, c64(2.0, 0.0)).re + 2.0 / 3.0).abs() < 1e-15);
        assert!((target_term(3, c64(3.0, 0.0)).re - 0.1536).abs() < 1e-15);
        assert!((target_term(1, c64(2.0, 0.0)).re - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(target_term(3, c64(3.0, 0.0)).im, 0.0);
        let big = target_term(200, c64(3.0, 0.0));
        assert!(big.re.is_finite() && big.re < 0.0);
    }

    #[test]
    fn lambda_and_h_examples() {
        let s0 = c64(2.0, 0.0);
        let e0 = c64(-0.5759212, 0.0);
        assert!((lambda_of(e0, 0, s0) - 0.1361182).abs() < 1e-7);
        assert_eq!(lambda_of(target_term(4, s0), 4, s0), 0.0);
        assert_eq!(lambda_of(c64(0.0, 0.0), 7, s0), 1.0);
        assert!((h_coefficient(0, e0, s0).re - 0.0907455).abs() < 1e-7);
    }

    #[test]
    fn single_row_scan() {
        let disk = validate_disk(c64(2.0, 0.0), 1.6).unwrap();
        let opts = ScanOptions {
            nmax: 0,
            radius: 1.0,
            samples: 64,
            precision: Precision::Double,
        };
        let rep = scan_convergence(&disk, Route::Closed, &opts).unwrap();
        assert_eq!(rep.rows.len(), 1);
        assert!((rep.rows[0].lambda - 0.1361182).abs() < 1e-6, "{:?}", rep.rows[0]);
        assert!(rep.passed());
        assert!(rep.checks.iter().all(|c| c.status == CheckStatus::NotApplicable));
    }

    #[test]
    fn integral_route_needs_a_long_enough_table() {
        let table = crate::primes::sieve_primes(1000).unwrap();
        let theta = crate::chebyshev::build_theta(&table);
        let disk = validate_disk(c64(3.0, 0.0), 2.55).unwrap();
        let opts = ScanOptions {
            nmax: 10,
            radius: 2.2,
            samples: 64,
            precision: Precision::Double,
        };
        assert!(matches!(
            scan_convergence(&disk, Route::Integral(&theta), &opts),
            Err(Error::InsufficientSieve { available: 1000, .. })
        ));
    }

    proptest! {
        #[test]
        fn target_alternates(n in 0usize..150, re in 1.01f64..6.0, im in -3.0f64..3.0) {
            let s0 = c64(re, im);
            let (a, b) = (target_term(n, s0), target_term(n + 1, s0));
            let expect = a * (-((n + 1) as f64) / (s0 - 0.5));
            prop_assert!((b - expect).norm() <= 1e-12 * b.norm());
        }

        #[test]
        fn h_magnitude_matches_lambda(n in 0usize..60, re in 1.01f64..6.0, im in -3.0f64..3.0,
                                      er in -1.0f64..1.0, ei in -1.0f64..1.0) {
            let s0 = c64(re, im);
            let t = target_term(n, s0);
            let e = t * c64(1.0 + er, ei);
            let lhs = h_coefficient(n, e, s0).norm();
            let scale = (s0 - 0.5).norm().powf(-((n + 1) as f64));
            let rhs = lambda_of(e, n, s0) * scale;
            prop_assert!((lhs - rhs).abs() <= 1e-11 * scale);
        }

        #[test]
        fn disks_touching_one_third_rejected(re in 1.001f64..4.0, slack in 0.0f64..1.0) {
            let h = re - 1.0 / 3.0 + slack;
            prop_assert!(validate_disk(c64(re, 0.0), h).is_err());
        }
    }
}
