use std::time::Instant;

use etascan_core::chebyshev::{build_delta, build_psi, build_theta, StepFunction};
use etascan_core::closedform::delta_closed;
use etascan_core::mellin::{delta_n_integral, e_n_integral};
use etascan_core::primes::{cache_path, load_or_sieve, mangoldt_jumps, PrimeTable, TableSource};
use etascan_core::theorem::{self, validate_disk, CheckStatus, Route, ScanOptions};
use etascan_core::zeta::lemma1_lhs;
use etascan_core::{c64, ComplexScalar, Precision};
use serde::Serialize;

use crate::args::{Cli, Command, Format, PrecisionArg, RouteArg, WhichStep};
use crate::report::{Cell, CheckLine, Metadata, Report, Table};
use crate::{CliError, Status};

/// Sample points for the residue table.
pub const RESIDUE_POINTS: [f64; 3] = [0.60, 0.55, 0.52];
/// Largest allowed |g(0.52) − 1|.
pub const RESIDUE_TOLERANCE: f64 = 0.2;
/// Relative rounding allowance added to the verify-lemma1 budget.
pub const ROUNDING_ALLOWANCE: f64 = 1e-12;
/// Integral tails above this fraction of |E^(n)| trigger a warning.
pub const DOMINANT_TAIL: f64 = 1e-3;

const SCAN_NMAX: u64 = 80;
const CROSS_NMAX: u64 = theorem::CROSS_NMAX as u64;

/// Flags after defaults are filled in; embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub s0: [f64; 2],
    pub h: f64,
    pub x_limit: u64,
    pub n_max: u64,
    pub radius: f64,
    pub samples: usize,
    pub precision: PrecisionArg,
    pub cache_dir: String,
    pub format: Format,
    pub out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route: Option<RouteArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub which: Option<WhichStep>,
}

/// min(2.2, 0.88 |s0 − 1/2|).
pub fn default_radius(s0: ComplexScalar) -> f64 {
    (0.88 * (s0 - 0.5).norm()).min(2.2)
}

/// Middle of the admissible range (|s0 − 1/2|, min(Re s0 − 1/3, 7 − |Im s0|)).
pub fn default_h(s0: ComplexScalar) -> f64 {
    let lo = (s0 - 0.5).norm();
    let hi = (s0.re - 1.0 / 3.0).min(theorem::ZERO_FREE_ORDINATE - s0.im.abs());
    0.5 * (lo + hi)
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Self {
        let c = &cli.common;
        let default_n = match cli.command {
            Command::TheoremScan { .. } => SCAN_NMAX,
            Command::CrossValidate => CROSS_NMAX,
            _ => 0,
        };
        Self {
            command: cli.command.name(),
            s0: [c.s0.re, c.s0.im],
            h: c.h.unwrap_or_else(|| default_h(c.s0)),
            x_limit: c.x_limit,
            n_max: c.n_max.unwrap_or(default_n),
            radius: c.radius.unwrap_or_else(|| default_radius(c.s0)),
            samples: c.samples,
            precision: c.precision,
            cache_dir: c.cache_dir.display().to_string(),
            format: c.format,
            out: c.out.as_ref().map(|p| p.display().to_string()),
            route: match cli.command {
                Command::TheoremScan { route } => Some(route),
                _ => None,
            },
            which: match cli.command {
                Command::DumpSteps { which } => Some(which),
                _ => None,
            },
        }
    }

    pub fn s0(&self) -> ComplexScalar {
        c64(self.s0[0], self.s0[1])
    }

    fn scan_options(&self, nmax: usize) -> ScanOptions {
        ScanOptions {
            nmax,
            radius: self.radius,
            samples: self.samples,
            precision: Precision::from(self.precision),
        }
    }
}

struct Run<'a> {
    cli: &'a Cli,
    config: RunConfig,
    start: Instant,
    sieve_limit: Option<u64>,
}

impl Run<'_> {
    fn primes(&mut self) -> Result<PrimeTable, CliError> {
        let dir = &self.cli.common.cache_dir;
        let table = load_or_sieve(self.config.x_limit, dir).map_err(|e| match e {
            etascan_core::Error::Io(io) => {
                CliError::new(Status::Io, format!("cache directory {}: {io}", dir.display()))
            }
            other => other.into(),
        })?;
        self.sieve_limit = Some(table.limit());
        Ok(table)
    }

    fn theta(&mut self) -> Result<StepFunction, CliError> {
        Ok(build_theta(&self.primes()?))
    }

    fn report(&self, passed: Option<bool>) -> Report {
        Report {
            command: self.config.command,
            metadata: Metadata {
                version: env!("CARGO_PKG_VERSION"),
                flags: serde_json::to_value(&self.config).expect("config serializes"),
                sieve_limit: self.sieve_limit,
                precision: Precision::from(self.config.precision).to_string(),
                wall_time_s: self.start.elapsed().as_secs_f64(),
            },
            summary: Vec::new(),
            checks: Vec::new(),
            passed,
            tables: Vec::new(),
        }
    }

    fn require_right_of_one(&self, what: &str) -> Result<(), CliError> {
        let s0 = self.config.s0();
        if s0.re > 1.0 {
            Ok(())
        } else {
            Err(CliError::new(
                Status::Precondition,
                format!("{what} needs Re(s0) > 1 for the integral route, got s0 = {s0}"),
            ))
        }
    }
}

/// Runs the parsed command and returns its report.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let mut run = Run {
        cli,
        config: RunConfig::from_cli(cli),
        start: Instant::now(),
        sieve_limit: None,
    };
    match cli.command {
        Command::SieveCache => sieve_cache(&mut run),
        Command::VerifyLemma1 => verify_lemma1(&mut run),
        Command::VerifyResidue => verify_residue(&run),
        Command::TheoremScan { route } => theorem_scan(&mut run, route),
        Command::CrossValidate => cross_validate(&mut run),
        Command::DumpSteps { which } => dump_steps(&mut run, which),
    }
}

fn sieve_cache(run: &mut Run) -> Result<Report, CliError> {
    let table = run.primes()?;
    let path = cache_path(&run.cli.common.cache_dir, table.limit());
    let source = match table.source() {
        TableSource::Cache => {
            eprintln!("cache hit: {}", path.display());
            "cache"
        }
        TableSource::Fresh => {
            eprintln!("sieved {} primes, wrote {}", table.len(), path.display());
            "fresh"
        }
    };
    let mut t = Table::new("cache", &["limit", "count", "source", "path"]);
    t.push(vec![
        table.limit().into(),
        table.len().into(),
        source.into(),
        path.display().to_string().into(),
    ]);
    let mut rep = run.report(None);
    rep.tables.push(t);
    Ok(rep)
}

fn verify_lemma1(run: &mut Run) -> Result<Report, CliError> {
    run.require_right_of_one("verify-lemma1")?;
    let s = run.config.s0();
    let table = run.primes()?;
    let theta = build_theta(&table);
    let psi = build_psi(&mangoldt_jumps(&table)?);
    let delta = build_delta(&psi, &theta)?;
    let x = table.limit() as f64;
    let lhs = lemma1_lhs(s)?;
    let e = e_n_integral(&theta, 0, s, x)?;
    let d = delta_n_integral(&delta, 0, s, x)?;
    let residual = (lhs - e.value - d.value).norm();
    let rounding = ROUNDING_ALLOWANCE * (lhs.norm() + e.value.norm() + d.value.norm());
    let budget = e.tail_empirical + d.tail_empirical + rounding;
    let passed = residual <= budget;

    let mut t = Table::new(
        "lemma1",
        &[
            "s_re",
            "s_im",
            "lhs_re",
            "lhs_im",
            "e_re",
            "e_im",
            "delta_re",
            "delta_im",
            "residual",
            "tail_e",
            "tail_delta",
            "budget",
        ],
    );
    t.push(vec![
        s.re.into(),
        s.im.into(),
        lhs.re.into(),
        lhs.im.into(),
        e.value.re.into(),
        e.value.im.into(),
        d.value.re.into(),
        d.value.im.into(),
        residual.into(),
        e.tail_empirical.into(),
        d.tail_empirical.into(),
        budget.into(),
    ]);
    let mut rep = run.report(Some(passed));
    rep.summary("residual", residual);
    rep.summary("budget", budget);
    rep.summary("tail_crude_e", e.tail_crude);
    rep.summary("tail_crude_delta", d.tail_crude);
    rep.checks.push(CheckLine {
        name: "residual-within-budget".into(),
        status: if passed { "pass" } else { "fail" },
        detail: format!("{residual:e} <= {budget:e}"),
    });
    rep.tables.push(t);
    Ok(rep)
}

/// (s, (s − 1/2)·Δ(s)) at [`RESIDUE_POINTS`] and whether they approach 1
/// monotonically, ending within [`RESIDUE_TOLERANCE`].
pub fn residue_table<F>(delta: F) -> etascan_core::Result<(Vec<(f64, f64)>, bool)>
where
    F: Fn(ComplexScalar) -> etascan_core::Result<ComplexScalar>,
{
    let rows = RESIDUE_POINTS
        .iter()
        .map(|&s| Ok((s, (s - 0.5) * delta(c64(s, 0.0))?.re)))
        .collect::<etascan_core::Result<Vec<_>>>()?;
    let dist: Vec<f64> = rows.iter().map(|r| (r.1 - 1.0).abs()).collect();
    let monotone = dist.windows(2).all(|w| w[1] < w[0]);
    let close = dist.last().is_some_and(|&d| d < RESIDUE_TOLERANCE);
    Ok((rows, monotone && close))
}

fn verify_residue(run: &Run) -> Result<Report, CliError> {
    let (rows, passed) = residue_table(delta_closed)?;
    let mut t = Table::new("residue", &["s", "g", "distance_to_one"]);
    for &(s, g) in &rows {
        t.push(vec![s.into(), g.into(), (g - 1.0).abs().into()]);
    }
    let mut rep = run.report(Some(passed));
    rep.checks.push(CheckLine {
        name: "monotone-approach".into(),
        status: if passed { "pass" } else { "fail" },
        detail: format!("last distance must be < {RESIDUE_TOLERANCE}"),
    });
    rep.tables.push(t);
    Ok(rep)
}

fn theorem_scan(run: &mut Run, route: RouteArg) -> Result<Report, CliError> {
    let s0 = run.config.s0();
    let disk = validate_disk(s0, run.config.h).map_err(etascan_core::Error::from)?;
    let opts = run.config.scan_options(run.config.n_max as usize);
    let theta = match route {
        RouteArg::Closed => None,
        RouteArg::Integral | RouteArg::Both => Some(run.theta()?),
    };
    let route = match (route, &theta) {
        (RouteArg::Integral, Some(t)) => Route::Integral(t),
        (RouteArg::Both, Some(t)) => Route::Both(t),
        _ => Route::Closed,
    };
    let scan = theorem::scan_convergence(&disk, route, &opts)?;

    let mut rows = Table::new(
        "rows",
        &[
            "n",
            "e_re",
            "e_im",
            "target_re",
            "target_im",
            "lambda",
            "ratio_re",
            "ratio_im",
            "noise",
        ],
    );
    for r in &scan.rows {
        rows.push(vec![
            r.n.into(),
            r.e.re.into(),
            r.e.im.into(),
            r.target.re.into(),
            r.target.im.into(),
            r.lambda.into(),
            r.ratio.re.into(),
            r.ratio.im.into(),
            r.noise.into(),
        ]);
    }
    let mut rep = run.report(Some(scan.passed()));
    rep.summary("h", disk.h());
    rep.summary("margin_re", disk.margin_re());
    rep.summary("route", scan.route);
    rep.summary("fitted_rate", scan.fitted_rate);
    rep.summary("slope", scan.slope);
    rep.summary("trusted_nmax", scan.trusted_nmax);
    if s0.im == 0.0 {
        rep.summary("pole_distance_ratio", (s0.re - 0.5) / (s0.re - 1.0 / 3.0));
    }
    for c in &scan.checks {
        rep.checks.push(CheckLine {
            name: c.name.into(),
            status: match c.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "fail",
                CheckStatus::NotApplicable => "not-applicable",
            },
            detail: c.detail.clone(),
        });
    }
    rep.tables.push(rows);
    if !scan.cross.is_empty() {
        rep.tables.push(cross_table(&scan.cross));
    }
    Ok(rep)
}

fn cross_table(rows: &[theorem::CrossRow]) -> Table {
    let mut t = Table::new(
        "cross",
        &[
            "n",
            "closed_re",
            "closed_im",
            "integral_re",
            "integral_im",
            "gap",
            "relative_gap",
            "budget",
            "tail",
            "passed",
        ],
    );
    for r in rows {
        t.push(vec![
            r.n.into(),
            r.closed.re.into(),
            r.closed.im.into(),
            r.integral.re.into(),
            r.integral.im.into(),
            r.gap.into(),
            r.relative_gap.into(),
            r.budget.into(),
            r.tail.into(),
            r.passed.into(),
        ]);
    }
    t
}

fn cross_validate(run: &mut Run) -> Result<Report, CliError> {
    run.require_right_of_one("cross-validate")?;
    let s0 = run.config.s0();
    let n = run.config.n_max.min(CROSS_NMAX) as usize;
    let theta = run.theta()?;
    let rows = theorem::cross_validate(&theta, s0, n, &run.config.scan_options(n))?;
    let worst_tail = rows.iter().map(|r| r.tail / r.closed.norm()).fold(0.0, f64::max);
    let dominated = worst_tail > DOMINANT_TAIL;
    if dominated {
        log::warn!(
            "integral tails dominate the budget at s0 = {s0} (largest tail is {worst_tail:.2e} of |E^(n)|); agreement is weak evidence here"
        );
    }
    let passed = rows.iter().all(|r| r.passed);
    let mut rep = run.report(Some(passed));
    rep.summary(
        "max_relative_gap",
        rows.iter().map(|r| r.relative_gap).fold(0.0, f64::max),
    );
    rep.summary("max_relative_tail", worst_tail);
    rep.summary("tails_dominate", dominated);
    rep.checks.push(CheckLine {
        name: "gaps-within-budget".into(),
        status: if passed { "pass" } else { "fail" },
        detail: format!(
            "{} of {} rows within budget",
            rows.iter().filter(|r| r.passed).count(),
            rows.len()
        ),
    });
    rep.tables.push(cross_table(&rows));
    Ok(rep)
}

fn dump_steps(run: &mut Run, which: WhichStep) -> Result<Report, CliError> {
    let table = run.primes()?;
    let theta = build_theta(&table);
    let f = match which {
        WhichStep::Theta => theta,
        WhichStep::Psi => build_psi(&mangoldt_jumps(&table)?),
        WhichStep::Delta => build_delta(&build_psi(&mangoldt_jumps(&table)?), &theta)?,
    };
    let mut t = Table::new("steps", &["abscissa", "cumulative_value"]);
    for j in f.jumps() {
        t.push(vec![Cell::from(j.at), j.cumulative.into()]);
    }
    let mut rep = run.report(None);
    rep.summary("function", f.kind().to_string());
    rep.summary("jumps", f.jumps().len());
    rep.tables.push(t);
    Ok(rep)
}
