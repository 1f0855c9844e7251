//! Exact step-function forms of ϑ, ψ and δ = ψ − ϑ.
//!
//! All three jump only at integers. Values are right-continuous: the jump at
//! n is included once t ≥ n. η(t) = ϑ(t) − ⌊t⌋ is never stored; it is
//! evaluated from ϑ on demand and streamed by the Mellin integrator.

use std::io::Write;

use crate::numeric::Compensated;
use crate::primes::{MangoldtJumps, PrimeTable};
use crate::{Error, Result};

/// Which arithmetic function a [`StepFunction`] represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Theta,
    Psi,
    Delta,
}

impl std::fmt::Display for StepKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StepKind::Theta => "theta",
            StepKind::Psi => "psi",
            StepKind::Delta => "delta",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub at: u64,
    pub size: f64,
    /// Value of the function on `[at, next jump)`.
    pub cumulative: f64,
}

/// Right-continuous step function with integer abscissas, zero before the
/// first jump and valid on `[1, limit]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    kind: StepKind,
    limit: u64,
    jumps: Vec<Jump>,
}

impl StepFunction {
    fn from_increments(kind: StepKind, limit: u64, increments: impl Iterator<Item = (u64, f64)>) -> Self {
        let mut acc = Compensated::new();
        let jumps = increments
            .map(|(at, size)| {
                acc.add(size);
                Jump {
                    at,
                    size,
                    cumulative: acc.value(),
                }
            })
            .collect();
        Self { kind, limit, jumps }
    }

    pub fn kind(&self) -> StepKind {
        self.kind
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    /// Number of jumps at abscissas ≤ t.
    pub fn jumps_up_to(&self, t: f64) -> usize {
        self.jumps.partition_point(|j| (j.at as f64) <= t)
    }

    /// Value at t without the range check.
    #[inline]
    pub(crate) fn value_unchecked(&self, t: f64) -> f64 {
        match self.jumps_up_to(t) {
            0 => 0.0,
            k => self.jumps[k - 1].cumulative,
        }
    }

    fn check_range(&self, t: f64) -> Result<()> {
        if !(t >= 1.0 && t <= self.limit as f64) {
            return Err(Error::Domain(format!(
                "t = {t} outside [1, {}] for {}",
                self.limit, self.kind
            )));
        }
        Ok(())
    }

    /// Writes `abscissa,cumulative_value` rows with a header.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "abscissa,cumulative_value")?;
        for j in &self.jumps {
            writeln!(out, "{},{}", j.at, j.cumulative)?;
        }
        Ok(())
    }
}

/// ϑ: one jump of size log p at each prime p.
pub fn build_theta(table: &PrimeTable) -> StepFunction {
    StepFunction::from_increments(
        StepKind::Theta,
        table.limit(),
        table.primes().iter().map(|&p| (p, (p as f64).ln())),
    )
}

/// ψ: one jump of size Λ(n) at each prime power n.
pub fn build_psi(jumps: &MangoldtJumps) -> StepFunction {
    StepFunction::from_increments(StepKind::Psi, jumps.limit, jumps.entries.iter().copied())
}

/// δ = ψ − ϑ as its own jump list; jumps only at proper prime powers.
pub fn build_delta(psi: &StepFunction, theta: &StepFunction) -> Result<StepFunction> {
    if psi.limit != theta.limit {
        return Err(Error::InvalidArgument(format!(
            "psi limit {} differs from theta limit {}",
            psi.limit, theta.limit
        )));
    }
    if psi.kind != StepKind::Psi || theta.kind != StepKind::Theta {
        return Err(Error::InvalidArgument(format!(
            "build_delta expects (psi, theta), got ({}, {})",
            psi.kind, theta.kind
        )));
    }
    let mut t = theta.jumps.iter().peekable();
    let increments = psi.jumps.iter().filter_map(move |j| {
        while t.peek().is_some_and(|tj| tj.at < j.at) {
            t.next();
        }
        let diff = match t.peek() {
            Some(tj) if tj.at == j.at => j.size - tj.size,
            _ => j.size,
        };
        (diff != 0.0).then_some((j.at, diff))
    });
    Ok(StepFunction::from_increments(StepKind::Delta, psi.limit, increments))
}

/// f(t) for 1 ≤ t ≤ limit.
pub fn eval_step(f: &StepFunction, t: f64) -> Result<f64> {
    f.check_range(t)?;
    Ok(f.value_unchecked(t))
}

/// η(t) = ϑ(t) − ⌊t⌋.
pub fn eta_at(theta: &StepFunction, t: f64) -> Result<f64> {
    Ok(eval_step(theta, t)? - t.floor())
}
