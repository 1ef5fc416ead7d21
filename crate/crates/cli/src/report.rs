//! Scenario reports. Exact-backend reports are deterministic: every scalar
//! is an exact literal, maps are ordered, and wall-clock time is only
//! recorded on request.

use std::collections::BTreeMap;

use cmv_core::{BandMatrix, DiffOperator, LaurentPoly, Scalar};
use serde::{Deserialize, Serialize};

use crate::config::{Backend, Num, ScenarioConfig};

/// Entry `(i, j, value)` of a sparse matrix.
pub type Triplet = (usize, usize, Num);

/// `(degree, coefficient)` pairs of a Laurent polynomial.
pub type Terms = Vec<(i64, Num)>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Ran and every check it performs passed.
    Ok,
    /// Ran, but a check failed.
    Failed,
    /// The library refused or failed to run it.
    Error,
    /// The scenario's configuration is invalid.
    Invalid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: ScenarioConfig,
    pub backend: Backend,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Trust horizon of the main computed operator, where there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Payload>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Solve(SolveResult),
    Identities(IdentityResult),
    Kernel(KernelResult),
    Reconstruct(ReconstructResult),
    Olp(OlpResult),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub dimension: usize,
    pub classification: String,
    pub unknowns: usize,
    pub equations: usize,
    /// Basis elements on rows and columns `0..M`, nonzero entries only.
    pub basis: Vec<Vec<Triplet>>,
    /// Exact re-run of a float solve, when `α` has an exact form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<CrossCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub exact_dimension: usize,
    pub exact_classification: String,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub holds: bool,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub order: usize,
    pub checks: BTreeMap<String, Check>,
    pub all_hold: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelResult {
    pub order: usize,
    pub z: Num,
    pub cascade: Vec<bool>,
    pub cascade_rows: usize,
    pub band: (usize, usize),
    pub band_ok: bool,
    pub gamma: Vec<Num>,
    pub gamma_expected: Vec<Num>,
    pub gamma_ok: bool,
    pub gamma_nonzero: bool,
    pub delta: Vec<Num>,
    pub delta_expected: Vec<Num>,
    pub delta_ok: bool,
    pub all_pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructResult {
    pub order: usize,
    /// `coefficients[k]` multiplies `d^k/dz^k`.
    pub coefficients: Vec<Terms>,
    pub display: String,
    /// `D` mapped back to a matrix reproduces `Ω` inside its horizon.
    pub round_trip: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OlpResult {
    pub x: Vec<Terms>,
    pub chi: Vec<Terms>,
    /// Gram–Schmidt against the moments gives the same polynomials
    /// (exact backend only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_agrees: Option<bool>,
}

pub fn terms<T: Scalar>(p: &LaurentPoly<T>) -> Terms {
    p.terms().map(|(d, c)| (d, Num::from_scalar(c))).collect()
}

pub fn operator_terms<T: Scalar>(d: &DiffOperator<T>) -> Vec<Terms> {
    d.coeffs().iter().map(terms).collect()
}

/// Nonzero entries inside the horizon, row-major.
pub fn triplets<T: Scalar>(m: &BandMatrix<T>) -> Vec<Triplet> {
    let mut out: Vec<Triplet> = m
        .trusted_entries()
        .filter(|(_, _, v)| !v.is_zero())
        .map(|(i, j, v)| (i, j, Num::from_scalar(v)))
        .collect();
    out.sort_by_key(|(i, j, _)| (*i, *j));
    out
}

impl Report {
    /// One line for `--summary`.
    pub fn summary_line(&self) -> String {
        let label = self.scenario.label();
        let body = match (&self.status, &self.result) {
            (Status::Error | Status::Invalid, _) | (_, None) => {
                format!("error: {}", self.error.as_deref().unwrap_or("no result"))
            }
            (_, Some(Payload::Solve(s))) => {
                let mut line = format!("dimension {} ({})", s.dimension, s.classification);
                if let Some(c) = &s.cross_check {
                    line += &format!(", exact cross-check {}", if c.agrees { "agrees" } else { "DISAGREES" });
                }
                line
            }
            (_, Some(Payload::Identities(r))) => {
                let failed: Vec<&str> = r.checks.iter().filter(|(_, c)| !c.holds).map(|(k, _)| k.as_str()).collect();
                if failed.is_empty() {
                    format!("all {} identities hold (n = {})", r.checks.len(), r.order)
                } else {
                    format!("identities failing: {}", failed.join(", "))
                }
            }
            (_, Some(Payload::Kernel(k))) => format!("kernel checks {}", if k.all_pass { "pass" } else { "FAIL" }),
            (_, Some(Payload::Reconstruct(r))) => format!("order {}: {}", r.order, r.display),
            (_, Some(Payload::Olp(o))) => format!("{} polynomials", o.x.len()),
        };
        format!("{label}: {body}")
    }
}
