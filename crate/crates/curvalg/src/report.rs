//! Verification reports.

use std::collections::BTreeMap;

use serde::Serialize;

/// Which side of the tolerance a residual must fall on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    /// `residual <= tolerance`.
    AtMost,
    /// `residual > tolerance`; used for negative controls.
    Above,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    /// What the check is about, in words.
    pub anchor: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub expect: Expect,
    pub pass: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, anchor: &'static str, residual: f64, tolerance: f64) -> Self {
        Self::with(name, anchor, residual, tolerance, Expect::AtMost)
    }

    /// A negative control: passes when the residual is large.
    pub fn control(name: impl Into<String>, anchor: &'static str, residual: f64, tolerance: f64) -> Self {
        Self::with(name, anchor, residual, tolerance, Expect::Above)
    }

    /// An exact check: residual is the number of failing instances.
    pub fn exact(name: impl Into<String>, anchor: &'static str, failures: usize) -> Self {
        Self::new(name, anchor, failures as f64, 0.0)
    }

    fn with(name: impl Into<String>, anchor: &'static str, residual: f64, tolerance: f64, expect: Expect) -> Self {
        let pass = match expect {
            Expect::AtMost => residual <= tolerance,
            Expect::Above => residual > tolerance,
        };
        Self { name: name.into(), anchor, residual, tolerance, expect, pass, detail: String::new() }
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<[f64; 2]>,
    /// Always present; `null` for suites that draw no random numbers.
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TruncationInfo {
    /// Series terms below this fraction of the largest one are dropped.
    pub rel_tol: f64,
    /// Multiplier on the summation window.
    pub scale: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub suite: String,
    pub parameters: Parameters,
    /// Named tolerances the suite applied.
    pub tolerances: BTreeMap<&'static str, f64>,
    /// `null` for exact suites.
    pub truncation: Option<TruncationInfo>,
    pub checks: Vec<Check>,
    /// Residuals of all checks, in check order.
    pub residuals: Vec<f64>,
    /// Largest residual among the checks that must stay small.
    pub max_residual: f64,
    pub pass: bool,
    pub timestamp: u64,
}

impl Report {
    pub fn new(
        suite: &str,
        parameters: Parameters,
        tolerances: BTreeMap<&'static str, f64>,
        truncation: Option<TruncationInfo>,
        checks: Vec<Check>,
        timestamp: u64,
    ) -> Self {
        let residuals = checks.iter().map(|c| c.residual).collect();
        let max_residual = checks.iter().filter(|c| c.expect == Expect::AtMost).map(|c| c.residual).fold(0.0, f64::max);
        let pass = checks.iter().all(|c| c.pass);
        Self { command: "verify", suite: suite.into(), parameters, tolerances, truncation, checks, residuals, max_residual, pass, timestamp }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}

/// Seconds since the Unix epoch.
pub fn now() -> u64 {
    std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}
