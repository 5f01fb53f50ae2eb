//! Machine-readable verification reports: one report per suite, one entry
//! per check, deterministic field ordering, no NaN anywhere, and infinities
//! rendered as the explicit `"unbounded"` token.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// A finite number or the `"unbounded"` token; the only way infinities
/// appear in reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReportValue {
    Number(f64),
    Unbounded,
}

impl ReportValue {
    pub fn new(v: f64) -> Self {
        assert!(!v.is_nan(), "reports never contain NaN");
        if v.is_infinite() {
            ReportValue::Unbounded
        } else {
            ReportValue::Number(v)
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            ReportValue::Number(v) => *v,
            ReportValue::Unbounded => f64::INFINITY,
        }
    }
}

impl Serialize for ReportValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ReportValue::Number(v) => s.serialize_f64(*v),
            ReportValue::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for ReportValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(ReportValue::new(v)),
            Raw::Text(t) if t == "unbounded" => Ok(ReportValue::Unbounded),
            Raw::Text(t) => Err(serde::de::Error::custom(format!(
                "expected a number or \"unbounded\", got {t:?}"
            ))),
        }
    }
}

/// Result of one named check within a suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub samples: usize,
    #[serde(rename = "maxViolation")]
    pub max_violation: f64,
    pub tolerance: ReportValue,
    /// Empirically fitted constants (deterministic key order).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub fitted: BTreeMap<String, ReportValue>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, samples: usize, max_violation: f64, tolerance: f64) -> Self {
        assert!(!max_violation.is_nan(), "reports never contain NaN");
        assert!(
            max_violation.is_finite(),
            "violations are finite by construction"
        );
        Self {
            name: name.into(),
            samples,
            max_violation,
            tolerance: ReportValue::new(tolerance),
            fitted: BTreeMap::new(),
            notes: String::new(),
        }
    }

    /// A check that only records constants; it passes by construction.
    pub fn fit_only(name: impl Into<String>, samples: usize) -> Self {
        Self::new(name, samples, 0.0, f64::INFINITY)
    }

    pub fn with_fit(mut self, key: impl Into<String>, value: f64) -> Self {
        self.fitted.insert(key.into(), ReportValue::new(value));
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes = note.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.max_violation <= self.tolerance.as_f64()
    }
}

/// One suite run: pass iff every check's violation is within tolerance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub pass: bool,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    /// Which verified claims this suite covers (see the coverage table).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub claims: Vec<String>,
    #[serde(rename = "runtimeSeconds")]
    pub runtime_seconds: f64,
}

impl VerificationReport {
    pub fn new(
        suite: impl Into<String>,
        seed: u64,
        checks: Vec<CheckResult>,
        claims: &[&str],
        runtime_seconds: f64,
    ) -> Self {
        let pass = checks.iter().all(CheckResult::passed);
        Self {
            suite: suite.into(),
            pass,
            seed,
            checks,
            claims: claims.iter().map(|c| c.to_string()).collect(),
            runtime_seconds,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization");
        text.push('\n');
        text
    }

    /// Serialization with the wall-clock runtime canonicalized to zero:
    /// the deterministic content of a report. Two runs of one suite with
    /// one seed produce byte-identical canonical forms.
    pub fn canonical_json(&self) -> String {
        let mut copy = self.clone();
        copy.runtime_seconds = 0.0;
        copy.to_json()
    }

    /// Flatten to CSV, one row per check.
    pub fn to_csv<W: std::io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "suite",
            "pass",
            "seed",
            "check",
            "samples",
            "maxViolation",
            "tolerance",
            "fitted",
            "notes",
        ])?;
        for c in &self.checks {
            let fitted = c
                .fitted
                .iter()
                .map(|(k, v)| match v {
                    ReportValue::Number(n) => format!("{k}={n}"),
                    ReportValue::Unbounded => format!("{k}=unbounded"),
                })
                .collect::<Vec<_>>()
                .join(" ");
            let tol = match c.tolerance {
                ReportValue::Number(n) => n.to_string(),
                ReportValue::Unbounded => "unbounded".to_string(),
            };
            w.write_record([
                self.suite.as_str(),
                if self.pass { "true" } else { "false" },
                &self.seed.to_string(),
                c.name.as_str(),
                &c.samples.to_string(),
                &c.max_violation.to_string(),
                &tol,
                &fitted,
                c.notes.as_str(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
