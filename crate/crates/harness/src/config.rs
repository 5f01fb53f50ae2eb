//! Per-suite experiment configuration: domain, seed, sample budget, collar
//! size, and named tolerance overrides.

use std::collections::BTreeMap;

use finsler_core::geometry::Domain;

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Domain under test; suites with a canonical domain treat this as an
    /// override and otherwise ignore it.
    pub domain: Option<Domain>,
    pub seed: u64,
    /// Base sample count; each check scales it to its own default when
    /// unset.
    pub sample_count: Option<usize>,
    /// Boundary collar depth used by collar-sampling suites.
    pub collar: Option<f64>,
    /// Per-check tolerance overrides, keyed by check name.
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            domain: None,
            seed: 0,
            sample_count: None,
            collar: None,
            tolerances: BTreeMap::new(),
        }
    }
}

impl ExperimentConfig {
    pub fn seeded(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = Some(domain);
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.sample_count = Some(samples.max(1));
        self
    }

    pub fn with_collar(mut self, collar: f64) -> Self {
        self.collar = Some(collar);
        self
    }

    pub(crate) fn samples(&self, default: usize) -> usize {
        self.sample_count.unwrap_or(default).max(1)
    }

    pub(crate) fn collar_or(&self, default: f64) -> f64 {
        let c = self.collar.unwrap_or(default);
        if c > 0.0 {
            c
        } else {
            default
        }
    }

    pub(crate) fn tol(&self, check: &str, default: f64) -> f64 {
        match self.tolerances.get(check) {
            Some(t) if *t > 0.0 => *t,
            _ => default,
        }
    }
}
