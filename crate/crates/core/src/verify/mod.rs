//! Seeded property suites with independent oracles.
//!
//! Each suite draws instances from a deterministic per-instance RNG
//! (ChaCha8 seeded with the master seed, stream = instance number), so
//! reports do not depend on thread scheduling.

pub mod gen;
pub mod oracle;
mod suites;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::fields::FieldDesc;

/// Suites run by `verify` with no argument; `roussey` is opt-in.
pub const DEFAULT_SUITES: &[&str] = &[
    "springer",
    "local-global",
    "quad-ext",
    "hyp-multiples",
    "becher",
    "el73",
    "i1",
    "ekm-gen",
    "f32",
    "self-pfister",
    "itrans",
    "hypchar-iv",
    "subform",
    "hauptsatz",
];

pub const OPTIONAL_SUITES: &[&str] = &["roussey"];

/// A skip rate above this fails the suite as vacuous.
pub const VACUOUS_SKIP_RATE: f64 = 0.9;

#[derive(Clone, Debug)]
pub struct GenConfig {
    /// Base field; `None` lets each suite use its own mix.
    pub field: Option<FieldDesc>,
    pub min_dim: usize,
    pub max_dim: usize,
    /// Entries over Q are drawn from `[−height, height]`.
    pub height: i64,
    pub samples: usize,
    pub seed: u64,
}

impl GenConfig {
    pub fn new(seed: u64, samples: usize) -> Self {
        GenConfig { field: None, min_dim: 1, max_dim: 6, height: 30, samples, seed }
    }

    pub fn with_field(mut self, f: FieldDesc) -> Self {
        self.field = Some(f);
        self
    }

    pub fn with_dims(mut self, min: usize, max: usize) -> Self {
        self.min_dim = min;
        self.max_dim = max;
        self
    }
}

/// Default instance count of each suite.
pub fn default_samples(id: &str) -> usize {
    match id {
        "springer" => 1000,
        "local-global" => 2000,
        "quad-ext" => 600,
        "hauptsatz" => 400,
        "ekm-gen" => 100,
        _ => 200,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub instance: usize,
    /// Forms and parameters in expression syntax.
    pub input: Value,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteStatus {
    Pass,
    Fail,
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub instances: usize,
    pub skipped: usize,
    pub certificates_replayed: usize,
    pub status: SuiteStatus,
    pub violations: Vec<Violation>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.status == SuiteStatus::Pass
    }

    pub fn skip_rate(&self) -> f64 {
        if self.instances == 0 {
            0.0
        } else {
            self.skipped as f64 / self.instances as f64
        }
    }
}

/// What one instance produced.
#[derive(Clone, Debug, Default)]
pub(crate) struct Outcome {
    pub skipped: bool,
    pub replayed: usize,
    pub violation: Option<(Value, String)>,
}

type SuiteFn = fn(usize, &mut ChaCha8Rng, &GenConfig) -> Result<Outcome>;

fn lookup(id: &str) -> Result<SuiteFn> {
    Ok(match id {
        "springer" => suites::springer,
        "local-global" => suites::local_global,
        "quad-ext" => suites::quad_ext,
        "hyp-multiples" => suites::hyp_multiples,
        "becher" => suites::becher,
        "el73" => suites::el73,
        "i1" => suites::i1,
        "ekm-gen" => suites::ekm_gen,
        "f32" => suites::f32,
        "self-pfister" => suites::self_pfister,
        "itrans" => suites::itrans,
        "hypchar-iv" => suites::hypchar_iv,
        "subform" => suites::subform,
        "hauptsatz" => suites::hauptsatz,
        "roussey" => suites::roussey,
        _ => return Err(Error::UnknownSuite(id.to_string())),
    })
}

pub fn instance_rng(seed: u64, instance: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(instance as u64);
    rng
}

fn run_instance(f: SuiteFn, i: usize, cfg: &GenConfig) -> Outcome {
    let mut rng = instance_rng(cfg.seed, i);
    match f(i, &mut rng, cfg) {
        Ok(o) => o,
        // a decider error is a defect, not an Unknown
        Err(e) => Outcome { violation: Some((Value::Null, format!("error: {e}"))), ..Outcome::default() },
    }
}

pub fn run_suite(id: &str, cfg: &GenConfig) -> Result<SuiteReport> {
    let f = lookup(id)?;
    #[cfg(feature = "parallel")]
    let outcomes: Vec<Outcome> = {
        use rayon::prelude::*;
        (0..cfg.samples).into_par_iter().map(|i| run_instance(f, i, cfg)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<Outcome> = (0..cfg.samples).map(|i| run_instance(f, i, cfg)).collect();

    let mut report = SuiteReport {
        suite: id.to_string(),
        seed: cfg.seed,
        instances: cfg.samples,
        skipped: 0,
        certificates_replayed: 0,
        status: SuiteStatus::Pass,
        violations: Vec::new(),
    };
    for (i, o) in outcomes.into_iter().enumerate() {
        report.skipped += o.skipped as usize;
        report.certificates_replayed += o.replayed;
        if let Some((input, message)) = o.violation {
            report.violations.push(Violation { instance: i, input, message });
        }
    }
    report.status = if !report.violations.is_empty() {
        SuiteStatus::Fail
    } else if report.skip_rate() > VACUOUS_SKIP_RATE {
        SuiteStatus::Vacuous
    } else {
        SuiteStatus::Pass
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", &GenConfig::new(0, 1)), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn deterministic() {
        let cfg = GenConfig::new(3, 20);
        assert_eq!(run_suite("hauptsatz", &cfg).unwrap(), run_suite("hauptsatz", &cfg).unwrap());
    }

    #[test]
    fn small_runs_pass() {
        for id in DEFAULT_SUITES.iter().chain(OPTIONAL_SUITES) {
            let r = run_suite(id, &GenConfig::new(11, 12)).unwrap();
            assert!(r.violations.is_empty(), "{id}: {:?}", r.violations);
        }
    }
}
