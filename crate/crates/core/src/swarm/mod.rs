//! Swarm orchestration: sample feature-omission configurations, check each
//! variant independently on a pool of workers, and aggregate the results.

mod report;

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{mpsc, Arc};
use std::thread;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bmc::{self, BmcError, BmcOptions, Metrics, OutcomeKind, ResourceReason, VerificationOutcome};
use crate::frontend::{extract_features, validate, FeatureSet, Program};

pub use report::{aggregate, SwarmReport, Verdict};

/// One variant to check: the set of omitted features.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SwarmConfig {
    pub omitted: FeatureSet,
}

impl SwarmConfig {
    pub fn baseline() -> SwarmConfig {
        SwarmConfig {
            omitted: FeatureSet::new(),
        }
    }

    pub fn new(omitted: FeatureSet) -> SwarmConfig {
        SwarmConfig { omitted }
    }

    pub fn is_baseline(&self) -> bool {
        self.omitted.is_empty()
    }

    /// Sorted omitted labels joined by `+`, or `baseline`.
    pub fn label(&self) -> String {
        self.omitted.label()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    /// The baseline plus one config per feature.
    LeaveOneOut,
    /// Each feature omitted independently with probability 1/2.
    IndependentHalf,
    Explicit(Vec<FeatureSet>),
}

#[derive(Debug, Clone)]
pub struct SwarmOptions {
    pub strategy: Strategy,
    /// Number of draws for [`Strategy::IndependentHalf`].
    pub config_count: usize,
    pub seed: u64,
    pub jobs: usize,
    /// Options for every variant run; `omitted` and `seed` are overridden.
    pub per_run: BmcOptions,
    /// Run every config instead of stopping at the first counterexample.
    pub keep_going: bool,
    pub include_baseline: bool,
}

impl Default for SwarmOptions {
    fn default() -> Self {
        SwarmOptions {
            strategy: Strategy::LeaveOneOut,
            config_count: 8,
            seed: 0,
            jobs: thread::available_parallelism().map_or(1, |n| n.get()),
            per_run: BmcOptions::default(),
            keep_going: false,
            include_baseline: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SwarmError {
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error("invalid swarm options: {0}")]
    BadOptions(String),
    #[error(transparent)]
    Bmc(#[from] BmcError),
}

/// The ordered list of configurations `opts` asks for over `features`.
pub fn sample_configs(features: &FeatureSet, opts: &SwarmOptions) -> Result<Vec<SwarmConfig>, SwarmError> {
    let mut configs = Vec::new();
    if opts.include_baseline {
        configs.push(SwarmConfig::baseline());
    }
    match &opts.strategy {
        Strategy::LeaveOneOut => {
            for f in features.iter() {
                configs.push(SwarmConfig::new([f].into_iter().collect()));
            }
        }
        Strategy::IndependentHalf => {
            if opts.config_count == 0 {
                return Err(SwarmError::BadOptions("config count must be at least 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            for _ in 0..opts.config_count {
                let omitted: FeatureSet = features.iter().filter(|_| rng.gen_bool(0.5)).collect();
                let c = SwarmConfig::new(omitted);
                if !configs.contains(&c) {
                    configs.push(c);
                }
            }
        }
        Strategy::Explicit(list) => {
            configs.clear();
            for omitted in list {
                if let Some(f) = omitted.difference(features).next() {
                    return Err(SwarmError::UnknownFeature(f.to_string()));
                }
                configs.push(SwarmConfig::new(omitted.clone()));
            }
        }
    }
    if configs.is_empty() {
        configs.push(SwarmConfig::baseline());
    }
    Ok(configs)
}

/// Solver seed for one config: the swarm seed mixed with the config label.
pub fn config_seed(seed: u64, config: &SwarmConfig) -> u64 {
    let digest = Sha256::digest(config.label().as_bytes());
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    seed ^ u64::from_le_bytes(bytes)
}

/// Checks every sampled variant of `p`. Counterexamples reported here have
/// been replayed on `p` itself by [`bmc::check`].
pub fn run_swarm(p: &Program, opts: &SwarmOptions) -> Result<SwarmReport, SwarmError> {
    let start = Instant::now();
    if opts.jobs == 0 {
        return Err(SwarmError::BadOptions("jobs must be at least 1".into()));
    }
    if opts.per_run.depth == 0 {
        return Err(SwarmError::BadOptions("depth must be at least 1".into()));
    }
    let errors = validate(p);
    if !errors.is_empty() {
        return Err(BmcError::Invalid(errors).into());
    }
    let configs = sample_configs(&extract_features(p), opts)?;

    let cancel = opts
        .per_run
        .cancel
        .clone()
        .unwrap_or_else(|| Arc::new(AtomicBool::new(false)));
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel();
    let workers = opts.jobs.min(configs.len());
    let mut outcomes: Vec<Option<VerificationOutcome>> = vec![None; configs.len()];
    let mut completion = Vec::new();

    thread::scope(|scope| -> Result<(), SwarmError> {
        for _ in 0..workers {
            let tx = tx.clone();
            let (configs, next, cancel) = (&configs, &next, &cancel);
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= configs.len() || cancel.load(Ordering::SeqCst) {
                    break;
                }
                let run = BmcOptions {
                    omitted: configs[i].omitted.clone(),
                    seed: config_seed(opts.seed, &configs[i]),
                    cancel: Some(cancel.clone()),
                    ..opts.per_run.clone()
                };
                if tx.send((i, bmc::check(p, &run))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for (i, result) in rx.iter() {
            let outcome = match result {
                Ok(o) => o,
                Err(e) => {
                    cancel.store(true, Ordering::SeqCst);
                    return Err(e.into());
                }
            };
            if !opts.keep_going && outcome.counterexample().is_some() {
                cancel.store(true, Ordering::SeqCst);
            }
            completion.push(i);
            outcomes[i] = Some(outcome);
        }
        Ok(())
    })?;

    let per_config: Vec<(SwarmConfig, VerificationOutcome)> = configs
        .iter()
        .zip(outcomes)
        .map(|(c, o)| {
            let o = o.unwrap_or(VerificationOutcome {
                kind: OutcomeKind::ResourceOut(ResourceReason::Cancelled),
                metrics: Metrics::default(),
            });
            (c.clone(), o)
        })
        .collect();
    let by_completion: Vec<(SwarmConfig, VerificationOutcome)> =
        completion.iter().map(|&i| per_config[i].clone()).collect();
    let baseline_ran = by_completion.iter().any(|(c, _)| c.is_baseline());
    let verdict = aggregate(&by_completion, baseline_ran);

    Ok(SwarmReport {
        per_config,
        verdict,
        wall_time_ms: start.elapsed().as_millis() as u64,
        seed: opts.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse;

    fn features(labels: &[&str]) -> FeatureSet {
        labels.iter().copied().collect()
    }

    #[test]
    fn leave_one_out_shape() {
        let cs = sample_configs(&features(&["top", "push", "pop"]), &SwarmOptions::default()).unwrap();
        let labels: Vec<String> = cs.iter().map(SwarmConfig::label).collect();
        assert_eq!(labels, ["baseline", "pop", "push", "top"]);
    }

    #[test]
    fn independent_half_is_seeded() {
        let opts = SwarmOptions {
            strategy: Strategy::IndependentHalf,
            seed: 42,
            ..SwarmOptions::default()
        };
        let f = features(&["a", "b", "c", "d"]);
        let first = sample_configs(&f, &opts).unwrap();
        assert_eq!(first, sample_configs(&f, &opts).unwrap());
        assert_eq!(first[0], SwarmConfig::baseline());
        let mut sorted = first.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), first.len());
        assert_eq!(sample_configs(&FeatureSet::new(), &opts).unwrap(), [SwarmConfig::baseline()]);
    }

    #[test]
    fn explicit_rejects_unknown_labels() {
        let opts = SwarmOptions {
            strategy: Strategy::Explicit(vec![features(&["nosuch"])]),
            ..SwarmOptions::default()
        };
        assert_eq!(
            sample_configs(&features(&["a"]), &opts),
            Err(SwarmError::UnknownFeature("nosuch".into()))
        );
    }

    #[test]
    fn featureless_program_is_a_single_check() {
        let p = parse("func main() { int x; x = havoc(); assert(x != 3); }").unwrap();
        let report = run_swarm(&p, &SwarmOptions::default()).unwrap();
        assert_eq!(report.per_config.len(), 1);
        let single = bmc::check(
            &p,
            &BmcOptions {
                seed: config_seed(0, &SwarmConfig::baseline()),
                ..BmcOptions::default()
            },
        )
        .unwrap();
        assert_eq!(report.per_config[0].1.kind, single.kind);
        assert!(matches!(report.verdict, Verdict::Falsified { .. }));
    }

    #[test]
    fn jobs_do_not_change_outcomes() {
        let src = r#"
            func main() {
              int x;
              x = havoc();
              if (x == 1) { log("a"); assert(false); }
              if (x == 2) { log("b"); }
            }
        "#;
        let p = parse(src).unwrap();
        let kinds = |jobs| {
            let opts = SwarmOptions {
                jobs,
                keep_going: true,
                ..SwarmOptions::default()
            };
            let r = run_swarm(&p, &opts).unwrap();
            r.per_config
                .iter()
                .map(|(c, o)| (c.label(), o.is_verified()))
                .collect::<Vec<_>>()
        };
        let one = kinds(1);
        assert_eq!(one, kinds(3));
        assert_eq!(
            one,
            [("baseline".to_string(), false), ("a".into(), true), ("b".into(), false)]
        );
    }
}
