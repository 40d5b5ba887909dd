//! Seeded property fuzzing of construct → verify → extract → reconstruct.
//!
//! Every case draws from its own RNG seeded by `(seed, instance, sample)`,
//! so a failure is reproduced by its case seed alone and the result does not
//! depend on thread scheduling.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::Result;
use crate::family::{lot_sizing_regression, random_instance, ConstructOptions, Instance, Prepared, SampleKind};
use crate::io::texts;
use crate::scalar::{Scalar, Q};

/// SplitMix64 step over `seed` mixed with two indices.
pub fn derive_seed(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed
        .wrapping_add(a.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(b.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub family: String,
    /// Fixed instance to sample from; random instances of `family` otherwise.
    pub instance: Option<Instance>,
    pub seed: u64,
    pub instances: usize,
    pub samples_per_instance: usize,
    pub options: ConstructOptions,
    /// Also confirm every certified point with the brute-force oracle.
    pub oracle: bool,
}

impl FuzzConfig {
    pub fn new(family: &str, seed: u64, instances: usize, samples_per_instance: usize) -> Self {
        Self {
            family: family.to_string(),
            instance: None,
            seed,
            instances,
            samples_per_instance,
            options: ConstructOptions::default(),
            oracle: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FuzzFailure {
    /// `"regression"` or `"instance k, sample i"`.
    pub origin: String,
    /// Seed of the case RNG (instance seed for instance-level failures).
    pub case_seed: u64,
    pub instance: Option<Instance>,
    pub point: Vec<Q>,
    pub stage: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct FuzzReport {
    pub family: String,
    pub total: usize,
    pub passed: usize,
    /// Failure counts keyed by pipeline stage.
    pub by_stage: BTreeMap<String, usize>,
    pub first_failure: Option<FuzzFailure>,
}

impl FuzzReport {
    pub fn failures(&self) -> usize {
        self.total - self.passed
    }

    pub fn to_json(&self) -> Value {
        let first = self.first_failure.as_ref().map(|f| {
            json!({
                "origin": f.origin,
                "case_seed": f.case_seed,
                "instance": f.instance.as_ref().map(Instance::to_json),
                "point": texts(&f.point),
                "stage": f.stage,
                "detail": f.detail,
            })
        });
        json!({
            "family": self.family,
            "total": self.total,
            "passed": self.passed,
            "failures": self.failures(),
            "by_stage": self.by_stage,
            "first_failure": first,
        })
    }

    pub fn summary(&self) -> String {
        let mut s = format!("{}: {}/{} passed", self.family, self.passed, self.total);
        if let Some(f) = &self.first_failure {
            s.push_str(&format!(
                "; first failure at {} (case seed {}): {} stage, {}",
                f.origin, f.case_seed, f.stage, f.detail
            ));
        }
        s
    }
}

struct Case {
    origin: String,
    seed: u64,
    instance: Option<Instance>,
    point: Vec<Q>,
    result: std::result::Result<(), (String, String)>,
}

fn fail(stage: &str, detail: impl ToString) -> std::result::Result<(), (String, String)> {
    Err((stage.to_string(), detail.to_string()))
}

fn run_case(p: &Prepared, h: &[Q], cfg: &FuzzConfig) -> std::result::Result<(), (String, String)> {
    match p.round_trip(h, &cfg.options, cfg.oracle) {
        Ok(_) => Ok(()),
        Err(f) => fail(f.stage(), f),
    }
}

fn instance_cases(cfg: &FuzzConfig, k: usize) -> Vec<Case> {
    let inst_seed = derive_seed(cfg.seed, k as u64, u64::MAX);
    let instance = match &cfg.instance {
        Some(inst) => Ok(inst.clone()),
        None => random_instance(&cfg.family, &mut ChaCha8Rng::seed_from_u64(inst_seed)),
    };
    let prepared = instance.and_then(|i| i.prepare());
    let prepared = match prepared {
        Ok(p) => p,
        Err(e) => {
            return vec![Case {
                origin: format!("instance {k}"),
                seed: inst_seed,
                instance: cfg.instance.clone(),
                point: Vec::new(),
                result: fail("instance", e),
            }]
        }
    };
    (0..cfg.samples_per_instance)
        .map(|i| {
            let seed = derive_seed(cfg.seed, k as u64, i as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let kind = if i % 2 == 0 {
                SampleKind::Vertex
            } else {
                SampleKind::Mix
            };
            let origin = format!("instance {k}, sample {i}");
            match prepared.sample(&mut rng, kind) {
                Ok(h) => Case {
                    origin,
                    seed,
                    instance: Some(prepared.instance.clone()),
                    result: run_case(&prepared, &h, cfg),
                    point: h,
                },
                Err(e) => Case {
                    origin,
                    seed,
                    instance: Some(prepared.instance.clone()),
                    point: Vec::new(),
                    result: fail("sample", e),
                },
            }
        })
        .collect()
}

/// Runs the fuzz campaign. A fixed instance that fails validation is
/// rejected before any sampling.
pub fn fuzz(cfg: &FuzzConfig) -> Result<FuzzReport> {
    if let Some(inst) = &cfg.instance {
        inst.validate()?;
    }
    let mut cases = Vec::new();
    if cfg.family == "lot-sizing" && cfg.instance.is_none() {
        let (inst, h) = lot_sizing_regression();
        let prepared = inst.prepare()?;
        cases.push(Case {
            origin: "regression".into(),
            seed: cfg.seed,
            instance: Some(inst),
            result: run_case(&prepared, &h, cfg),
            point: h,
        });
    }
    let per_instance: Vec<Vec<Case>> = (0..cfg.instances)
        .into_par_iter()
        .map(|k| instance_cases(cfg, k))
        .collect();
    cases.extend(per_instance.into_iter().flatten());

    let mut report = FuzzReport {
        family: cfg
            .instance
            .as_ref()
            .map_or(cfg.family.clone(), |i| i.family().to_string()),
        ..FuzzReport::default()
    };
    for case in cases {
        report.total += 1;
        match case.result {
            Ok(()) => report.passed += 1,
            Err((stage, detail)) => {
                *report.by_stage.entry(stage.clone()).or_default() += 1;
                if report.first_failure.is_none() {
                    report.first_failure = Some(FuzzFailure {
                        origin: case.origin,
                        case_seed: case.seed,
                        instance: case.instance,
                        point: case.point,
                        stage,
                        detail,
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Human-readable point.
pub fn show_point(p: &[Q]) -> String {
    let parts: Vec<String> = p.iter().map(Scalar::to_text).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extended::LotSizingMode;

    #[test]
    fn deterministic_and_parallel_safe() {
        let cfg = FuzzConfig::new("shortest-path", 3, 4, 5);
        let a = fuzz(&cfg).unwrap();
        let b = fuzz(&cfg).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!((a.total, a.passed), (20, 20));
    }

    #[test]
    fn printed_lot_sizing_layout_fails() {
        let mut cfg = FuzzConfig::new("lot-sizing", 1, 2, 4);
        cfg.options.lot_sizing = LotSizingMode::Printed;
        let report = fuzz(&cfg).unwrap();
        assert!(report.failures() >= 1);
        assert_eq!(report.first_failure.unwrap().origin, "regression");
    }

    #[test]
    fn invalid_instance_rejected_before_sampling() {
        let mut cfg = FuzzConfig::new("odd-cycle", 1, 1, 1);
        cfg.instance = Some(Instance::OddCycle { len: 4 });
        assert!(fuzz(&cfg).is_err());
    }
}
