//! Batch runs of keygen followed by the attack, one derived seed per
//! instance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::harness::trial_rng;
use crate::hfe::attack::{attack_gcldf, decrypt_with};
use crate::hfe::scheme::{hfe_encrypt, hfe_keygen};
use crate::skew::Side;

/// Ciphertexts decrypted with each recovered key.
pub const VERIFY_SAMPLES: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Recovered,
    AttackFailed,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub index: usize,
    pub outcome: Outcome,
    pub rounds: usize,
    /// Skew degree of the recovered left factor.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub left_degree: Option<usize>,
    /// Recovered left factor is a permutation and recomposes to `E`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sound: Option<bool>,
    /// Every sampled ciphertext decrypted to a candidate set containing
    /// its plaintext.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decrypt_verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub p: u32,
    pub e: usize,
    pub bound: u64,
    pub max_rounds: usize,
    pub seed: u64,
    pub instances: Vec<InstanceReport>,
    pub successes: usize,
    pub success_rate: f64,
}

fn run_instance(ctx: &FieldCtx, bound: u64, seed: u64, index: usize, max_rounds: usize) -> InstanceReport {
    let mut report = InstanceReport {
        index,
        outcome: Outcome::Error,
        rounds: 0,
        left_degree: None,
        sound: None,
        decrypt_verified: None,
        error: None,
    };
    let mut rng = trial_rng(seed, index as u64);
    let result = hfe_keygen(ctx, bound, &mut rng).and_then(|kp| {
        let e = &kp.public.e_poly;
        match attack_gcldf(e, bound, &mut rng, max_rounds) {
            Ok(rec) => {
                let sound = rec.left.is_permutation() && rec.cofactor.compose_lin(&rec.left, Side::Left, true)? == *e;
                let mut verified = true;
                for _ in 0..VERIFY_SAMPLES {
                    let m = ctx.random(&mut rng, false);
                    let y = hfe_encrypt(&kp.public, m);
                    verified &= decrypt_with(&rec.left, &rec.cofactor, y)?.contains(&m);
                }
                Ok((Outcome::Recovered, rec.rounds, Some(rec.left.skew_degree().unwrap_or(0)), Some(sound), Some(verified)))
            }
            Err(Error::AttackFailed { rounds_used }) => Ok((Outcome::AttackFailed, rounds_used, None, None, None)),
            Err(err) => Err(err),
        }
    });
    match result {
        Ok((outcome, rounds, left_degree, sound, verified)) => {
            report.outcome = outcome;
            report.rounds = rounds;
            report.left_degree = left_degree;
            report.sound = sound;
            report.decrypt_verified = verified;
        }
        Err(err) => report.error = Some(err.to_string()),
    }
    report
}

/// Keygen, attack, and (on success) decryption checks for `instances`
/// seeded instances. Instances run in parallel; the report is ordered by
/// instance index. Per-instance errors are recorded, not propagated.
pub fn run_scenario(ctx: &FieldCtx, bound: u64, instances: usize, seed: u64, max_rounds: usize) -> Result<ScenarioReport> {
    if max_rounds == 0 {
        return Err(Error::InvalidArgument("max_rounds must be at least 1".into()));
    }
    let reports: Vec<InstanceReport> = (0..instances)
        .into_par_iter()
        .map(|i| run_instance(ctx, bound, seed, i, max_rounds))
        .collect();
    let successes = reports.iter().filter(|r| r.outcome == Outcome::Recovered).count();
    let success_rate = if instances == 0 { 0.0 } else { successes as f64 / instances as f64 };
    Ok(ScenarioReport {
        p: ctx.p(),
        e: ctx.e(),
        bound,
        max_rounds,
        seed,
        instances: reports,
        successes,
        success_rate,
    })
}

