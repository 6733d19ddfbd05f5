//! Monte-Carlo sweep engine.
//!
//! Trials are numbered. Trial `t` of a point draws its payload and channel
//! noise from a ChaCha stream keyed by `(seed, k, Eb/N0, t)`, so every system
//! sees the same payloads and, when the block lengths agree, the same noise.
//! Workers evaluate trials in index-ordered chunks and the results are
//! folded in index order, stopping at the exact trial where the stop rule
//! fires. The output therefore does not depend on the number of workers.

mod config;
mod ledger;
mod output;

pub use config::{parse_ebn0_list, parse_systems, Preset, SweepConfig, DEFAULT_KEY_HEX};
pub use ledger::{
    goodput, goodput_model, retransmission_rate, wilson_interval, StopReason, TrialLedger,
};
pub use output::{
    format_results, format_summary, gnuplot_script, parse_results, write_results, ResultRow,
    CSV_HEADER,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::aes::AesKey;
use crate::bits::BitWord;
use crate::codec::{DecodeOutcome, Scenario, System};
use crate::orbgrand::GuessConfig;
use crate::padding::PaddingSpec;
use crate::Error;

const FIRST_CHUNK: u64 = 256;
const MAX_CHUNK: u64 = 1 << 16;

/// Random stream for one trial.
pub fn trial_rng(seed: u64, payload_bits: usize, ebn0_db: f64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(payload_bits as u64).to_le_bytes());
    key[16..24].copy_from_slice(&ebn0_db.to_bits().to_le_bytes());
    key[24..].copy_from_slice(&trial.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Uniform payload from `F_2^k`.
pub fn random_payload<R: Rng + ?Sized>(rng: &mut R, k: usize) -> BitWord {
    BitWord::from_bits((0..k).map(|_| rng.random::<bool>()))
}

/// Stop rule for one sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub min_block_errors: u64,
    pub max_trials: u64,
}

impl StopRule {
    pub fn from_config(config: &SweepConfig) -> Self {
        StopRule {
            min_block_errors: config.min_block_errors,
            max_trials: config.max_trials,
        }
    }
}

fn run_trial(
    scenario: &Scenario,
    seed: u64,
    ebn0_db: f64,
    trial: u64,
) -> Result<(BitWord, DecodeOutcome), Error> {
    let mut rng = trial_rng(seed, scenario.payload_bits(), ebn0_db, trial);
    let payload = random_payload(&mut rng, scenario.payload_bits());
    let outcome = scenario.run(&payload, ebn0_db, &mut rng)?;
    Ok((payload, outcome))
}

/// Runs trials of one scenario at one Eb/N0 until the stop rule fires.
///
/// Must be called inside the thread pool that should do the work.
pub fn run_point(
    scenario: &Scenario,
    ebn0_db: f64,
    seed: u64,
    stop: StopRule,
) -> Result<TrialLedger, Error> {
    let mut ledger = TrialLedger::new(
        scenario.system,
        scenario.transmitted_bits(),
        scenario.payload_bits(),
        ebn0_db,
        seed,
    );
    let mut chunk = FIRST_CHUNK;
    while ledger.stop_reason.is_none() {
        let start = ledger.trials;
        let end = (start + chunk).min(stop.max_trials);
        let results: Vec<(BitWord, DecodeOutcome)> = (start..end)
            .into_par_iter()
            .map(|trial| run_trial(scenario, seed, ebn0_db, trial))
            .collect::<Result<_, _>>()?;
        for (payload, outcome) in &results {
            ledger.record(payload, outcome);
            if ledger.block_errors >= stop.min_block_errors {
                ledger.stop_reason = Some(StopReason::BlockErrors);
                break;
            }
            if ledger.trials >= stop.max_trials {
                ledger.stop_reason = Some(StopReason::MaxTrials);
                break;
            }
        }
        chunk = (chunk * 2).min(MAX_CHUNK);
    }
    Ok(ledger)
}

fn thread_pool(threads: usize) -> Result<rayon::ThreadPool, Error> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

/// Scenario for `system` under `config`.
pub fn scenario(config: &SweepConfig, system: System) -> Result<Scenario, Error> {
    let spec = PaddingSpec::new(config.payload_bits, config.pad_rule)?;
    let guess = GuessConfig {
        order: config.pattern_order,
        max_queries: config.max_queries,
    };
    Scenario::new(
        system,
        AesKey::new(config.key),
        spec,
        guess,
        config.separate_framing,
        config.rlc_seed,
    )
}

/// Runs every (system, Eb/N0) point of the sweep, systems outermost.
///
/// `progress` is called after each finished point.
pub fn run_sweep_with<F>(config: &SweepConfig, mut progress: F) -> Result<Vec<TrialLedger>, Error>
where
    F: FnMut(&TrialLedger),
{
    config.validate()?;
    let scenarios = config
        .systems
        .iter()
        .map(|&system| scenario(config, system))
        .collect::<Result<Vec<_>, _>>()?;
    let pool = thread_pool(config.threads)?;
    let stop = StopRule::from_config(config);
    let mut ledgers = Vec::with_capacity(scenarios.len() * config.ebn0_db.len());
    for scenario in &scenarios {
        for &ebn0_db in &config.ebn0_db {
            let ledger = pool.install(|| run_point(scenario, ebn0_db, config.seed, stop))?;
            progress(&ledger);
            ledgers.push(ledger);
        }
    }
    Ok(ledgers)
}

pub fn run_sweep(config: &SweepConfig) -> Result<Vec<TrialLedger>, Error> {
    run_sweep_with(config, |_| {})
}
