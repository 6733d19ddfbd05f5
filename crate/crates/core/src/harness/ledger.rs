use std::fmt;

use crate::bits::BitWord;
use crate::codec::{DecodeOutcome, SeparateFraming, System};

/// Two-sided 95% normal quantile.
const Z_95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials` at 95% confidence.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 {
        0.0
    } else {
        (centre - half).max(0.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        (centre + half).min(1.0)
    };
    (lo, hi)
}

/// Why a sweep point stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    BlockErrors,
    MaxTrials,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StopReason::BlockErrors => "block_errors",
            StopReason::MaxTrials => "max_trials",
        })
    }
}

/// Monte-Carlo counts for one (system, k, Eb/N0) point.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialLedger {
    pub system: System,
    /// Transmitted bits per block.
    pub n: usize,
    pub k: usize,
    pub ebn0_db: f64,
    pub seed: u64,
    pub trials: u64,
    pub block_errors: u64,
    pub payload_bit_errors: u64,
    pub total_payload_bits: u64,
    pub abandoned: u64,
    pub undetected: u64,
    pub total_queries: u64,
    /// Hard-decision errors on the channel before decoding.
    pub channel_bit_errors: u64,
    /// Errors left in the decoded channel word, before decryption.
    pub codeword_bit_errors: u64,
    pub channel_bits: u64,
    pub stop_reason: Option<StopReason>,
}

impl TrialLedger {
    pub fn new(system: System, n: usize, k: usize, ebn0_db: f64, seed: u64) -> Self {
        TrialLedger {
            system,
            n,
            k,
            ebn0_db,
            seed,
            trials: 0,
            block_errors: 0,
            payload_bit_errors: 0,
            total_payload_bits: 0,
            abandoned: 0,
            undetected: 0,
            total_queries: 0,
            channel_bit_errors: 0,
            codeword_bit_errors: 0,
            channel_bits: 0,
            stop_reason: None,
        }
    }

    pub fn record(&mut self, truth: &BitWord, outcome: &DecodeOutcome) {
        self.trials += 1;
        let bit_errors = outcome.payload_bit_errors(truth) as u64;
        if outcome.is_block_error(truth) {
            self.block_errors += 1;
        }
        self.payload_bit_errors += bit_errors;
        self.total_payload_bits += truth.len() as u64;
        self.abandoned += outcome.abandoned as u64;
        self.undetected += outcome.undetected_error as u64;
        self.total_queries += outcome.queries_used;
        self.channel_bit_errors += outcome.channel_bit_errors as u64;
        self.codeword_bit_errors += outcome.codeword_bit_errors as u64;
        self.channel_bits += outcome.transmitted_bits as u64;
    }

    /// Adds another ledger's counts for the same point.
    pub fn merge(&mut self, other: &TrialLedger) {
        self.trials += other.trials;
        self.block_errors += other.block_errors;
        self.payload_bit_errors += other.payload_bit_errors;
        self.total_payload_bits += other.total_payload_bits;
        self.abandoned += other.abandoned;
        self.undetected += other.undetected;
        self.total_queries += other.total_queries;
        self.channel_bit_errors += other.channel_bit_errors;
        self.codeword_bit_errors += other.codeword_bit_errors;
        self.channel_bits += other.channel_bits;
    }

    pub fn successes(&self) -> u64 {
        self.trials - self.block_errors
    }

    pub fn ber(&self) -> f64 {
        ratio(self.payload_bit_errors, self.total_payload_bits)
    }

    pub fn bler(&self) -> f64 {
        ratio(self.block_errors, self.trials)
    }

    /// Bit error rate of the hard decisions, before decoding or decryption.
    pub fn channel_ber(&self) -> f64 {
        ratio(self.channel_bit_errors, self.channel_bits)
    }

    /// Bit error rate of the decoded channel word (ciphertext for the
    /// baseline and proposed systems, codeword for the separate one).
    pub fn codeword_ber(&self) -> f64 {
        ratio(self.codeword_bit_errors, self.channel_bits)
    }

    pub fn avg_queries(&self) -> f64 {
        ratio(self.total_queries, self.trials)
    }

    pub fn ber_interval(&self) -> (f64, f64) {
        wilson_interval(self.payload_bit_errors, self.total_payload_bits)
    }

    pub fn bler_interval(&self) -> (f64, f64) {
        wilson_interval(self.block_errors, self.trials)
    }

    pub fn channel_ber_interval(&self) -> (f64, f64) {
        wilson_interval(self.channel_bit_errors, self.channel_bits)
    }

    pub fn codeword_ber_interval(&self) -> (f64, f64) {
        wilson_interval(self.codeword_bit_errors, self.channel_bits)
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Fraction of blocks that trigger a retransmission request: every failed
/// block is re-sent once.
pub fn retransmission_rate(ledger: &TrialLedger) -> f64 {
    ledger.bler()
}

/// Delivered payload bits per transmitted channel bit.
///
/// `EqualRate` sends 128 bits per block; `AppendedRedundancy` sends the
/// ciphertext plus `128 - k` parity bits.
pub fn goodput_model(ledger: &TrialLedger, framing: SeparateFraming) -> f64 {
    goodput(ledger.k, ledger.bler(), framing)
}

pub fn goodput(k: usize, bler: f64, framing: SeparateFraming) -> f64 {
    let transmitted = crate::codec::separate_transmitted_bits(k, framing);
    k as f64 * (1.0 - bler) / transmitted as f64
}
