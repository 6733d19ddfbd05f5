//! End-to-end transmit/receive pipelines.
//!
//! * **baseline**: pad, encrypt, send, slice, decrypt. No correction.
//! * **separate**: a systematic random linear code carries the data and
//!   ORBGRAND decodes against the zero-syndrome test before decryption.
//! * **proposed**: the transmitter is the baseline one; the receiver runs
//!   ORBGRAND with "decrypts to a block ending in the pad sequence" as the
//!   membership test.
//!
//! Every pipeline reports the payload it delivered, the number of membership
//! queries spent, and whether the guess loop gave up.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aes::{decrypt_block, encrypt_block, AesKey};
use crate::bits::{BitBlock, BitWord, BLOCK_BITS, MAX_WORD_BITS};
use crate::channel::{self, ChannelConfig, SoftVector};
use crate::orbgrand::{guess, GuessConfig, GuessOutcome};
use crate::padding::{check_padding, extract_payload, pad_payload, PaddingSpec};
use crate::Error;

/// Systematic binary linear code with generator `[I | P]` and parity check
/// `[P^T | I]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearCode {
    n: usize,
    k: usize,
    seed: u64,
    /// Row `i` of `P`, length `n - k`.
    parity_rows: Vec<BitWord>,
    /// Column `j` of `H`, length `n - k`.
    columns: Vec<BitWord>,
}

/// Random linear code with `P` drawn uniformly from a stream seeded by `seed`.
pub fn generate_rlc(n: usize, k: usize, seed: u64) -> Result<LinearCode, Error> {
    if k == 0 || k >= n || n > MAX_WORD_BITS {
        return Err(Error::InvalidCode { n, k });
    }
    let r = n - k;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parity_rows: Vec<BitWord> = (0..k)
        .map(|_| BitWord::from_bits((0..r).map(|_| rng.random::<bool>())))
        .collect();
    let columns = parity_rows
        .iter()
        .copied()
        .chain((0..r).map(|j| BitWord::unit(r, j)))
        .collect();
    Ok(LinearCode {
        n,
        k,
        seed,
        parity_rows,
        columns,
    })
}

impl LinearCode {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `G = [I_k | P]`, one word per row.
    pub fn generator_matrix(&self) -> Vec<BitWord> {
        (0..self.k)
            .map(|i| BitWord::unit(self.k, i).concat(&self.parity_rows[i]))
            .collect()
    }

    /// `H = [P^T | I_{n-k}]`, one word per row.
    pub fn parity_check_matrix(&self) -> Vec<BitWord> {
        (0..self.redundancy())
            .map(|j| BitWord::from_bits(self.columns.iter().map(|col| col.get(j))))
            .collect()
    }

    /// Column `position` of `H`.
    #[inline]
    pub fn column(&self, position: usize) -> &BitWord {
        &self.columns[position]
    }

    pub fn encode(&self, message: &BitWord) -> Result<BitWord, Error> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                found: message.len(),
            });
        }
        let mut parity = BitWord::zeros(self.redundancy());
        for (i, bit) in message.iter().enumerate() {
            if bit {
                parity ^= self.parity_rows[i];
            }
        }
        Ok(message.concat(&parity))
    }

    pub fn syndrome(&self, word: &BitWord) -> BitWord {
        assert_eq!(word.len(), self.n, "word length must equal n");
        let mut syndrome = BitWord::zeros(self.redundancy());
        for (position, bit) in word.iter().enumerate() {
            if bit {
                syndrome ^= self.columns[position];
            }
        }
        syndrome
    }

    pub fn is_codeword(&self, word: &BitWord) -> bool {
        self.syndrome(word).is_zero()
    }

    /// Systematic part of a codeword.
    pub fn message(&self, codeword: &BitWord) -> BitWord {
        codeword.slice(0, self.k)
    }
}

/// Which transmit/receive pair to simulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum System {
    Baseline,
    Separate,
    Proposed,
}

impl System {
    pub const ALL: [System; 3] = [System::Baseline, System::Separate, System::Proposed];
}

impl FromStr for System {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "baseline" => Ok(System::Baseline),
            "separate" => Ok(System::Separate),
            "proposed" => Ok(System::Proposed),
            other => Err(Error::Config(format!(
                "system must be `baseline`, `separate` or `proposed`, got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::Baseline => "baseline",
            System::Separate => "separate",
            System::Proposed => "proposed",
        })
    }
}

/// How the separate system is laid out on the channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeparateFraming {
    /// `(n, k)` code carrying the payload directly in an `n`-bit codeword;
    /// encryption is treated as transparent and left out.
    #[default]
    EqualRate,
    /// The 128-bit ciphertext is the message of a `(128 + r, 128)` code,
    /// with `r = 128 - k` appended parity bits.
    AppendedRedundancy,
}

impl FromStr for SeparateFraming {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "equal_rate" => Ok(SeparateFraming::EqualRate),
            "appended_redundancy" => Ok(SeparateFraming::AppendedRedundancy),
            other => Err(Error::Config(format!(
                "separate_framing must be `equal_rate` or `appended_redundancy`, got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for SeparateFraming {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeparateFraming::EqualRate => "equal_rate",
            SeparateFraming::AppendedRedundancy => "appended_redundancy",
        })
    }
}

/// What one pipeline run delivered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub payload: BitWord,
    pub queries_used: u64,
    pub abandoned: bool,
    /// Membership passed (or, for the baseline, nothing was checked) but the
    /// delivered payload differs from the transmitted one.
    pub undetected_error: bool,
    /// Hard-decision errors on the channel, before any decoding.
    pub channel_bit_errors: u32,
    /// Errors left in the decoded channel word (ciphertext or codeword),
    /// before decryption.
    pub codeword_bit_errors: u32,
    pub transmitted_bits: usize,
}

impl DecodeOutcome {
    pub fn payload_bit_errors(&self, truth: &BitWord) -> u32 {
        self.payload.hamming_distance(truth)
    }

    pub fn is_block_error(&self, truth: &BitWord) -> bool {
        self.payload != *truth
    }
}

fn send<R: Rng + ?Sized>(
    symbols: &[f64],
    rate: f64,
    ebn0_db: f64,
    rng: &mut R,
) -> Result<SoftVector, Error> {
    let cfg = ChannelConfig::new(ebn0_db, rate, 0)?;
    Ok(channel::add_noise_with(symbols, &cfg, rng))
}

fn check_payload(payload: &BitWord, k: usize) -> Result<(), Error> {
    if payload.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            found: payload.len(),
        });
    }
    Ok(())
}

fn rate(spec: &PaddingSpec, transmitted: usize) -> f64 {
    spec.payload_bits() as f64 / transmitted as f64
}

fn channel_errors(sent: &BitWord, soft: &SoftVector) -> u32 {
    sent.hamming_distance(&channel::hard_decision(soft))
}

/// Slice and decrypt; no error correction.
pub fn receive_baseline(soft: &SoftVector, key: &AesKey) -> Result<BitBlock, Error> {
    let hard = channel::hard_decision_block(soft)?;
    Ok(decrypt_block(hard, key))
}

pub fn pipeline_baseline<R: Rng + ?Sized>(
    payload: &BitWord,
    key: &AesKey,
    spec: &PaddingSpec,
    ebn0_db: f64,
    rng: &mut R,
) -> Result<DecodeOutcome, Error> {
    let cipher = encrypt_block(pad_payload(payload, spec)?, key);
    let soft = send(
        &channel::modulate_block(cipher),
        rate(spec, BLOCK_BITS),
        ebn0_db,
        rng,
    )?;
    let delivered = extract_payload(receive_baseline(&soft, key)?, spec);
    let channel_bit_errors = channel_errors(&cipher.into(), &soft);
    Ok(DecodeOutcome {
        undetected_error: delivered != *payload,
        payload: delivered,
        queries_used: 1,
        abandoned: false,
        channel_bit_errors,
        codeword_bit_errors: channel_bit_errors,
        transmitted_bits: BLOCK_BITS,
    })
}

/// Joint ORBGRAND decoding and decryption.
///
/// Returns the accepted plaintext (or the decrypted hard decision when the
/// budget runs out) together with the guess statistics.
pub fn receive_proposed(
    soft: &SoftVector,
    key: &AesKey,
    spec: &PaddingSpec,
    config: &GuessConfig,
) -> Result<(BitBlock, GuessOutcome), Error> {
    let hard = channel::hard_decision_block(soft)?.as_u128();
    let reliabilities = soft.reliabilities();
    let mut accepted = None;
    let outcome = guess(&reliabilities, config, |flips| {
        let mut candidate = hard;
        for &position in flips {
            candidate ^= BitBlock::mask(position);
        }
        let plain = decrypt_block(BitBlock::from_u128(candidate), key);
        let member = check_padding(plain, spec);
        if member {
            accepted = Some(plain);
        }
        member
    });
    let plain = accepted.unwrap_or_else(|| decrypt_block(BitBlock::from_u128(hard), key));
    Ok((plain, outcome))
}

pub fn pipeline_proposed<R: Rng + ?Sized>(
    payload: &BitWord,
    key: &AesKey,
    spec: &PaddingSpec,
    ebn0_db: f64,
    config: &GuessConfig,
    rng: &mut R,
) -> Result<DecodeOutcome, Error> {
    let cipher = encrypt_block(pad_payload(payload, spec)?, key);
    let soft = send(
        &channel::modulate_block(cipher),
        rate(spec, BLOCK_BITS),
        ebn0_db,
        rng,
    )?;
    let (plain, outcome) = receive_proposed(&soft, key, spec, config)?;
    let delivered = extract_payload(plain, spec);
    let abandoned = outcome.abandoned();
    let mut corrected = channel::hard_decision_block(&soft)?;
    if let Some(correction) = &outcome.correction {
        for &position in &correction.positions {
            corrected.flip(position);
        }
    }
    Ok(DecodeOutcome {
        undetected_error: !abandoned && delivered != *payload,
        payload: delivered,
        queries_used: outcome.queries,
        abandoned,
        channel_bit_errors: channel_errors(&cipher.into(), &soft),
        codeword_bit_errors: (corrected ^ cipher).count_ones(),
        transmitted_bits: BLOCK_BITS,
    })
}

/// ORBGRAND against the zero-syndrome test.
///
/// Returns the decoded word (the hard decision itself when the budget runs
/// out) together with the guess statistics.
pub fn receive_separate(
    soft: &SoftVector,
    code: &LinearCode,
    config: &GuessConfig,
) -> Result<(BitWord, GuessOutcome), Error> {
    if soft.len() != code.n() {
        return Err(Error::LengthMismatch {
            expected: code.n(),
            found: soft.len(),
        });
    }
    let hard = channel::hard_decision(soft);
    let base = code.syndrome(&hard);
    let reliabilities = soft.reliabilities();
    let outcome = guess(&reliabilities, config, |flips| {
        let mut syndrome = base;
        for &position in flips {
            syndrome ^= *code.column(position);
        }
        syndrome.is_zero()
    });
    let mut decoded = hard;
    if let Some(correction) = &outcome.correction {
        for &position in &correction.positions {
            decoded.flip(position);
        }
    }
    Ok((decoded, outcome))
}

/// Number of channel bits the separate system sends for a `k`-bit payload.
pub fn separate_transmitted_bits(payload_bits: usize, framing: SeparateFraming) -> usize {
    match framing {
        SeparateFraming::EqualRate => BLOCK_BITS,
        SeparateFraming::AppendedRedundancy => 2 * BLOCK_BITS - payload_bits,
    }
}

/// The code the separate system needs for a payload length and framing.
pub fn separate_code(
    payload_bits: usize,
    framing: SeparateFraming,
    seed: u64,
) -> Result<LinearCode, Error> {
    let n = separate_transmitted_bits(payload_bits, framing);
    match framing {
        SeparateFraming::EqualRate => generate_rlc(n, payload_bits, seed),
        SeparateFraming::AppendedRedundancy => generate_rlc(n, BLOCK_BITS, seed),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn pipeline_separate<R: Rng + ?Sized>(
    payload: &BitWord,
    key: &AesKey,
    spec: &PaddingSpec,
    code: &LinearCode,
    framing: SeparateFraming,
    ebn0_db: f64,
    config: &GuessConfig,
    rng: &mut R,
) -> Result<DecodeOutcome, Error> {
    check_payload(payload, spec.payload_bits())?;
    let sent = match framing {
        SeparateFraming::EqualRate => code.encode(payload)?,
        SeparateFraming::AppendedRedundancy => {
            let cipher = encrypt_block(pad_payload(payload, spec)?, key);
            code.encode(&cipher.into())?
        }
    };
    let soft = send(
        &channel::modulate(&sent),
        rate(spec, code.n()),
        ebn0_db,
        rng,
    )?;
    let (decoded, outcome) = receive_separate(&soft, code, config)?;
    let delivered = match framing {
        SeparateFraming::EqualRate => code.message(&decoded),
        SeparateFraming::AppendedRedundancy => {
            let cipher = code.message(&decoded).to_block()?;
            extract_payload(decrypt_block(cipher, key), spec)
        }
    };
    let abandoned = outcome.abandoned();
    Ok(DecodeOutcome {
        undetected_error: !abandoned && delivered != *payload,
        payload: delivered,
        queries_used: outcome.queries,
        abandoned,
        channel_bit_errors: channel_errors(&sent, &soft),
        codeword_bit_errors: decoded.hamming_distance(&sent),
        transmitted_bits: code.n(),
    })
}

/// Everything needed to run trials of one system.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub system: System,
    pub key: AesKey,
    pub spec: PaddingSpec,
    pub guess: GuessConfig,
    pub framing: SeparateFraming,
    code: Option<LinearCode>,
}

impl Scenario {
    pub fn new(
        system: System,
        key: AesKey,
        spec: PaddingSpec,
        guess: GuessConfig,
        framing: SeparateFraming,
        rlc_seed: u64,
    ) -> Result<Self, Error> {
        let code = match system {
            System::Separate => Some(separate_code(spec.payload_bits(), framing, rlc_seed)?),
            _ => None,
        };
        Ok(Scenario {
            system,
            key,
            spec,
            guess,
            framing,
            code,
        })
    }

    pub fn payload_bits(&self) -> usize {
        self.spec.payload_bits()
    }

    pub fn transmitted_bits(&self) -> usize {
        self.code.as_ref().map_or(BLOCK_BITS, LinearCode::n)
    }

    pub fn code(&self) -> Option<&LinearCode> {
        self.code.as_ref()
    }

    pub fn run<R: Rng + ?Sized>(
        &self,
        payload: &BitWord,
        ebn0_db: f64,
        rng: &mut R,
    ) -> Result<DecodeOutcome, Error> {
        match self.system {
            System::Baseline => pipeline_baseline(payload, &self.key, &self.spec, ebn0_db, rng),
            System::Proposed => {
                pipeline_proposed(payload, &self.key, &self.spec, ebn0_db, &self.guess, rng)
            }
            System::Separate => pipeline_separate(
                payload,
                &self.key,
                &self.spec,
                self.code
                    .as_ref()
                    .expect("separate scenario carries a code"),
                self.framing,
                ebn0_db,
                &self.guess,
                rng,
            ),
        }
    }
}
