//! Padded-plaintext format and the codebook membership predicate.
//!
//! A `k`-bit payload occupies the leading bits of the 128-bit plaintext and a
//! fixed `128 - k`-bit pad sequence fills the rest. The receiver knows `k` and
//! the pad rule, so "the decrypted candidate ends in the pad sequence" is a
//! membership test for the codebook `{ encrypt(pad(p)) }`.

use std::fmt;
use std::str::FromStr;

use crate::bits::{BitBlock, BitWord, BLOCK_BITS};
use crate::Error;

/// How the pad bits are filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PadRule {
    #[default]
    Zeros,
    /// The given byte repeated, most significant bit first, truncated to the
    /// pad length.
    Byte(u8),
}

impl FromStr for PadRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s == "zeros" {
            return Ok(PadRule::Zeros);
        }
        if let Some(hex) = s.strip_prefix("byte:") {
            let hex = hex.trim_start_matches("0x");
            if hex.len() <= 2 {
                if let Ok(byte) = u8::from_str_radix(hex, 16) {
                    return Ok(PadRule::Byte(byte));
                }
            }
        }
        Err(Error::Config(format!(
            "pad_rule must be `zeros` or `byte:<hex>`, got {s:?}"
        )))
    }
}

impl fmt::Display for PadRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PadRule::Zeros => f.write_str("zeros"),
            PadRule::Byte(b) => write!(f, "byte:{b:02x}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PaddingSpec {
    payload_bits: usize,
    rule: PadRule,
    pad_mask: u128,
    pad_value: u128,
}

impl PaddingSpec {
    pub fn new(payload_bits: usize, rule: PadRule) -> Result<Self, Error> {
        if payload_bits == 0 || payload_bits >= BLOCK_BITS {
            return Err(Error::InvalidPayloadBits(payload_bits));
        }
        let pad_bits = BLOCK_BITS - payload_bits;
        let pad_mask = u128::MAX >> payload_bits;
        let pad_value = match rule {
            PadRule::Zeros => 0,
            PadRule::Byte(byte) => {
                let mut block = BitBlock::ZERO;
                for j in 0..pad_bits {
                    block.set(payload_bits + j, (byte >> (7 - j % 8)) & 1 == 1);
                }
                block.as_u128()
            }
        };
        Ok(PaddingSpec {
            payload_bits,
            rule,
            pad_mask,
            pad_value,
        })
    }

    pub fn zeros(payload_bits: usize) -> Result<Self, Error> {
        Self::new(payload_bits, PadRule::Zeros)
    }

    /// Payload length `k`.
    pub fn payload_bits(&self) -> usize {
        self.payload_bits
    }

    pub fn pad_bits(&self) -> usize {
        BLOCK_BITS - self.payload_bits
    }

    pub fn rule(&self) -> PadRule {
        self.rule
    }

    /// The trailing pad sequence as the low bits of an otherwise zero block.
    pub fn pad_block(&self) -> BitBlock {
        BitBlock::from_u128(self.pad_value)
    }
}

pub fn pad_payload(payload: &BitWord, spec: &PaddingSpec) -> Result<BitBlock, Error> {
    if payload.len() != spec.payload_bits {
        return Err(Error::LengthMismatch {
            expected: spec.payload_bits,
            found: payload.len(),
        });
    }
    let mut block = spec.pad_block();
    for (i, bit) in payload.iter().enumerate() {
        block.set(i, bit);
    }
    Ok(block)
}

/// True iff the trailing `128 - k` bits equal the pad sequence exactly.
#[inline]
pub fn check_padding(block: BitBlock, spec: &PaddingSpec) -> bool {
    (block.as_u128() ^ spec.pad_value) & spec.pad_mask == 0
}

/// Leading `k` bits of the block; the pad is ignored.
pub fn extract_payload(block: BitBlock, spec: &PaddingSpec) -> BitWord {
    BitWord::from_bits(block.bits().take(spec.payload_bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aes::{derive_schedule, encrypt_block};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_word(rng: &mut impl Rng, len: usize) -> BitWord {
        BitWord::from_bits((0..len).map(|_| rng.random::<bool>()))
    }

    #[test]
    fn ones_payload_then_zero_pad() {
        let spec = PaddingSpec::zeros(120).unwrap();
        let block = pad_payload(&BitWord::from_bits(vec![true; 120]), &spec).unwrap();
        assert_eq!(block, BitBlock::from_u128(u128::MAX << 8));
    }

    #[test]
    fn zero_payload_gives_zero_block() {
        let spec = PaddingSpec::zeros(116).unwrap();
        assert_eq!(
            pad_payload(&BitWord::zeros(116), &spec).unwrap(),
            BitBlock::ZERO
        );
        assert_eq!(extract_payload(BitBlock::ZERO, &spec), BitWord::zeros(116));
    }

    #[test]
    fn wrong_payload_length_is_rejected() {
        let spec = PaddingSpec::zeros(116).unwrap();
        assert!(matches!(
            pad_payload(&BitWord::zeros(115), &spec),
            Err(Error::LengthMismatch {
                expected: 116,
                found: 115
            })
        ));
    }

    #[test]
    fn payload_bits_must_leave_room_for_padding() {
        assert!(PaddingSpec::zeros(0).is_err());
        assert!(PaddingSpec::zeros(128).is_err());
        assert!(PaddingSpec::zeros(127).is_ok());
    }

    #[test]
    fn byte_rule_pad_sequence() {
        let spec = PaddingSpec::new(116, "byte:a5".parse().unwrap()).unwrap();
        // 12 pad bits: 1010 0101 1010
        assert_eq!(spec.pad_block().as_u128(), 0b1010_0101_1010);
        let payload = BitWord::from_bits((0..116).map(|i| i % 3 == 0));
        let block = pad_payload(&payload, &spec).unwrap();
        assert!(check_padding(block, &spec));
        assert!(!check_padding(block, &PaddingSpec::zeros(116).unwrap()));
        assert_eq!(spec.rule().to_string(), "byte:a5");
    }

    #[test]
    fn pad_rule_parsing() {
        assert_eq!("zeros".parse::<PadRule>().unwrap(), PadRule::Zeros);
        assert_eq!("byte:0x0c".parse::<PadRule>().unwrap(), PadRule::Byte(0x0c));
        assert!("byte:123".parse::<PadRule>().is_err());
        assert!("pkcs7".parse::<PadRule>().is_err());
    }

    #[test]
    fn any_flipped_pad_bit_fails() {
        let spec = PaddingSpec::zeros(120).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let block = pad_payload(&random_word(&mut rng, 120), &spec).unwrap();
        for i in 120..128 {
            let mut corrupted = block;
            corrupted.flip(i);
            assert!(!check_padding(corrupted, &spec));
        }
    }

    #[test]
    fn extraction_ignores_corrupted_pad() {
        let spec = PaddingSpec::zeros(120).unwrap();
        let payload = BitWord::from_bits((0..120).map(|i| (0xABu8 >> (7 - i % 8)) & 1 == 1));
        let mut block = pad_payload(&payload, &spec).unwrap();
        block.flip(121);
        block.flip(127);
        assert_eq!(extract_payload(block, &spec), payload);
    }

    #[test]
    fn random_blocks_pass_at_expected_rate() {
        let spec = PaddingSpec::zeros(120).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let samples = 1_000_000u32;
        let passes = (0..samples)
            .filter(|_| check_padding(BitBlock::from_u128(rng.random()), &spec))
            .count() as f64;
        let p = 1.0 / 256.0;
        let mean = samples as f64 * p;
        let sd = (samples as f64 * p * (1.0 - p)).sqrt();
        assert!(
            (passes - mean).abs() < 3.0 * sd,
            "{passes} passes, expected {mean} +- {sd}"
        );
    }

    #[test]
    fn codebook_of_reduced_payload_has_full_size() {
        // k = 16: every payload maps to a distinct ciphertext.
        let spec = PaddingSpec::zeros(16).unwrap();
        let key = derive_schedule(*b"sixteen byte key");
        let mut codebook = std::collections::HashSet::new();
        for value in 0u32..(1 << 16) {
            let payload = BitWord::from_bits((0..16).map(|i| (value >> (15 - i)) & 1 == 1));
            codebook.insert(encrypt_block(pad_payload(&payload, &spec).unwrap(), &key));
        }
        assert_eq!(codebook.len(), 1 << 16);
    }

    proptest! {
        #[test]
        fn padded_payload_is_a_member(seed in any::<u64>(), k in 1usize..128) {
            let spec = PaddingSpec::zeros(k).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let payload = random_word(&mut rng, k);
            let block = pad_payload(&payload, &spec).unwrap();
            prop_assert!(check_padding(block, &spec));
            prop_assert_eq!(extract_payload(block, &spec), payload);
        }
    }
}
