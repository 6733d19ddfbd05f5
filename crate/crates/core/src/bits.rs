//! Fixed-width binary words.
//!
//! [`BitBlock`] is the 128-bit AES block. Bit 0 is the most significant bit
//! of byte 0, so the in-memory `u128` is the big-endian reading of the 16
//! block bytes. [`BitWord`] is a variable-length word of up to 256 bits used
//! for payloads, linear-code codewords and syndromes; it follows the same
//! "bit 0 first" convention when converted to and from a block.

use std::fmt;
use std::ops::{BitXor, BitXorAssign};

use crate::Error;

/// Number of bits in an AES block.
pub const BLOCK_BITS: usize = 128;

/// Largest length a [`BitWord`] can hold.
pub const MAX_WORD_BITS: usize = 256;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BitBlock(u128);

impl BitBlock {
    pub const ZERO: BitBlock = BitBlock(0);

    pub const fn from_u128(value: u128) -> Self {
        BitBlock(value)
    }

    pub const fn as_u128(self) -> u128 {
        self.0
    }

    pub fn from_bytes(bytes: [u8; 16]) -> Self {
        BitBlock(u128::from_be_bytes(bytes))
    }

    pub fn to_bytes(self) -> [u8; 16] {
        self.0.to_be_bytes()
    }

    /// Parses exactly 32 hexadecimal characters.
    pub fn from_hex(text: &str) -> Result<Self, Error> {
        let text = text.trim();
        if text.len() != 32 || !text.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(Error::InvalidHex(text.to_string()));
        }
        u128::from_str_radix(text, 16)
            .map(BitBlock)
            .map_err(|_| Error::InvalidHex(text.to_string()))
    }

    /// Single-bit mask for position `i` (0-indexed from the first bit).
    #[inline]
    pub const fn mask(i: usize) -> u128 {
        1u128 << (BLOCK_BITS - 1 - i)
    }

    #[inline]
    pub fn get(self, i: usize) -> bool {
        assert!(i < BLOCK_BITS, "bit index {i} out of range");
        self.0 & Self::mask(i) != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < BLOCK_BITS, "bit index {i} out of range");
        if value {
            self.0 |= Self::mask(i);
        } else {
            self.0 &= !Self::mask(i);
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < BLOCK_BITS, "bit index {i} out of range");
        self.0 ^= Self::mask(i);
    }

    pub fn count_ones(self) -> u32 {
        self.0.count_ones()
    }

    /// Bits in transmission order.
    pub fn bits(self) -> impl Iterator<Item = bool> {
        (0..BLOCK_BITS).map(move |i| self.get(i))
    }
}

impl BitXor for BitBlock {
    type Output = BitBlock;

    fn bitxor(self, rhs: BitBlock) -> BitBlock {
        BitBlock(self.0 ^ rhs.0)
    }
}

impl BitXorAssign for BitBlock {
    fn bitxor_assign(&mut self, rhs: BitBlock) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Debug for BitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitBlock({:032x})", self.0)
    }
}

impl fmt::LowerHex for BitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:032x}", self.0)
    }
}

/// Variable-length binary word of at most [`MAX_WORD_BITS`] bits.
///
/// Bits beyond `len` are always zero, so derived equality is value equality.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BitWord {
    words: [u64; 4],
    len: usize,
}

impl BitWord {
    pub fn zeros(len: usize) -> Self {
        assert!(
            len <= MAX_WORD_BITS,
            "word length {len} exceeds {MAX_WORD_BITS}"
        );
        BitWord { words: [0; 4], len }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut word = BitWord::zeros(0);
        for bit in bits {
            assert!(
                word.len < MAX_WORD_BITS,
                "word longer than {MAX_WORD_BITS} bits"
            );
            word.len += 1;
            word.set(word.len - 1, bit);
        }
        word
    }

    /// Unit vector `e_i` of length `len`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut word = BitWord::zeros(len);
        word.set(i, true);
        word
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let bit = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// Parity of the bitwise AND, i.e. the inner product over GF(2).
    pub fn dot(&self, other: &BitWord) -> bool {
        let ones: u32 = self
            .words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    pub fn hamming_distance(&self, other: &BitWord) -> u32 {
        assert_eq!(self.len, other.len, "length mismatch");
        (*self ^ *other).count_ones()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Bits `start..start + len` as a new word.
    pub fn slice(&self, start: usize, len: usize) -> BitWord {
        assert!(start + len <= self.len, "slice out of range");
        BitWord::from_bits((start..start + len).map(|i| self.get(i)))
    }

    /// Concatenation `self || tail`.
    pub fn concat(&self, tail: &BitWord) -> BitWord {
        BitWord::from_bits(self.iter().chain(tail.iter()))
    }

    pub fn to_block(&self) -> Result<BitBlock, Error> {
        if self.len != BLOCK_BITS {
            return Err(Error::LengthMismatch {
                expected: BLOCK_BITS,
                found: self.len,
            });
        }
        let mut block = BitBlock::ZERO;
        for i in 0..BLOCK_BITS {
            block.set(i, self.get(i));
        }
        Ok(block)
    }
}

impl From<BitBlock> for BitWord {
    fn from(block: BitBlock) -> Self {
        BitWord::from_bits(block.bits())
    }
}

impl BitXor for BitWord {
    type Output = BitWord;

    fn bitxor(mut self, rhs: BitWord) -> BitWord {
        self ^= rhs;
        self
    }
}

impl BitXorAssign for BitWord {
    #[inline]
    fn bitxor_assign(&mut self, rhs: BitWord) {
        debug_assert_eq!(self.len, rhs.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(rhs.words.iter()) {
            *a ^= b;
        }
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord[{}](", self.len)?;
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}
