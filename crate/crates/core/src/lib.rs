//! Forward error correction from AES padding bits.
//!
//! A message shorter than one AES block is padded with a known sequence
//! before encryption. At the receiver those padding bits act as redundancy:
//! ORBGRAND proposes noise effects in order of increasing logistic weight,
//! and each candidate is decrypted and accepted once the padding matches.
//!
//! The crate contains the AES-128 cipher ([`aes`]), the padding format
//! ([`padding`]), the ORBGRAND pattern generator and guess loop
//! ([`orbgrand`]), a BPSK/AWGN channel ([`channel`]), the three
//! transmit/receive pipelines ([`codec`]) and a reproducible Monte-Carlo
//! sweep harness ([`harness`]).

pub mod aes;
pub mod bits;
pub mod channel;
pub mod codec;
mod error;
pub mod harness;
pub mod orbgrand;
pub mod padding;

pub use bits::{BitBlock, BitWord, BLOCK_BITS};
pub use error::{Error, Result};
