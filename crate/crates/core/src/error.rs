use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("expected 32 hexadecimal characters, got {0:?}")]
    InvalidHex(String),
    #[error("length mismatch: expected {expected} bits, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("payload length must satisfy 1 <= k < 128, got {0}")]
    InvalidPayloadBits(usize),
    #[error("invalid code dimensions n = {n}, k = {k} (need 0 < k < n <= 256)")]
    InvalidCode { n: usize, k: usize },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
