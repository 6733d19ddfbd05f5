//! AES-128 block cipher (FIPS-197), single blocks only.
//!
//! Table-driven and not constant time. The guess loop at the receiver
//! decrypts one candidate block per query, so decryption throughput is what
//! matters here, not side-channel resistance.

use crate::bits::BitBlock;
use crate::Error;

const ROUNDS: usize = 10;

const fn xtime(x: u8) -> u8 {
    (x << 1) ^ if x & 0x80 != 0 { 0x1b } else { 0 }
}

const fn gf_mul(mut a: u8, mut b: u8) -> u8 {
    let mut product = 0u8;
    while b != 0 {
        if b & 1 != 0 {
            product ^= a;
        }
        a = xtime(a);
        b >>= 1;
    }
    product
}

const fn build_sbox() -> [u8; 256] {
    // 3 generates the multiplicative group of GF(2^8); walk it to get inverses.
    let mut exp = [0u8; 256];
    let mut log = [0u8; 256];
    let mut x = 1u8;
    let mut i = 0;
    while i < 255 {
        exp[i] = x;
        log[x as usize] = i as u8;
        x = gf_mul(x, 3);
        i += 1;
    }
    let mut sbox = [0u8; 256];
    let mut v = 0;
    while v < 256 {
        let inv = if v == 0 {
            0
        } else {
            exp[(255 - log[v] as usize) % 255]
        };
        sbox[v] = inv
            ^ inv.rotate_left(1)
            ^ inv.rotate_left(2)
            ^ inv.rotate_left(3)
            ^ inv.rotate_left(4)
            ^ 0x63;
        v += 1;
    }
    sbox
}

const fn invert(table: &[u8; 256]) -> [u8; 256] {
    let mut inverse = [0u8; 256];
    let mut i = 0;
    while i < 256 {
        inverse[table[i] as usize] = i as u8;
        i += 1;
    }
    inverse
}

const fn column(a: u8, b: u8, c: u8, d: u8) -> u32 {
    ((a as u32) << 24) | ((b as u32) << 16) | ((c as u32) << 8) | d as u32
}

// tables[0][x] is the MixColumns (or InvMixColumns) image of the substituted
// byte in row 0; tables[r] is the same column rotated right by 8r bits.
const fn build_round_tables(sbox: &[u8; 256], coeffs: [u8; 4]) -> [[u32; 256]; 4] {
    let mut tables = [[0u32; 256]; 4];
    let mut x = 0;
    while x < 256 {
        let s = sbox[x];
        let word = column(
            gf_mul(s, coeffs[0]),
            gf_mul(s, coeffs[1]),
            gf_mul(s, coeffs[2]),
            gf_mul(s, coeffs[3]),
        );
        tables[0][x] = word;
        tables[1][x] = word.rotate_right(8);
        tables[2][x] = word.rotate_right(16);
        tables[3][x] = word.rotate_right(24);
        x += 1;
    }
    tables
}

pub(crate) const SBOX: [u8; 256] = build_sbox();
pub(crate) const INV_SBOX: [u8; 256] = invert(&SBOX);
static TE: [[u32; 256]; 4] = build_round_tables(&SBOX, [2, 1, 1, 3]);
static TD: [[u32; 256]; 4] = build_round_tables(&INV_SBOX, [14, 9, 13, 11]);

const RCON: [u8; ROUNDS] = [0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1b, 0x36];

/// An expanded AES-128 key.
///
/// Holds the eleven round keys of the forward cipher and the InvMixColumns
/// transformed schedule used by the equivalent inverse cipher.
#[derive(Clone, PartialEq, Eq)]
pub struct AesKey {
    key: [u8; 16],
    enc: [u32; 4 * (ROUNDS + 1)],
    dec: [u32; 4 * (ROUNDS + 1)],
}

impl std::fmt::Debug for AesKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AesKey").finish_non_exhaustive()
    }
}

/// Standard AES-128 key expansion.
pub fn derive_schedule(key: [u8; 16]) -> AesKey {
    let mut enc = [0u32; 4 * (ROUNDS + 1)];
    for (i, chunk) in key.chunks_exact(4).enumerate() {
        enc[i] = u32::from_be_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]);
    }
    for i in 4..enc.len() {
        let mut temp = enc[i - 1];
        if i % 4 == 0 {
            temp = sub_word(temp.rotate_left(8)) ^ ((RCON[i / 4 - 1] as u32) << 24);
        }
        enc[i] = enc[i - 4] ^ temp;
    }

    let mut dec = [0u32; 4 * (ROUNDS + 1)];
    for round in 0..=ROUNDS {
        for col in 0..4 {
            let word = enc[4 * (ROUNDS - round) + col];
            dec[4 * round + col] = if round == 0 || round == ROUNDS {
                word
            } else {
                inv_mix_column(word)
            };
        }
    }
    AesKey { key, enc, dec }
}

fn sub_word(word: u32) -> u32 {
    let b = word.to_be_bytes();
    column(
        SBOX[b[0] as usize],
        SBOX[b[1] as usize],
        SBOX[b[2] as usize],
        SBOX[b[3] as usize],
    )
}

fn inv_mix_column(word: u32) -> u32 {
    let b = word.to_be_bytes();
    // TD already contains INV_SBOX; undo it with SBOX first.
    TD[0][SBOX[b[0] as usize] as usize]
        ^ TD[1][SBOX[b[1] as usize] as usize]
        ^ TD[2][SBOX[b[2] as usize] as usize]
        ^ TD[3][SBOX[b[3] as usize] as usize]
}

impl AesKey {
    pub fn new(key: [u8; 16]) -> Self {
        derive_schedule(key)
    }

    /// Parses a key given as 32 hexadecimal characters.
    pub fn from_hex(text: &str) -> Result<Self, Error> {
        Ok(derive_schedule(BitBlock::from_hex(text)?.to_bytes()))
    }

    pub fn key_bytes(&self) -> [u8; 16] {
        self.key
    }

    /// Round key `round` (0..=10) of the forward cipher.
    pub fn round_key(&self, round: usize) -> [u8; 16] {
        assert!(round <= ROUNDS, "AES-128 has round keys 0..=10");
        let mut out = [0u8; 16];
        for col in 0..4 {
            out[4 * col..4 * col + 4].copy_from_slice(&self.enc[4 * round + col].to_be_bytes());
        }
        out
    }

    pub fn round_keys(&self) -> [[u8; 16]; ROUNDS + 1] {
        std::array::from_fn(|round| self.round_key(round))
    }
}

#[inline]
fn load(block: BitBlock) -> [u32; 4] {
    let v = block.as_u128();
    [
        (v >> 96) as u32,
        (v >> 64) as u32,
        (v >> 32) as u32,
        v as u32,
    ]
}

#[inline]
fn store(s: [u32; 4]) -> BitBlock {
    BitBlock::from_u128(
        ((s[0] as u128) << 96) | ((s[1] as u128) << 64) | ((s[2] as u128) << 32) | s[3] as u128,
    )
}

#[inline(always)]
fn byte(word: u32, index: u32) -> usize {
    ((word >> (24 - 8 * index)) & 0xff) as usize
}

pub fn encrypt_block(plain: BitBlock, key: &AesKey) -> BitBlock {
    let rk = &key.enc;
    let mut s = load(plain);
    for c in 0..4 {
        s[c] ^= rk[c];
    }
    for round in 1..ROUNDS {
        let mut t = [0u32; 4];
        for c in 0..4 {
            t[c] = TE[0][byte(s[c], 0)]
                ^ TE[1][byte(s[(c + 1) % 4], 1)]
                ^ TE[2][byte(s[(c + 2) % 4], 2)]
                ^ TE[3][byte(s[(c + 3) % 4], 3)]
                ^ rk[4 * round + c];
        }
        s = t;
    }
    let mut out = [0u32; 4];
    for c in 0..4 {
        out[c] = column(
            SBOX[byte(s[c], 0)],
            SBOX[byte(s[(c + 1) % 4], 1)],
            SBOX[byte(s[(c + 2) % 4], 2)],
            SBOX[byte(s[(c + 3) % 4], 3)],
        ) ^ rk[4 * ROUNDS + c];
    }
    store(out)
}

pub fn decrypt_block(cipher: BitBlock, key: &AesKey) -> BitBlock {
    let rk = &key.dec;
    let mut s = load(cipher);
    for c in 0..4 {
        s[c] ^= rk[c];
    }
    for round in 1..ROUNDS {
        let mut t = [0u32; 4];
        for c in 0..4 {
            t[c] = TD[0][byte(s[c], 0)]
                ^ TD[1][byte(s[(c + 3) % 4], 1)]
                ^ TD[2][byte(s[(c + 2) % 4], 2)]
                ^ TD[3][byte(s[(c + 1) % 4], 3)]
                ^ rk[4 * round + c];
        }
        s = t;
    }
    let mut out = [0u32; 4];
    for c in 0..4 {
        out[c] = column(
            INV_SBOX[byte(s[c], 0)],
            INV_SBOX[byte(s[(c + 3) % 4], 1)],
            INV_SBOX[byte(s[(c + 2) % 4], 2)],
            INV_SBOX[byte(s[(c + 1) % 4], 3)],
        ) ^ rk[4 * ROUNDS + c];
    }
    store(out)
}
