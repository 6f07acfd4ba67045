//! Keccak-256 as submitted to the SHA-3 competition (0x01 domain padding,
//! not the 0x06 byte FIPS 202 later standardized). This is the variant the
//! EVM exposes as `keccak256` and the one every digest in this crate uses.

use std::fmt;

const ROUNDS: usize = 24;
const RATE: usize = 136; // 1600/8 - 2*32

const ROUND_CONSTANTS: [u64; ROUNDS] = [
    0x0000000000000001,
    0x0000000000008082,
    0x800000000000808a,
    0x8000000080008000,
    0x000000000000808b,
    0x0000000080000001,
    0x8000000080008081,
    0x8000000000008009,
    0x000000000000008a,
    0x0000000000000088,
    0x0000000080008009,
    0x000000008000000a,
    0x000000008000808b,
    0x800000000000008b,
    0x8000000000008089,
    0x8000000000008003,
    0x8000000000008002,
    0x8000000000000080,
    0x000000000000800a,
    0x800000008000000a,
    0x8000000080008081,
    0x8000000000008080,
    0x0000000080000001,
    0x8000000080008008,
];

// Rotation offsets for lane (x, y), indexed x + 5y.
const RHO: [u32; 25] = [
    0, 1, 62, 28, 27, //
    36, 44, 6, 55, 20, //
    3, 10, 43, 25, 39, //
    41, 45, 15, 21, 8, //
    18, 2, 61, 56, 14,
];

fn keccak_f(state: &mut [u64; 25]) {
    for rc in ROUND_CONSTANTS {
        // theta
        let mut c = [0u64; 5];
        for x in 0..5 {
            c[x] = state[x] ^ state[x + 5] ^ state[x + 10] ^ state[x + 15] ^ state[x + 20];
        }
        for x in 0..5 {
            let d = c[(x + 4) % 5] ^ c[(x + 1) % 5].rotate_left(1);
            for y in 0..5 {
                state[x + 5 * y] ^= d;
            }
        }
        // rho + pi
        let mut b = [0u64; 25];
        for x in 0..5 {
            for y in 0..5 {
                b[y + 5 * ((2 * x + 3 * y) % 5)] = state[x + 5 * y].rotate_left(RHO[x + 5 * y]);
            }
        }
        // chi
        for x in 0..5 {
            for y in 0..5 {
                state[x + 5 * y] =
                    b[x + 5 * y] ^ (!b[(x + 1) % 5 + 5 * y] & b[(x + 2) % 5 + 5 * y]);
            }
        }
        // iota
        state[0] ^= rc;
    }
}

/// A 32-byte digest. Hex-displayed lowercase with no prefix.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Digest32(pub [u8; 32]);

impl Digest32 {
    pub const ZERO: Digest32 = Digest32([0; 32]);

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 32]
    }

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn from_hex(s: &str) -> Option<Digest32> {
        let raw = hex::decode(s).ok()?;
        let bytes: [u8; 32] = raw.try_into().ok()?;
        Some(Digest32(bytes))
    }
}

impl fmt::Debug for Digest32 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest32({})", self.to_hex())
    }
}

impl fmt::Display for Digest32 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl AsRef<[u8]> for Digest32 {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

/// Keccak-256 of `data`. Deterministic, defined for the empty input.
pub fn keccak256(data: &[u8]) -> Digest32 {
    keccak256_parts(&[data])
}

/// Keccak-256 over the concatenation of `parts`, without materializing it.
pub fn keccak256_parts(parts: &[&[u8]]) -> Digest32 {
    let mut state = [0u64; 25];
    let mut block = [0u8; RATE];
    let mut filled = 0usize;

    let absorb = |state: &mut [u64; 25], block: &[u8; RATE]| {
        for (i, chunk) in block.chunks_exact(8).enumerate() {
            state[i] ^= u64::from_le_bytes(chunk.try_into().unwrap());
        }
        keccak_f(state);
    };

    for part in parts {
        let mut rest = *part;
        while !rest.is_empty() {
            let take = (RATE - filled).min(rest.len());
            block[filled..filled + take].copy_from_slice(&rest[..take]);
            filled += take;
            rest = &rest[take..];
            if filled == RATE {
                absorb(&mut state, &block);
                filled = 0;
            }
        }
    }

    // Multi-rate padding: 0x01 .. 0x80 (collapsing to 0x81 for a single
    // padding byte). This is the pre-FIPS Keccak domain byte.
    block[filled..].fill(0);
    block[filled] ^= 0x01;
    block[RATE - 1] ^= 0x80;
    absorb(&mut state, &block);

    let mut out = [0u8; 32];
    for i in 0..4 {
        out[8 * i..8 * i + 8].copy_from_slice(&state[i].to_le_bytes());
    }
    Digest32(out)
}
