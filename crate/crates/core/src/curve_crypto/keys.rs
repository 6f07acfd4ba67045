//! Key generation and actor addresses.
//!
//! A private key is a scalar drawn uniformly from [1, n-1] by rejection
//! sampling; the public key is that scalar times the generator. Actor
//! addresses follow the EVM convention: keccak256 of the uncompressed
//! 64-byte x‖y encoding, low 20 bytes.

use std::fmt;

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use super::curve::{CurveParams, Point};
use super::keccak::keccak256;
use super::uint::U256;
use super::CryptoError;

/// A source of key-generation entropy. Implementations may be finite, in
/// which case exhaustion is reported as an error rather than looping.
pub trait EntropySource {
    fn fill(&mut self, dest: &mut [u8]) -> Result<(), CryptoError>;
}

/// Operating-system randomness.
pub struct OsEntropy;

impl EntropySource for OsEntropy {
    fn fill(&mut self, dest: &mut [u8]) -> Result<(), CryptoError> {
        rand::rngs::OsRng.fill_bytes(dest);
        Ok(())
    }
}

/// Deterministic stream expanded from a 32-byte seed. Same seed, same keys,
/// on every platform.
pub struct SeedEntropy(ChaCha20Rng);

impl SeedEntropy {
    pub fn new(seed: [u8; 32]) -> SeedEntropy {
        SeedEntropy(ChaCha20Rng::from_seed(seed))
    }
}

impl EntropySource for SeedEntropy {
    fn fill(&mut self, dest: &mut [u8]) -> Result<(), CryptoError> {
        self.0.fill_bytes(dest);
        Ok(())
    }
}

/// A fixed pool of bytes; errors once consumed.
pub struct FixedEntropy {
    data: Vec<u8>,
    pos: usize,
}

impl FixedEntropy {
    pub fn new(data: Vec<u8>) -> FixedEntropy {
        FixedEntropy { data, pos: 0 }
    }
}

impl EntropySource for FixedEntropy {
    fn fill(&mut self, dest: &mut [u8]) -> Result<(), CryptoError> {
        if self.data.len() - self.pos < dest.len() {
            return Err(CryptoError::EntropyExhausted);
        }
        dest.copy_from_slice(&self.data[self.pos..self.pos + dest.len()]);
        self.pos += dest.len();
        Ok(())
    }
}

/// Private scalar and its public point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyPair {
    k: U256,
    q: Point,
}

impl KeyPair {
    /// Builds a pair from an existing private scalar, recomputing `q`.
    pub fn from_private(k: U256, curve: &CurveParams) -> Result<KeyPair, CryptoError> {
        if k.is_zero() || k >= *curve.n() {
            return Err(CryptoError::ScalarOutOfRange);
        }
        let q = curve.mul_unchecked(&k, curve.g());
        Ok(KeyPair { k, q })
    }

    pub fn private_key(&self) -> &U256 {
        &self.k
    }

    pub fn public_key(&self) -> &Point {
        &self.q
    }

    pub fn address(&self) -> ActorAddress {
        derive_address(&self.q).expect("public key is finite by construction")
    }
}

/// Draw a keypair from `entropy` by rejection sampling over [1, n-1].
pub fn keygen(
    entropy: &mut dyn EntropySource,
    curve: &CurveParams,
) -> Result<KeyPair, CryptoError> {
    loop {
        let mut buf = [0u8; 32];
        entropy.fill(&mut buf)?;
        let candidate = U256::from_be_bytes(&buf);
        if candidate.is_zero() || candidate >= *curve.n() {
            continue;
        }
        return KeyPair::from_private(candidate, curve);
    }
}

/// 20-byte actor address: low 20 bytes of keccak256(x ‖ y).
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ActorAddress(pub [u8; 20]);

impl ActorAddress {
    pub fn as_bytes(&self) -> &[u8; 20] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn from_hex(s: &str) -> Option<ActorAddress> {
        let raw = hex::decode(s).ok()?;
        let bytes: [u8; 20] = raw.try_into().ok()?;
        Some(ActorAddress(bytes))
    }
}

impl fmt::Debug for ActorAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ActorAddress({})", self.to_hex())
    }
}

impl fmt::Display for ActorAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Uncompressed 64-byte encoding: 32-byte big-endian x, then y. No prefix
/// byte; this feeds both address derivation and the anonymity byte-scan.
pub fn encode_point_uncompressed(q: &Point) -> Result<[u8; 64], CryptoError> {
    let (x, y) = q.coordinates().ok_or(CryptoError::InfinityAddress)?;
    let mut out = [0u8; 64];
    out[..32].copy_from_slice(&x.to_be_bytes());
    out[32..].copy_from_slice(&y.to_be_bytes());
    Ok(out)
}

/// Address of a public point; errors on the point at infinity.
pub fn derive_address(q: &Point) -> Result<ActorAddress, CryptoError> {
    let encoded = encode_point_uncompressed(q)?;
    let digest = keccak256(&encoded);
    let mut addr = [0u8; 20];
    addr.copy_from_slice(&digest.0[12..]);
    Ok(ActorAddress(addr))
}
