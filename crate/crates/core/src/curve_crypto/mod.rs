//! Elliptic-curve cryptography from the field up.
//!
//! Everything a traceability ledger needs to sign off-chain and verify
//! on-chain: prime-field arithmetic, affine short-Weierstrass group
//! operations, Keccak-256, deterministic ECDSA with public-key recovery,
//! and EVM-style address derivation. Two curves ship with the crate:
//! secp256k1 for production use and a 19-point toy curve over F_17 whose
//! group law the tests check exhaustively.
//!
//! All operations are pure functions of their inputs; key material is
//! immutable once created, so everything here is safe to share across
//! threads.

mod curve;
mod ecdsa;
mod field;
mod keccak;
mod keys;
mod uint;

pub use curve::{point_add, point_double, scalar_mul, CurveParams, Point, SECP256K1, TOY17};
pub use ecdsa::{ecdsa_recover, ecdsa_sign, ecdsa_verify, Signature};
pub use keccak::{keccak256, keccak256_parts, Digest32};
pub use keys::{
    derive_address, encode_point_uncompressed, keygen, ActorAddress, EntropySource,
    FixedEntropy, KeyPair, OsEntropy, SeedEntropy,
};
pub use uint::{ParseIntError, U256};

/// Errors from curve and key operations. Signature *verification* never
/// errors; it reports false.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CryptoError {
    #[error("point is not on the curve")]
    InvalidPoint,
    #[error("invalid curve parameters: {0}")]
    InvalidCurve(&'static str),
    #[error("public key recovery failed: {0}")]
    RecoveryFailure(&'static str),
    #[error("entropy source exhausted")]
    EntropyExhausted,
    #[error("the point at infinity has no address")]
    InfinityAddress,
    #[error("scalar outside [1, n-1]")]
    ScalarOutOfRange,
}
