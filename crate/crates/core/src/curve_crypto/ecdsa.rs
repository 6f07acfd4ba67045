//! ECDSA signing, verification, and public-key recovery.
//!
//! Signatures are canonical: the nonce is derived deterministically from the
//! private key and digest through an HMAC chain (the RFC 6979 construction,
//! instantiated with HMAC-Keccak-256), and `s` is normalized to the low half
//! of the scalar range. Verification rejects high-s twins, so a given
//! (key, digest) pair has exactly one accepted encoding.
//!
//! The recovery id `v` stores the parity of the nonce point's y coordinate,
//! which lets [`ecdsa_recover`] rebuild the signer's public point from the
//! signature alone; callers then compare the derived address against a
//! claimed sender instead of storing public keys.

use super::curve::{CurveParams, Point};
use super::keccak::{keccak256, keccak256_parts, Digest32};
use super::uint::U256;
use super::CryptoError;

/// HMAC over Keccak-256; the block size is the sponge rate.
const HMAC_BLOCK: usize = 136;

fn hmac_keccak(key: &[u8], parts: &[&[u8]]) -> Digest32 {
    let mut block = [0u8; HMAC_BLOCK];
    if key.len() > HMAC_BLOCK {
        block[..32].copy_from_slice(&keccak256(key).0);
    } else {
        block[..key.len()].copy_from_slice(key);
    }
    let mut ipad = [0u8; HMAC_BLOCK];
    let mut opad = [0u8; HMAC_BLOCK];
    for i in 0..HMAC_BLOCK {
        ipad[i] = block[i] ^ 0x36;
        opad[i] = block[i] ^ 0x5c;
    }
    let mut inner_parts: Vec<&[u8]> = Vec::with_capacity(parts.len() + 1);
    inner_parts.push(&ipad);
    inner_parts.extend_from_slice(parts);
    let inner = keccak256_parts(&inner_parts);
    keccak256_parts(&[&opad, &inner.0])
}

/// An ECDSA signature with recovery id. `r` and `s` are scalars in
/// [1, n-1] with `s` in low form; `v` is 0 or 1.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct Signature {
    pub r: U256,
    pub s: U256,
    pub v: u8,
}

impl Signature {
    /// Wire form: 32-byte big-endian r, then s, then the single v byte.
    pub fn to_bytes(&self) -> [u8; 65] {
        let mut out = [0u8; 65];
        out[..32].copy_from_slice(&self.r.to_be_bytes());
        out[32..64].copy_from_slice(&self.s.to_be_bytes());
        out[64] = self.v;
        out
    }

    /// Structural parse only; range checks happen at use sites that know
    /// the curve.
    pub fn from_bytes(bytes: &[u8; 65]) -> Signature {
        Signature {
            r: U256::from_be_bytes(bytes[..32].try_into().unwrap()),
            s: U256::from_be_bytes(bytes[32..64].try_into().unwrap()),
            v: bytes[64],
        }
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.to_bytes())
    }

    pub fn from_hex(s: &str) -> Option<Signature> {
        let raw = hex::decode(s).ok()?;
        let bytes: [u8; 65] = raw.try_into().ok()?;
        Some(Signature::from_bytes(&bytes))
    }

    /// r and s in [1, n-1] and s in the low half: the only form signing
    /// emits and verification accepts.
    pub fn is_canonical(&self, curve: &CurveParams) -> bool {
        let n = curve.n();
        let in_range = |x: &U256| !x.is_zero() && x < n;
        in_range(&self.r) && in_range(&self.s) && self.s <= n.shr1(0) && self.v <= 1
    }
}

/// Deterministic nonce stream: HMAC-chained per the RFC 6979 construction.
struct NonceStream<'c> {
    k: [u8; 32],
    v: [u8; 32],
    curve: &'c CurveParams,
}

impl<'c> NonceStream<'c> {
    fn new(private_key: &U256, digest: &Digest32, curve: &'c CurveParams) -> Self {
        let x = private_key.to_be_bytes();
        let h = curve.scalar.reduce(&bits2int(digest, curve)).to_be_bytes();
        let mut stream = NonceStream { k: [0u8; 32], v: [1u8; 32], curve };
        stream.k = hmac_keccak(&stream.k, &[&stream.v, &[0x00], &x, &h]).0;
        stream.v = hmac_keccak(&stream.k, &[&stream.v]).0;
        stream.k = hmac_keccak(&stream.k, &[&stream.v, &[0x01], &x, &h]).0;
        stream.v = hmac_keccak(&stream.k, &[&stream.v]).0;
        stream
    }

    /// Next candidate in [1, n-1]; out-of-range draws advance the chain.
    fn next(&mut self) -> U256 {
        loop {
            self.v = hmac_keccak(&self.k, &[&self.v]).0;
            let candidate = bits2int(&Digest32(self.v), self.curve);
            if !candidate.is_zero() && candidate < *self.curve.n() {
                return candidate;
            }
            self.reseed();
        }
    }

    /// Called when a candidate is rejected downstream (r = 0 or s = 0).
    fn reseed(&mut self) {
        self.k = hmac_keccak(&self.k, &[&self.v, &[0x00]]).0;
        self.v = hmac_keccak(&self.k, &[&self.v]).0;
    }
}

/// Leftmost bits of a 256-bit string, as many as the group order has.
fn bits2int(digest: &Digest32, curve: &CurveParams) -> U256 {
    let value = U256::from_be_bytes(&digest.0);
    let qbits = curve.n().bits();
    if qbits < 256 {
        value.shr(256 - qbits)
    } else {
        value
    }
}

/// The message scalar: digest interpreted big-endian, reduced mod n.
fn digest_scalar(digest: &Digest32, curve: &CurveParams) -> U256 {
    curve.scalar.reduce(&U256::from_be_bytes(&digest.0))
}

/// Sign a 32-byte digest. Deterministic: the same key and digest always
/// produce the same bytes. Zero r or s re-derives the nonce.
pub fn ecdsa_sign(
    private_key: &U256,
    digest: &Digest32,
    curve: &CurveParams,
) -> Result<Signature, CryptoError> {
    if private_key.is_zero() || private_key >= curve.n() {
        return Err(CryptoError::ScalarOutOfRange);
    }
    let sc = &curve.scalar;
    let z = digest_scalar(digest, curve);
    let mut nonces = NonceStream::new(private_key, digest, curve);
    loop {
        let nonce = nonces.next();
        let point = curve.mul_unchecked(&nonce, curve.g());
        let (rx, ry) = point.coordinates().expect("nonce in [1, n-1]");
        let r = sc.reduce(&rx);
        if r.is_zero() {
            nonces.reseed();
            continue;
        }
        // s = nonce^{-1} (z + r·k) mod n
        let nonce_inv = sc.inv(&nonce).expect("nonce nonzero");
        let mut s = sc.mul(&nonce_inv, &sc.add(&z, &sc.mul(&r, private_key)));
        if s.is_zero() {
            nonces.reseed();
            continue;
        }
        let mut v = ry.bit(0) as u8;
        if s > curve.n().shr1(0) {
            // Low-s normalization flips the implied nonce point.
            s = sc.neg(&s);
            v ^= 1;
        }
        return Ok(Signature { r, s, v });
    }
}

/// True iff `sig` is a canonical signature on `digest` under `q`. The
/// whole 65-byte form is checked: the recomputed nonce point must match
/// both the committed x coordinate and the parity recorded in `v`, so any
/// single-bit corruption of r, s, or v fails. Malformed inputs (off-curve
/// key, out-of-range scalars, high-s) are `false`, never errors.
pub fn ecdsa_verify(
    q: &Point,
    digest: &Digest32,
    sig: &Signature,
    curve: &CurveParams,
) -> bool {
    if q.is_infinity() || !curve.contains(q) {
        return false;
    }
    let n = curve.n();
    let in_range = |x: &U256| !x.is_zero() && x < n;
    if !in_range(&sig.r) || !in_range(&sig.s) || sig.s > n.shr1(0) || sig.v > 1 {
        return false;
    }
    let sc = &curve.scalar;
    let z = digest_scalar(digest, curve);
    let w = sc.inv(&sig.s).expect("s nonzero");
    let u1 = sc.mul(&z, &w);
    let u2 = sc.mul(&sig.r, &w);
    let point = curve.lincomb_unchecked(&u1, curve.g(), &u2, q);
    match point.coordinates() {
        None => false,
        Some((x, y)) => sc.reduce(&x) == sig.r && y.bit(0) == (sig.v == 1),
    }
}

/// Rebuild the public point that produced `sig` over `digest`. Fails when
/// no curve point matches the signature's (r, v) commitment.
pub fn ecdsa_recover(
    digest: &Digest32,
    sig: &Signature,
    curve: &CurveParams,
) -> Result<Point, CryptoError> {
    let n = curve.n();
    let in_range = |x: &U256| !x.is_zero() && x < n;
    if !in_range(&sig.r) || !in_range(&sig.s) {
        return Err(CryptoError::RecoveryFailure("r or s out of range"));
    }
    if sig.s > n.shr1(0) {
        return Err(CryptoError::RecoveryFailure("non-canonical high-s signature"));
    }
    if sig.v > 1 {
        return Err(CryptoError::RecoveryFailure("recovery id must be 0 or 1"));
    }
    // The nonce point's x coordinate is committed as r; only the parity of
    // y survives, in v.
    if sig.r >= *curve.p() {
        return Err(CryptoError::RecoveryFailure("r exceeds the field modulus"));
    }
    let x = sig.r;
    let rhs = curve.curve_rhs(&x);
    let y0 = curve
        .field
        .sqrt(&rhs)
        .ok_or(CryptoError::RecoveryFailure("no curve point has this x"))?;
    let want_odd = sig.v == 1;
    let y = if y0.bit(0) == want_odd {
        y0
    } else {
        let flipped = curve.field.neg(&y0);
        if flipped.bit(0) != want_odd {
            // y = 0 is its own negation; only even parity exists.
            return Err(CryptoError::RecoveryFailure("no point with requested parity"));
        }
        flipped
    };
    let nonce_point = Point::affine(x, y);

    // q = r^{-1} (s·R - z·G)
    let sc = &curve.scalar;
    let z = digest_scalar(digest, curve);
    let r_inv = sc.inv(&sig.r).expect("r nonzero");
    let u1 = sc.neg(&sc.mul(&z, &r_inv));
    let u2 = sc.mul(&sig.s, &r_inv);
    let q = curve.lincomb_unchecked(&u1, curve.g(), &u2, &nonce_point);
    if q.is_infinity() {
        return Err(CryptoError::RecoveryFailure("recovered the point at infinity"));
    }
    Ok(q)
}
