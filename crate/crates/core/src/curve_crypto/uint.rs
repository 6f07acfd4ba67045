//! Fixed-width 256/512-bit unsigned integers.
//!
//! Little-endian `u64` limbs, no heap allocation. Only the handful of
//! operations the field and curve layers need are implemented here; anything
//! modulus-aware lives in [`super::field`].

use std::cmp::Ordering;
use std::fmt;

/// 256-bit unsigned integer, four little-endian `u64` limbs.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Default)]
pub struct U256(pub(crate) [u64; 4]);

/// 512-bit product of two [`U256`] values.
#[derive(Copy, Clone, PartialEq, Eq)]
pub(crate) struct U512(pub(crate) [u64; 8]);

/// Error parsing a hex string into a fixed-width integer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid hex integer: {0}")]
pub struct ParseIntError(pub(crate) &'static str);

#[inline]
fn adc(a: u64, b: u64, carry: u64) -> (u64, u64) {
    let t = a as u128 + b as u128 + carry as u128;
    (t as u64, (t >> 64) as u64)
}

#[inline]
fn sbb(a: u64, b: u64, borrow: u64) -> (u64, u64) {
    let t = (a as u128).wrapping_sub(b as u128 + borrow as u128);
    (t as u64, ((t >> 64) as u64) & 1)
}

/// a*b + c + d, split into (low, high). Cannot overflow:
/// (2^64-1)^2 + 2*(2^64-1) = 2^128 - 1.
#[inline]
fn mac(a: u64, b: u64, c: u64, d: u64) -> (u64, u64) {
    let t = a as u128 * b as u128 + c as u128 + d as u128;
    (t as u64, (t >> 64) as u64)
}

impl U256 {
    pub const ZERO: U256 = U256([0; 4]);
    pub const ONE: U256 = U256([1, 0, 0, 0]);

    pub const fn from_u64(v: u64) -> Self {
        U256([v, 0, 0, 0])
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 4]
    }

    pub fn is_even(&self) -> bool {
        self.0[0] & 1 == 0
    }

    /// Value of bit `i` (0 = least significant).
    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i < 256);
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    /// Position of the highest set bit plus one; 0 for zero.
    pub fn bits(&self) -> usize {
        for (i, limb) in self.0.iter().enumerate().rev() {
            if *limb != 0 {
                return 64 * i + (64 - limb.leading_zeros() as usize);
            }
        }
        0
    }

    pub fn from_be_bytes(bytes: &[u8; 32]) -> Self {
        let mut limbs = [0u64; 4];
        for (i, chunk) in bytes.chunks_exact(8).enumerate() {
            limbs[3 - i] = u64::from_be_bytes(chunk.try_into().unwrap());
        }
        U256(limbs)
    }

    pub fn to_be_bytes(&self) -> [u8; 32] {
        let mut out = [0u8; 32];
        for i in 0..4 {
            out[8 * i..8 * i + 8].copy_from_slice(&self.0[3 - i].to_be_bytes());
        }
        out
    }

    /// Parse from hex (no prefix, case-insensitive, at most 64 digits).
    pub fn from_hex(s: &str) -> Result<Self, ParseIntError> {
        let s = s.trim();
        if s.is_empty() || s.len() > 64 {
            return Err(ParseIntError("expected 1..=64 hex digits"));
        }
        let mut bytes = [0u8; 32];
        let padded: String = if s.len() % 2 == 1 {
            format!("0{s}")
        } else {
            s.to_string()
        };
        let raw = hex::decode(&padded).map_err(|_| ParseIntError("non-hex digit"))?;
        bytes[32 - raw.len()..].copy_from_slice(&raw);
        Ok(Self::from_be_bytes(&bytes))
    }

    /// Lowercase hex, zero-padded to 64 digits.
    pub fn to_hex(&self) -> String {
        hex::encode(self.to_be_bytes())
    }

    /// Wrapping addition with carry-out.
    pub(crate) fn add_carry(&self, rhs: &U256) -> (U256, u64) {
        let mut out = [0u64; 4];
        let mut carry = 0;
        for i in 0..4 {
            (out[i], carry) = adc(self.0[i], rhs.0[i], carry);
        }
        (U256(out), carry)
    }

    /// Wrapping subtraction with borrow-out.
    pub(crate) fn sub_borrow(&self, rhs: &U256) -> (U256, u64) {
        let mut out = [0u64; 4];
        let mut borrow = 0;
        for i in 0..4 {
            (out[i], borrow) = sbb(self.0[i], rhs.0[i], borrow);
        }
        (U256(out), borrow)
    }

    /// Full 512-bit schoolbook product.
    pub(crate) fn mul_wide(&self, rhs: &U256) -> U512 {
        let mut t = [0u64; 8];
        for i in 0..4 {
            let mut carry = 0;
            for j in 0..4 {
                (t[i + j], carry) = mac(self.0[i], rhs.0[j], t[i + j], carry);
            }
            t[i + 4] = carry;
        }
        U512(t)
    }

    /// Logical right shift by one, `carry_in` entering the top bit.
    pub(crate) fn shr1(&self, carry_in: u64) -> U256 {
        let mut out = [0u64; 4];
        let mut hi = carry_in & 1;
        for i in (0..4).rev() {
            out[i] = self.0[i] >> 1 | hi << 63;
            hi = self.0[i] & 1;
        }
        U256(out)
    }

    /// Logical right shift by `n` bits (0..256).
    pub fn shr(&self, n: usize) -> U256 {
        debug_assert!(n < 256);
        let limb_shift = n / 64;
        let bit_shift = n % 64;
        let mut out = [0u64; 4];
        for i in 0..4 - limb_shift {
            out[i] = self.0[i + limb_shift] >> bit_shift;
            if bit_shift > 0 && i + limb_shift + 1 < 4 {
                out[i] |= self.0[i + limb_shift + 1] << (64 - bit_shift);
            }
        }
        U256(out)
    }
}

impl Ord for U256 {
    fn cmp(&self, other: &Self) -> Ordering {
        for i in (0..4).rev() {
            match self.0[i].cmp(&other.0[i]) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for U256 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for U256 {
    fn from(v: u64) -> Self {
        Self::from_u64(v)
    }
}

impl fmt::Debug for U256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U256(0x{})", self.to_hex())
    }
}

impl fmt::Display for U256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl U512 {
    pub(crate) fn from_u256(v: &U256) -> Self {
        let mut t = [0u64; 8];
        t[..4].copy_from_slice(&v.0);
        U512(t)
    }

    pub(crate) fn bit(&self, i: usize) -> bool {
        debug_assert!(i < 512);
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub(crate) fn bits(&self) -> usize {
        for (i, limb) in self.0.iter().enumerate().rev() {
            if *limb != 0 {
                return 64 * i + (64 - limb.leading_zeros() as usize);
            }
        }
        0
    }

    /// Remainder of division by a 256-bit modulus, binary long division.
    /// Slow; used at context setup and in tests, never on hot paths.
    pub(crate) fn rem(&self, m: &U256) -> U256 {
        debug_assert!(!m.is_zero());
        let mut r = U256::ZERO;
        for i in (0..self.bits()).rev() {
            // r = 2r + bit, tracking the 257th bit as `overflow`.
            let (shifted, overflow) = r.add_carry(&r);
            let mut r2 = shifted;
            if self.bit(i) {
                r2.0[0] |= 1;
            }
            if overflow == 1 || r2 >= *m {
                r2 = r2.sub_borrow(m).0;
            }
            r = r2;
        }
        r
    }
}
