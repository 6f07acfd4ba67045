//! Modular arithmetic over an odd prime modulus.
//!
//! Multiplication uses Montgomery reduction with R = 2^256; values cross the
//! API boundary in canonical form, so callers never see the Montgomery
//! domain. Inversion is the binary extended Euclidean algorithm. Both work
//! for any odd modulus, which lets the same context back the 256-bit
//! production field and the 17-element toy field used in exhaustive tests.

use super::uint::{U256, U512};

/// Precomputed context for arithmetic modulo a fixed odd `m > 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct FieldCtx {
    modulus: U256,
    /// -m^{-1} mod 2^64, the Montgomery magic constant.
    n0: u64,
    /// R mod m (Montgomery form of 1).
    r1: U256,
    /// R^2 mod m (converts into Montgomery form).
    r2: U256,
}

impl FieldCtx {
    /// Panics if `m` is even or < 2; the curve constructors validate first.
    pub fn new(m: U256) -> FieldCtx {
        assert!(!m.is_even() && m > U256::ONE, "modulus must be odd and > 1");
        // Newton iteration doubles correct low bits each round: 6 rounds
        // suffice for 64.
        let mut inv = m.0[0];
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(m.0[0].wrapping_mul(inv)));
        }
        let n0 = inv.wrapping_neg();

        let mut r1_wide = [0u64; 8];
        r1_wide[4] = 1; // 2^256
        let r1 = U512(r1_wide).rem(&m);
        let r2 = r1.mul_wide(&r1).rem(&m);
        FieldCtx { modulus: m, n0, r1, r2 }
    }

    /// Reduce an arbitrary 256-bit value into [0, m).
    pub fn reduce(&self, a: &U256) -> U256 {
        if *a < self.modulus {
            *a
        } else {
            U512::from_u256(a).rem(&self.modulus)
        }
    }

    pub fn add(&self, a: &U256, b: &U256) -> U256 {
        debug_assert!(*a < self.modulus && *b < self.modulus);
        let (sum, carry) = a.add_carry(b);
        if carry == 1 || sum >= self.modulus {
            sum.sub_borrow(&self.modulus).0
        } else {
            sum
        }
    }

    pub fn sub(&self, a: &U256, b: &U256) -> U256 {
        debug_assert!(*a < self.modulus && *b < self.modulus);
        if a >= b {
            a.sub_borrow(b).0
        } else {
            // a - b mod m = m - (b - a); both differences stay in range.
            let d = b.sub_borrow(a).0;
            self.modulus.sub_borrow(&d).0
        }
    }

    pub fn neg(&self, a: &U256) -> U256 {
        if a.is_zero() {
            U256::ZERO
        } else {
            self.modulus.sub_borrow(a).0
        }
    }

    /// Montgomery reduction of a 512-bit product: returns t * R^{-1} mod m.
    fn redc(&self, t: &U512) -> U256 {
        let mut t = t.0;
        let mut upper_carry = 0u64;
        for i in 0..4 {
            let m_i = t[i].wrapping_mul(self.n0);
            let mut carry = 0u64;
            for j in 0..4 {
                let wide = m_i as u128 * self.modulus.0[j] as u128
                    + t[i + j] as u128
                    + carry as u128;
                t[i + j] = wide as u64;
                carry = (wide >> 64) as u64;
            }
            let mut k = i + 4;
            while carry != 0 {
                if k == 8 {
                    upper_carry += carry;
                    break;
                }
                let (s, c) = t[k].overflowing_add(carry);
                t[k] = s;
                carry = c as u64;
                k += 1;
            }
        }
        let r = U256([t[4], t[5], t[6], t[7]]);
        // Result < 2m, so at most one conditional subtraction; upper_carry
        // represents 2^256 and the wrapping subtraction absorbs it.
        if upper_carry == 1 || r >= self.modulus {
            r.sub_borrow(&self.modulus).0
        } else {
            r
        }
    }

    fn mont_mul(&self, a: &U256, b: &U256) -> U256 {
        self.redc(&a.mul_wide(b))
    }

    /// Canonical product a*b mod m.
    pub fn mul(&self, a: &U256, b: &U256) -> U256 {
        debug_assert!(*a < self.modulus && *b < self.modulus);
        self.mont_mul(&self.mont_mul(a, b), &self.r2)
    }

    pub fn sqr(&self, a: &U256) -> U256 {
        self.mul(a, a)
    }

    /// a^e mod m by square-and-multiply in the Montgomery domain.
    pub fn pow(&self, a: &U256, e: &U256) -> U256 {
        let base = self.mont_mul(a, &self.r2);
        let mut acc = self.r1;
        for i in (0..e.bits()).rev() {
            acc = self.mont_mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mont_mul(&acc, &base);
            }
        }
        self.redc(&U512::from_u256(&acc))
    }

    /// Modular inverse via binary extended Euclid; `None` when a ≡ 0.
    pub fn inv(&self, a: &U256) -> Option<U256> {
        debug_assert!(*a < self.modulus);
        if a.is_zero() {
            return None;
        }
        let m = self.modulus;
        let mut u = *a;
        let mut v = m;
        let mut x1 = U256::ONE;
        let mut x2 = U256::ZERO;
        while u != U256::ONE && v != U256::ONE {
            while u.is_even() {
                u = u.shr1(0);
                x1 = if x1.is_even() {
                    x1.shr1(0)
                } else {
                    let (s, c) = x1.add_carry(&m);
                    s.shr1(c)
                };
            }
            while v.is_even() {
                v = v.shr1(0);
                x2 = if x2.is_even() {
                    x2.shr1(0)
                } else {
                    let (s, c) = x2.add_carry(&m);
                    s.shr1(c)
                };
            }
            if u >= v {
                u = u.sub_borrow(&v).0;
                x1 = self.sub(&x1, &x2);
            } else {
                v = v.sub_borrow(&u).0;
                x2 = self.sub(&x2, &x1);
            }
        }
        Some(if u == U256::ONE { x1 } else { x2 })
    }

    /// Square root mod p for prime p, or `None` for a non-residue.
    /// Fast path for p ≡ 3 (mod 4), Tonelli–Shanks otherwise.
    pub fn sqrt(&self, a: &U256) -> Option<U256> {
        if a.is_zero() {
            return Some(U256::ZERO);
        }
        let p = self.modulus;
        let root = if p.0[0] & 3 == 3 {
            // a^((p+1)/4)
            let (s, c) = p.add_carry(&U256::ONE);
            let e = s.shr1(c).shr1(0);
            self.pow(a, &e)
        } else {
            self.tonelli_shanks(a)?
        };
        if self.sqr(&root) == *a {
            Some(root)
        } else {
            None
        }
    }

    fn tonelli_shanks(&self, a: &U256) -> Option<U256> {
        let p = self.modulus;
        let p_minus_1 = p.sub_borrow(&U256::ONE).0;
        let legendre_exp = p_minus_1.shr1(0);
        if self.pow(a, &legendre_exp) != U256::ONE {
            return None;
        }
        // p - 1 = q * 2^s with q odd.
        let mut q = p_minus_1;
        let mut s = 0u32;
        while q.is_even() {
            q = q.shr1(0);
            s += 1;
        }
        // Smallest quadratic non-residue; trial search is deterministic.
        let mut z = U256::from_u64(2);
        while self.pow(&z, &legendre_exp) == U256::ONE {
            z = self.add(&z, &U256::ONE);
        }
        let mut m = s;
        let mut c = self.pow(&z, &q);
        let mut t = self.pow(a, &q);
        let (q_plus_1, carry) = q.add_carry(&U256::ONE);
        let mut r = self.pow(a, &q_plus_1.shr1(carry));
        while t != U256::ONE {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != U256::ONE {
                t2 = self.sqr(&t2);
                i += 1;
                if i == m {
                    return None;
                }
            }
            let mut b = c;
            for _ in 0..m - i - 1 {
                b = self.sqr(&b);
            }
            m = i;
            c = self.sqr(&b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        Some(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx17() -> FieldCtx {
        FieldCtx::new(U256::from_u64(17))
    }

    #[test]
    fn small_field_matches_i64_arithmetic() {
        let f = ctx17();
        for a in 0u64..17 {
            for b in 0u64..17 {
                let ua = U256::from_u64(a);
                let ub = U256::from_u64(b);
                assert_eq!(f.add(&ua, &ub), U256::from_u64((a + b) % 17));
                assert_eq!(f.sub(&ua, &ub), U256::from_u64((17 + a - b) % 17));
                assert_eq!(f.mul(&ua, &ub), U256::from_u64(a * b % 17));
            }
        }
    }

    #[test]
    fn inverse_over_full_small_field() {
        let f = ctx17();
        assert_eq!(f.inv(&U256::ZERO), None);
        for a in 1u64..17 {
            let inv = f.inv(&U256::from_u64(a)).unwrap();
            assert_eq!(f.mul(&U256::from_u64(a), &inv), U256::ONE);
        }
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let f = ctx17();
        for a in 0u64..17 {
            let mut acc = 1u64;
            for e in 0u64..20 {
                assert_eq!(
                    f.pow(&U256::from_u64(a), &U256::from_u64(e)),
                    U256::from_u64(acc),
                    "a={a} e={e}"
                );
                acc = acc * a % 17;
            }
        }
    }

    #[test]
    fn sqrt_on_p_equals_1_mod_4() {
        // 17 ≡ 1 (mod 4) exercises the Tonelli–Shanks path.
        let f = ctx17();
        let squares: Vec<u64> = (0..17).map(|x| x * x % 17).collect();
        for a in 0u64..17 {
            match f.sqrt(&U256::from_u64(a)) {
                Some(r) => assert_eq!(f.sqr(&r), U256::from_u64(a)),
                None => assert!(!squares.contains(&a), "{a} is a residue"),
            }
        }
    }

    #[test]
    fn large_modulus_inverse_and_mul() {
        // secp256k1 field prime: p ≡ 3 (mod 4) exercises the fast sqrt path.
        let p = U256::from_hex("fffffffffffffffffffffffffffffffffffffffffffffffffffffffefffffc2f")
            .unwrap();
        let f = FieldCtx::new(p);
        let a = U256::from_hex("79be667ef9dcbbac55a06295ce870b07029bfcdb2dce28d959f2815b16f81798")
            .unwrap();
        let inv = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &inv), U256::ONE);
        // Fermat: a^(p-1) = 1.
        let e = p.sub_borrow(&U256::ONE).0;
        assert_eq!(f.pow(&a, &e), U256::ONE);
        // sqrt(a^2) = ±a.
        let sq = f.sqr(&a);
        let r = f.sqrt(&sq).unwrap();
        assert!(r == a || r == f.neg(&a));
    }

    #[test]
    fn reduce_handles_values_above_modulus() {
        let f = ctx17();
        assert_eq!(f.reduce(&U256::from_u64(100)), U256::from_u64(100 % 17));
        let big = U256([u64::MAX; 4]);
        let r = f.reduce(&big);
        assert!(r < U256::from_u64(17));
    }
}
