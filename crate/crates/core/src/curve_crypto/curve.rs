//! Short Weierstrass curves y² = x³ + ax + b over a prime field, with the
//! affine chord-and-tangent group law.
//!
//! Points are kept in affine coordinates with an explicit infinity marker and
//! every slope is computed through a modular inverse. That is slower than
//! projective tricks but keeps the addition and doubling formulas in their
//! textbook shape, which is what the exhaustive toy-curve tests check
//! against.

use std::fmt;
use std::sync::LazyLock;

use super::field::FieldCtx;
use super::uint::U256;
use super::CryptoError;

/// A point on a curve: affine coordinates or the group identity.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub enum Point {
    Infinity,
    Affine { x: U256, y: U256 },
}

impl Point {
    pub fn affine(x: U256, y: U256) -> Point {
        Point::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    /// (x, y) for a finite point, `None` for infinity.
    pub fn coordinates(&self) -> Option<(U256, U256)> {
        match self {
            Point::Infinity => None,
            Point::Affine { x, y } => Some((*x, *y)),
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => f.write_str("Point::Infinity"),
            Point::Affine { x, y } => write!(f, "Point({x}, {y})"),
        }
    }
}

/// Domain parameters for one curve, plus the field contexts derived from
/// them. Construct via [`CurveParams::new`] (validated) or one of the named
/// constructors.
#[derive(Clone, Debug)]
pub struct CurveParams {
    p: U256,
    a: U256,
    b: U256,
    g: Point,
    n: U256,
    h_cof: u32,
    pub(crate) field: FieldCtx,
    pub(crate) scalar: FieldCtx,
}

/// secp256k1, the curve used for every production signature in this crate.
pub static SECP256K1: LazyLock<CurveParams> = LazyLock::new(CurveParams::secp256k1);

/// 19-point toy curve y² = x³ + 2x + 2 over F_17; small enough to enumerate.
pub static TOY17: LazyLock<CurveParams> = LazyLock::new(CurveParams::toy17);

impl CurveParams {
    /// Validates non-singularity, that `g` lies on the curve, and that
    /// `n * g` is the identity.
    pub fn new(
        p: U256,
        a: U256,
        b: U256,
        g: Point,
        n: U256,
        h_cof: u32,
    ) -> Result<CurveParams, CryptoError> {
        if p.is_even() || p <= U256::ONE {
            return Err(CryptoError::InvalidCurve("field modulus must be an odd prime"));
        }
        if n.is_even() || n <= U256::ONE {
            // ECDSA works modulo the generator order, so n must be an odd
            // prime; even orders have no Montgomery context either.
            return Err(CryptoError::InvalidCurve("group order must be an odd prime"));
        }
        if h_cof == 0 {
            return Err(CryptoError::InvalidCurve("cofactor must be positive"));
        }
        let field = FieldCtx::new(p);
        let scalar = FieldCtx::new(n);
        let a = field.reduce(&a);
        let b = field.reduce(&b);

        // 4a³ + 27b² ≠ 0 (mod p); reduce the constants for tiny fields.
        let four = field.reduce(&U256::from_u64(4));
        let twenty_seven = field.reduce(&U256::from_u64(27));
        let four_a3 = field.mul(&four, &field.mul(&a, &field.sqr(&a)));
        let twenty_seven_b2 = field.mul(&twenty_seven, &field.sqr(&b));
        if field.add(&four_a3, &twenty_seven_b2).is_zero() {
            return Err(CryptoError::InvalidCurve("singular curve: 4a^3 + 27b^2 = 0"));
        }

        let params = CurveParams { p, a, b, g, n, h_cof, field, scalar };
        if !params.contains(&g) || g.is_infinity() {
            return Err(CryptoError::InvalidCurve("generator is not a finite curve point"));
        }
        if !params.mul_unchecked(&n, &g).is_infinity() {
            return Err(CryptoError::InvalidCurve("generator order does not match n"));
        }
        Ok(params)
    }

    fn secp256k1() -> CurveParams {
        let hex = |s| U256::from_hex(s).expect("literal");
        CurveParams::new(
            hex("fffffffffffffffffffffffffffffffffffffffffffffffffffffffefffffc2f"),
            U256::ZERO,
            U256::from_u64(7),
            Point::affine(
                hex("79be667ef9dcbbac55a06295ce870b07029bfcdb2dce28d959f2815b16f81798"),
                hex("483ada7726a3c4655da4fbfc0e1108a8fd17b448a68554199c47d08ffb10d4b8"),
            ),
            hex("fffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364141"),
            1,
        )
        .expect("secp256k1 parameters are valid")
    }

    fn toy17() -> CurveParams {
        CurveParams::new(
            U256::from_u64(17),
            U256::from_u64(2),
            U256::from_u64(2),
            Point::affine(U256::from_u64(5), U256::from_u64(1)),
            U256::from_u64(19),
            1,
        )
        .expect("toy curve parameters are valid")
    }

    pub fn p(&self) -> &U256 {
        &self.p
    }
    pub fn a(&self) -> &U256 {
        &self.a
    }
    pub fn b(&self) -> &U256 {
        &self.b
    }
    pub fn g(&self) -> &Point {
        &self.g
    }
    pub fn n(&self) -> &U256 {
        &self.n
    }
    pub fn h_cof(&self) -> u32 {
        self.h_cof
    }

    /// True for the identity and for affine points satisfying the curve
    /// equation with in-range coordinates.
    pub fn contains(&self, point: &Point) -> bool {
        match point {
            Point::Infinity => true,
            Point::Affine { x, y } => {
                if *x >= self.p || *y >= self.p {
                    return false;
                }
                let lhs = self.field.sqr(y);
                let rhs = self.curve_rhs(x);
                lhs == rhs
            }
        }
    }

    /// x³ + ax + b (mod p).
    pub(crate) fn curve_rhs(&self, x: &U256) -> U256 {
        let x3 = self.field.mul(x, &self.field.sqr(x));
        let ax = self.field.mul(&self.a, x);
        self.field.add(&self.field.add(&x3, &ax), &self.b)
    }

    fn check(&self, point: &Point) -> Result<(), CryptoError> {
        if self.contains(point) {
            Ok(())
        } else {
            Err(CryptoError::InvalidPoint)
        }
    }

    fn add_unchecked(&self, p1: &Point, p2: &Point) -> Point {
        let ((x1, y1), (x2, y2)) = match (p1.coordinates(), p2.coordinates()) {
            (None, _) => return *p2,
            (_, None) => return *p1,
            (Some(a), Some(b)) => (a, b),
        };
        if x1 == x2 {
            return if y1 == y2 {
                self.double_unchecked(p1)
            } else {
                // y2 = -y1: vertical chord.
                Point::Infinity
            };
        }
        let f = &self.field;
        // λ = (y2 - y1) / (x2 - x1)
        let lambda = f.mul(
            &f.sub(&y2, &y1),
            &f.inv(&f.sub(&x2, &x1)).expect("x1 != x2"),
        );
        let x3 = f.sub(&f.sub(&f.sqr(&lambda), &x1), &x2);
        let y3 = f.sub(&f.mul(&lambda, &f.sub(&x1, &x3)), &y1);
        Point::affine(x3, y3)
    }

    fn double_unchecked(&self, p1: &Point) -> Point {
        let (x, y) = match p1.coordinates() {
            None => return Point::Infinity,
            Some(c) => c,
        };
        if y.is_zero() {
            // Vertical tangent.
            return Point::Infinity;
        }
        let f = &self.field;
        // λ = (3x² + a) / (2y)
        let three = f.reduce(&U256::from_u64(3));
        let numerator = f.add(&f.mul(&three, &f.sqr(&x)), &self.a);
        let denominator = f.add(&y, &y);
        let lambda = f.mul(&numerator, &f.inv(&denominator).expect("y != 0"));
        let x3 = f.sub(&f.sub(&f.sqr(&lambda), &x), &x);
        let y3 = f.sub(&f.mul(&lambda, &f.sub(&x, &x3)), &y);
        Point::affine(x3, y3)
    }

    pub(crate) fn mul_unchecked(&self, k: &U256, point: &Point) -> Point {
        let mut acc = Point::Infinity;
        for i in (0..k.bits()).rev() {
            acc = self.double_unchecked(&acc);
            if k.bit(i) {
                acc = self.add_unchecked(&acc, point);
            }
        }
        acc
    }

    /// u1·P + u2·Q for points already known to lie on the curve, via one
    /// shared double-and-add pass over both scalars.
    pub(crate) fn lincomb_unchecked(
        &self,
        u1: &U256,
        p: &Point,
        u2: &U256,
        q: &Point,
    ) -> Point {
        let pq = self.add_unchecked(p, q);
        let mut acc = Point::Infinity;
        for i in (0..u1.bits().max(u2.bits())).rev() {
            acc = self.double_unchecked(&acc);
            acc = match (u1.bit(i), u2.bit(i)) {
                (true, true) => self.add_unchecked(&acc, &pq),
                (true, false) => self.add_unchecked(&acc, p),
                (false, true) => self.add_unchecked(&acc, q),
                (false, false) => acc,
            };
        }
        acc
    }

    /// Negate a point: (x, y) -> (x, -y).
    pub fn negate(&self, point: &Point) -> Point {
        match point.coordinates() {
            None => Point::Infinity,
            Some((x, y)) => Point::affine(x, self.field.neg(&y)),
        }
    }
}

/// Group addition. The identity is [`Point::Infinity`]; adding a point to
/// its reflection yields the identity.
pub fn point_add(p1: &Point, p2: &Point, curve: &CurveParams) -> Result<Point, CryptoError> {
    curve.check(p1)?;
    curve.check(p2)?;
    Ok(curve.add_unchecked(p1, p2))
}

/// Tangent-line doubling. Doubling the identity or a point with y = 0
/// yields the identity.
pub fn point_double(p1: &Point, curve: &CurveParams) -> Result<Point, CryptoError> {
    curve.check(p1)?;
    Ok(curve.double_unchecked(p1))
}

/// k·P by double-and-add. k = 0 yields the identity.
pub fn scalar_mul(k: &U256, p1: &Point, curve: &CurveParams) -> Result<Point, CryptoError> {
    curve.check(p1)?;
    Ok(curve.mul_unchecked(k, p1))
}
