//! Exact field elements: arbitrary-precision rationals and residues modulo a small prime.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldSpec {
    Rational,
    Prime { p: u32 },
}

impl FieldSpec {
    /// A prime field, rejecting composite or oversized moduli.
    pub fn prime(p: u32) -> Result<FieldSpec> {
        if p >= 1 << 16 {
            return Err(Error::Field(format!("modulus {p} is not below 2^16")));
        }
        if !is_prime(p) {
            return Err(Error::Field(format!("modulus {p} is not prime")));
        }
        Ok(FieldSpec::Prime { p })
    }

    pub fn is_prime_field(self) -> bool {
        matches!(self, FieldSpec::Prime { .. })
    }

    pub fn modulus(self) -> Option<u32> {
        match self {
            FieldSpec::Rational => None,
            FieldSpec::Prime { p } => Some(p),
        }
    }

    /// Checks the invariants of a field read from untrusted input.
    pub fn validate(self) -> Result<FieldSpec> {
        match self {
            FieldSpec::Rational => Ok(self),
            FieldSpec::Prime { p } => FieldSpec::prime(p),
        }
    }

    pub fn zero(self) -> Scalar {
        Scalar::zero(self)
    }

    pub fn one(self) -> Scalar {
        Scalar::one(self)
    }

    pub fn int(self, v: i64) -> Scalar {
        Scalar::from_i64(self, v)
    }

    /// All field elements, for prime fields only.
    pub fn elements(self) -> Option<Vec<Scalar>> {
        self.modulus()
            .map(|p| (0..p).map(|v| Scalar::Fp { v, p }).collect())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime { p } => write!(f, "F_{p}"),
        }
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element.
///
/// Rationals are kept in lowest terms with positive denominator (guaranteed by
/// `BigRational`), residues lie in `[0, p)`. Mixing fields in one operation is a
/// programming error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u32, p: u32 },
}

impl Scalar {
    pub fn zero(field: FieldSpec) -> Scalar {
        match field {
            FieldSpec::Rational => Scalar::Q(BigRational::zero()),
            FieldSpec::Prime { p } => Scalar::Fp { v: 0, p },
        }
    }

    pub fn one(field: FieldSpec) -> Scalar {
        match field {
            FieldSpec::Rational => Scalar::Q(BigRational::one()),
            FieldSpec::Prime { p } => Scalar::Fp { v: 1 % p, p },
        }
    }

    pub fn from_i64(field: FieldSpec, value: i64) -> Scalar {
        match field {
            FieldSpec::Rational => Scalar::Q(BigRational::from_integer(value.into())),
            FieldSpec::Prime { p } => Scalar::Fp {
                v: value.rem_euclid(p as i64) as u32,
                p,
            },
        }
    }

    /// Maps a rational into the given field; fails when the denominator vanishes mod p.
    pub fn from_rational(field: FieldSpec, q: &BigRational) -> Result<Scalar> {
        match field {
            FieldSpec::Rational => Ok(Scalar::Q(q.clone())),
            FieldSpec::Prime { p } => {
                let modp = |x: &BigInt| -> u32 {
                    x.mod_floor(&BigInt::from(p)).to_u32().expect("residue fits")
                };
                let num = modp(q.numer());
                let den = modp(q.denom());
                if den == 0 {
                    return Err(Error::Parse(format!(
                        "denominator of {q} vanishes modulo {p}"
                    )));
                }
                let den_inv = Scalar::Fp { v: den, p }.inv().expect("nonzero");
                Ok(&Scalar::Fp { v: num, p } * &den_inv)
            }
        }
    }

    /// Parses `"3"`, `"-7/2"` and similar into the given field.
    pub fn parse(field: FieldSpec, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| Error::Parse(format!("bad scalar {s:?}")))?;
        let den = BigInt::from_str(den).map_err(|_| Error::Parse(format!("bad scalar {s:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Scalar::from_rational(field, &BigRational::new(num, den))
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Q(_) => FieldSpec::Rational,
            Scalar::Fp { p, .. } => FieldSpec::Prime { p: *p },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match self {
            Scalar::Q(q) => Some(Scalar::Q(q.recip())),
            Scalar::Fp { v, p } => {
                let (mut r0, mut r1) = (*p as i64, *v as i64);
                let (mut t0, mut t1) = (0i64, 1i64);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (t0, t1) = (t1, t0 - q * t1);
                }
                Some(Scalar::Fp {
                    v: t0.rem_euclid(*p as i64) as u32,
                    p: *p,
                })
            }
        }
    }

    /// Inverse in a prime field via Fermat's little theorem.
    pub fn fermat_inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Fp { v, p } if *v != 0 => Some(self.pow(*p as u64 - 2)),
            _ => None,
        }
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one(self.field());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        other.inv().map(|i| self * &i)
    }

    /// Adds `a * b` into `self`.
    pub fn add_mul(&mut self, a: &Scalar, b: &Scalar) {
        match (&mut *self, a, b) {
            (Scalar::Fp { v, p }, Scalar::Fp { v: x, p: pa }, Scalar::Fp { v: y, p: pb }) => {
                assert!(*p == *pa && *p == *pb, "field mismatch");
                *v = ((*v as u64 + *x as u64 * *y as u64) % *p as u64) as u32;
            }
            _ => {
                let t = a * b;
                *self = &*self + &t;
            }
        }
    }

    /// Rational value, if this is a rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(q) => Some(q),
            Scalar::Fp { .. } => None,
        }
    }

    /// Small integer representative: the rational itself when integral, the residue otherwise.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Q(q) if q.is_integer() => q.numer().to_i64(),
            Scalar::Q(_) => None,
            Scalar::Fp { v, .. } => Some(*v as i64),
        }
    }

    /// Reinterprets a value in another field (rationals reduce modulo p).
    pub fn convert(&self, field: FieldSpec) -> Result<Scalar> {
        match self {
            Scalar::Q(q) => Scalar::from_rational(field, q),
            Scalar::Fp { p, .. } => match field {
                FieldSpec::Prime { p: p2 } if p2 == *p => Ok(self.clone()),
                _ => Err(Error::Field(format!(
                    "cannot move a residue mod {p} into {field}"
                ))),
            },
        }
    }

    fn check(&self, other: &Scalar) {
        assert_eq!(self.field(), other.field(), "field mismatch");
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: ((*a as u64 + *b as u64) % *p as u64) as u32,
                p: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: ((*a as u64 + *p as u64 - *b as u64) % *p as u64) as u32,
                p: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: ((*a as u64 * *b as u64) % *p as u64) as u32,
                p: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: (*p - *v) % *p,
                p: *p,
            },
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
