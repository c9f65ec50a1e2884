//! Exact coefficient fields.
//!
//! Two fields are supported: the rationals (arbitrary precision) and prime
//! fields `GF(p)` for any prime `p < 2^64`. Engines are generic over the
//! [`Field`] trait; the tagged [`Scalar`] value type is used at the text and
//! report boundary, where the field is only known at run time.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default working prime.
pub const DEFAULT_PRIME: u64 = 32003;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldDescriptor, FieldDescriptor),
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("invalid scalar literal {0:?}")]
    InvalidLiteral(String),
    #[error("invalid field specification {0:?} (expected `q` or `gf:<p>`)")]
    InvalidDescriptor(String),
}

/// Which field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldDescriptor {
    Rationals,
    PrimeField(u64),
}

impl FieldDescriptor {
    /// Validated prime field descriptor.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(FieldDescriptor::PrimeField(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::Rationals => 0,
            FieldDescriptor::PrimeField(p) => *p,
        }
    }
}

impl Default for FieldDescriptor {
    fn default() -> Self {
        FieldDescriptor::PrimeField(DEFAULT_PRIME)
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "q"),
            FieldDescriptor::PrimeField(p) => write!(f, "gf:{p}"),
        }
    }
}

impl FromStr for FieldDescriptor {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "q" | "Q" | "qq" | "QQ" => Ok(FieldDescriptor::Rationals),
            _ => {
                let rest = s
                    .strip_prefix("gf:")
                    .or_else(|| s.strip_prefix("GF:"))
                    .ok_or_else(|| FieldError::InvalidDescriptor(s.to_string()))?;
                let p: u64 = rest
                    .parse()
                    .map_err(|_| FieldError::InvalidDescriptor(s.to_string()))?;
                FieldDescriptor::prime(p)
            }
        }
    }
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// A field whose elements are plain values; all arithmetic goes through the
/// field object.
pub trait Field: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync + 'static;

    fn descriptor(&self) -> FieldDescriptor;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Exact rational image; fails in `GF(p)` when `p` divides the denominator.
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem, FieldError>;
    fn to_scalar(&self, a: &Self::Elem) -> Scalar;
    /// Uniform element for `GF(p)`; a small integer in `[-50, 50]` over Q.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    /// `a - b * c`
    fn sub_mul(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(b, c))
    }

    fn from_scalar(&self, s: &Scalar) -> Result<Self::Elem, FieldError> {
        let desc = s.descriptor();
        match s {
            Scalar::Rational(q) => self.from_rational(q),
            Scalar::Residue { value, modulus } => {
                if self.descriptor() != desc {
                    return Err(FieldError::FieldMismatch(self.descriptor(), desc));
                }
                debug_assert!(value < modulus);
                self.from_rational(&BigRational::from_integer(BigInt::from(*value)))
            }
        }
    }

    fn parse(&self, text: &str) -> Result<Self::Elem, FieldError> {
        self.from_rational(&parse_rational(text)?)
    }

    fn format(&self, a: &Self::Elem) -> String {
        self.to_scalar(a).to_string()
    }
}

/// The field of rational numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational, FieldError> {
        Ok(q.clone())
    }
    fn to_scalar(&self, a: &BigRational) -> Scalar {
        Scalar::Rational(a.clone())
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-50..=50))
    }
}

/// `GF(p)` with residues stored in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_bigint(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = v.mod_floor(&m);
        r.to_u64().expect("residue fits in u64")
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::PrimeField(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        let r = (v as i128).rem_euclid(self.p as i128);
        r as u64
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = *a as u128 + *b as u128;
        let p = self.p as u128;
        (if s >= p { s - p } else { s }) as u64
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            (self.p - b) + a
        }
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        if self.p < (1 << 32) {
            (a * b) % self.p
        } else {
            mul_mod(*a, *b, self.p)
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on i128 to cover the full u64 range
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(t0.rem_euclid(self.p as i128) as u64)
    }
    #[inline]
    fn sub_mul(&self, a: &u64, b: &u64, c: &u64) -> u64 {
        self.sub(a, &self.mul(b, c))
    }
    fn from_rational(&self, q: &BigRational) -> Result<u64, FieldError> {
        let num = self.reduce_bigint(q.numer());
        let den = self.reduce_bigint(q.denom());
        let inv = self.inv(&den).ok_or(FieldError::DivisionByZero)?;
        Ok(self.mul(&num, &inv))
    }
    fn to_scalar(&self, a: &u64) -> Scalar {
        Scalar::Residue {
            value: *a,
            modulus: self.p,
        }
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
}

/// Arithmetic operation selector for [`field_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A field element tagged with its field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn descriptor(&self) -> FieldDescriptor {
        match self {
            Scalar::Rational(_) => FieldDescriptor::Rationals,
            Scalar::Residue { modulus, .. } => FieldDescriptor::PrimeField(*modulus),
        }
    }

    pub fn rational(num: i64, den: i64) -> Result<Scalar, FieldError> {
        if den == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Scalar::Rational(BigRational::new(num.into(), den.into())))
    }

    pub fn residue(value: i64, modulus: u64) -> Result<Scalar, FieldError> {
        let f = PrimeField::new(modulus)?;
        Ok(f.to_scalar(&f.from_i64(value)))
    }

    pub fn zero(desc: FieldDescriptor) -> Scalar {
        match desc {
            FieldDescriptor::Rationals => Scalar::Rational(BigRational::zero()),
            FieldDescriptor::PrimeField(p) => Scalar::Residue { value: 0, modulus: p },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn parse(text: &str, desc: FieldDescriptor) -> Result<Scalar, FieldError> {
        let q = parse_rational(text)?;
        match desc {
            FieldDescriptor::Rationals => Ok(Scalar::Rational(q)),
            FieldDescriptor::PrimeField(p) => {
                let f = PrimeField::new(p)?;
                Ok(f.to_scalar(&f.from_rational(&q)?))
            }
        }
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        match self {
            Scalar::Rational(q) => Rationals
                .inv(q)
                .map(Scalar::Rational)
                .ok_or(FieldError::DivisionByZero),
            Scalar::Residue { value, modulus } => {
                let f = PrimeField::new(*modulus)?;
                f.inv(value)
                    .map(|v| f.to_scalar(&v))
                    .ok_or(FieldError::DivisionByZero)
            }
        }
    }
}

/// Exact arithmetic on tagged scalars.
pub fn field_arith(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar, FieldError> {
    match (a, b) {
        (Scalar::Rational(x), Scalar::Rational(y)) => {
            let q = match op {
                ArithOp::Add => x + y,
                ArithOp::Sub => x - y,
                ArithOp::Mul => x * y,
                ArithOp::Div => {
                    if y.is_zero() {
                        return Err(FieldError::DivisionByZero);
                    }
                    x / y
                }
            };
            Ok(Scalar::Rational(q))
        }
        (
            Scalar::Residue { value: x, modulus: p },
            Scalar::Residue { value: y, modulus: q },
        ) if p == q => {
            let f = PrimeField::new(*p)?;
            let v = match op {
                ArithOp::Add => f.add(x, y),
                ArithOp::Sub => f.sub(x, y),
                ArithOp::Mul => f.mul(x, y),
                ArithOp::Div => f.div(x, y).ok_or(FieldError::DivisionByZero)?,
            };
            Ok(f.to_scalar(&v))
        }
        _ => Err(FieldError::FieldMismatch(a.descriptor(), b.descriptor())),
    }
}

impl fmt::Display for Scalar {
    /// Rationals print as `a` or `a/b`; residues print as the representative
    /// of least absolute value, so `-1` rather than `p - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Residue { value, modulus } => {
                if *value > modulus / 2 {
                    write!(f, "-{}", modulus - value)
                } else {
                    write!(f, "{value}")
                }
            }
        }
    }
}

/// Parses `a`, `-a`, `a/b` or a finite decimal `a.bcd` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, FieldError> {
    let bad = || FieldError::InvalidLiteral(text.to_string());
    let s = text.trim();
    if s.is_empty() || !s.is_ascii() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_decimal(n.trim()).ok_or_else(bad)?;
        let d = parse_decimal(d.trim()).ok_or_else(bad)?;
        if d.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        return Ok(n / d);
    }
    parse_decimal(s).ok_or_else(bad)
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() {
        return None;
    }
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num = BigInt::parse_bytes(if digits.is_empty() { b"0" } else { digits.as_bytes() }, 10)?;
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let q = BigRational::new(num, den);
    Some(if neg { -q } else { q })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::rational(n, d).unwrap()
    }

    #[test]
    fn rational_addition() {
        assert_eq!(field_arith(&q(1, 2), &q(1, 3), ArithOp::Add).unwrap(), q(5, 6));
    }

    #[test]
    fn inverse_in_gf7() {
        let five = Scalar::residue(5, 7).unwrap();
        assert_eq!(five.inv().unwrap(), Scalar::residue(3, 7).unwrap());
    }

    #[test]
    fn canonical_form() {
        let s = q(-2, -4);
        match &s {
            Scalar::Rational(r) => {
                assert_eq!(r.numer(), &BigInt::from(1));
                assert_eq!(r.denom(), &BigInt::from(2));
            }
            _ => unreachable!(),
        }
        assert_eq!(s.to_string(), "1/2");
        assert_eq!(q(3, -6).to_string(), "-1/2");
    }

    #[test]
    fn errors() {
        assert_eq!(
            field_arith(&q(1, 2), &q(0, 1), ArithOp::Div),
            Err(FieldError::DivisionByZero)
        );
        let a = Scalar::residue(1, 7).unwrap();
        let b = Scalar::residue(1, 11).unwrap();
        assert!(matches!(
            field_arith(&a, &b, ArithOp::Add),
            Err(FieldError::FieldMismatch(..))
        ));
        assert!(matches!(
            field_arith(&a, &q(1, 1), ArithOp::Mul),
            Err(FieldError::FieldMismatch(..))
        ));
        assert_eq!(PrimeField::new(32001), Err(FieldError::NotPrime(32001)));
    }

    #[test]
    fn primality() {
        let primes = [2u64, 3, 5, 32003, 65537, 2147483647, 18446744073709551557];
        for p in primes {
            assert!(is_prime(p), "{p}");
        }
        let composites = [0u64, 1, 4, 32001, 3215031751, 18446744073709551615, 341550071728321];
        for c in composites {
            assert!(!is_prime(c), "{c}");
        }
        // brute force below 2000
        for n in 0u64..2000 {
            let naive = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), naive, "{n}");
        }
    }

    #[test]
    fn large_prime_arithmetic() {
        let f = PrimeField::new(18446744073709551557).unwrap();
        let a = f.from_i64(-3);
        let ia = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &ia), 1);
    }

    #[test]
    fn descriptor_parse() {
        assert_eq!("q".parse::<FieldDescriptor>().unwrap(), FieldDescriptor::Rationals);
        assert_eq!(
            "gf:32003".parse::<FieldDescriptor>().unwrap(),
            FieldDescriptor::PrimeField(32003)
        );
        assert!("gf:32004".parse::<FieldDescriptor>().is_err());
        assert!("r".parse::<FieldDescriptor>().is_err());
    }

    #[test]
    fn literals() {
        assert_eq!(parse_rational("1.25").unwrap(), BigRational::new(5.into(), 4.into()));
        assert_eq!(parse_rational("-3/6").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("½").is_err());
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.parse("1/2").unwrap(), 4);
        assert!(f.parse("1/7").is_err());
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn small_q() -> impl Strategy<Value = BigRational> {
            (-40i64..40, 1i64..20).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
        }

        proptest! {
            #[test]
            fn gf_axioms(a in 0u64..32003, b in 0u64..32003, c in 0u64..32003) {
                let f = PrimeField::default();
                prop_assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
                prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
                prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
                prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
                if a != 0 {
                    prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
                }
                let s = f.to_scalar(&a);
                prop_assert_eq!(Scalar::parse(&s.to_string(), f.descriptor()).unwrap(), s);
            }

            #[test]
            fn q_axioms(a in small_q(), b in small_q(), c in small_q()) {
                let f = Rationals;
                prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
                prop_assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
                if !a.is_zero() {
                    prop_assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())));
                }
                let s = Scalar::Rational(a.clone());
                prop_assert_eq!(Scalar::parse(&s.to_string(), FieldDescriptor::Rationals).unwrap(), s);
            }
        }
    }
}
