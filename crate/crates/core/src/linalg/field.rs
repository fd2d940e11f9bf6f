use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use malachite_base::num::arithmetic::traits::Reciprocal;
use malachite_base::num::basic::traits::{One, Zero};
use malachite_q::Rational;

use super::LinalgError;

/// The coefficient field. Arithmetic in either case is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    /// `GF(p)`; fails unless `p` is a prime below 2^32.
    pub fn prime(p: u64) -> Result<Field, LinalgError> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rat(Rational::ZERO),
            Field::Prime(p) => Scalar::Mod { r: 0, p: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rat(Rational::ONE),
            Field::Prime(p) => Scalar::Mod { r: 1 % p, p: *p },
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rat(Rational::from(v)),
            Field::Prime(p) => Scalar::Mod {
                r: v.rem_euclid(*p as i64) as u64,
                p: *p,
            },
        }
    }

    /// Builds `num/den`; `den` must be invertible in the field.
    pub fn fraction(&self, num: i64, den: i64) -> Result<Scalar, LinalgError> {
        let d = self.from_i64(den);
        let inv = d
            .inv()
            .ok_or_else(|| LinalgError::Parse(format!("denominator {den} is zero in {self}")))?;
        Ok(&self.from_i64(num) * &inv)
    }

    /// Parses an exact literal: an integer `"-3"` or a fraction `"a/b"`.
    /// Decimal points are rejected.
    pub fn parse(&self, literal: &str) -> Result<Scalar, LinalgError> {
        let s = literal.trim();
        if s.is_empty() || s.contains('.') || s.contains('e') || s.contains('E') {
            return Err(LinalgError::Parse(format!("`{literal}` is not an exact literal")));
        }
        match self {
            Field::Rationals => Rational::from_str(s)
                .map(Scalar::Rat)
                .map_err(|_| LinalgError::Parse(format!("`{literal}` is not a rational literal"))),
            Field::Prime(_) => {
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s, "1"),
                };
                let n: i64 = n
                    .parse()
                    .map_err(|_| LinalgError::Parse(format!("`{literal}` is not an integer literal")))?;
                let d: i64 = d
                    .parse()
                    .map_err(|_| LinalgError::Parse(format!("`{literal}` is not an integer literal")))?;
                self.fraction(n, d)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for Field {
    type Err = LinalgError;

    /// Accepts `Q`, `GF(p)`, `GF:p` and `GFp`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "Q" || t.eq_ignore_ascii_case("rationals") {
            return Ok(Field::Rationals);
        }
        let rest = t
            .strip_prefix("GF")
            .ok_or_else(|| LinalgError::Parse(format!("unknown field `{s}`")))?;
        let digits = rest.trim_start_matches([':', '(']).trim_end_matches(')');
        let p: u64 = digits
            .parse()
            .map_err(|_| LinalgError::Parse(format!("unknown field `{s}`")))?;
        Field::prime(p)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// An element of a [`Field`]. Rationals are kept in lowest terms by
/// `malachite`, residues in `0..p`, so derived equality is field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(Rational),
    Mod { r: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Rationals,
            Scalar::Mod { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(q) => *q == Rational::ZERO,
            Scalar::Mod { r, .. } => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(q) => *q == Rational::ONE,
            Scalar::Mod { r, .. } => *r == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rat(q) => Scalar::Rat(q.reciprocal()),
            Scalar::Mod { r, p } => Scalar::Mod {
                r: pow_mod(*r, p - 2, *p),
                p: *p,
            },
        })
    }

    /// `self^e` for a non-negative exponent.
    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `self += a * b`, the inner loop of every elimination.
    pub fn add_mul(&mut self, a: &Scalar, b: &Scalar) {
        match (self, a, b) {
            (Scalar::Rat(s), Scalar::Rat(x), Scalar::Rat(y)) => *s += x * y,
            (Scalar::Mod { r, p }, Scalar::Mod { r: x, .. }, Scalar::Mod { r: y, .. }) => {
                *r = ((*r as u128 + (*x as u128) * (*y as u128)) % (*p as u128)) as u64
            }
            _ => panic!("mixed-field arithmetic"),
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(q) => write!(f, "{q}"),
            Scalar::Mod { r, .. } => write!(f, "{r}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { r: a, p }, Scalar::Mod { r: b, p: q }) if p == q => Scalar::Mod {
                r: ((*a as u128 + *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => panic!("mixed-field arithmetic"),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { r: a, p }, Scalar::Mod { r: b, p: q }) if p == q => Scalar::Mod {
                r: ((*a as u128 * *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => panic!("mixed-field arithmetic"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { r, p } => Scalar::Mod { r: (p - r) % p, p: *p },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_canonical() {
        let q = Field::Rationals;
        let a = q.parse("2/4").unwrap();
        let b = q.parse("1/2").unwrap();
        assert_eq!(a, b);
        assert_eq!(q.parse("3/6").unwrap(), b);
        assert_eq!(format!("{}", q.parse("-6/4").unwrap()), "-3/2");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(7).unwrap();
        let a = f.from_i64(3);
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        assert_eq!(f.from_i64(-1), f.from_i64(6));
        assert_eq!(f.parse("1/2").unwrap(), f.from_i64(4));
        assert!(f.parse("1/7").is_err());
        assert_eq!(f.from_i64(2).pow(3), f.from_i64(1));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Field::prime(9), Err(LinalgError::NotPrime(9))));
        assert!(Field::Rationals.parse("0.5").is_err());
        assert!(Field::Rationals.parse("abc").is_err());
        assert_eq!("GF(3)".parse::<Field>().unwrap(), Field::Prime(3));
        assert_eq!("GF:5".parse::<Field>().unwrap(), Field::Prime(5));
        assert!("GF:4".parse::<Field>().is_err());
    }

    #[test]
    fn add_mul_matches_ops() {
        for field in [Field::Rationals, Field::Prime(5)] {
            let mut s = field.from_i64(2);
            s.add_mul(&field.from_i64(3), &field.from_i64(4));
            assert_eq!(s, field.from_i64(14));
        }
    }
}
