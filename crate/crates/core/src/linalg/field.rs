//! Coefficient fields: the rationals and prime fields GF(p).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest modulus accepted for a prime field.
pub const MAX_PRIME: u64 = 1 << 31;

/// The coefficient domain of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    /// GF(p), checking that `p` is a prime no larger than 2^31.
    pub fn prime(p: u64) -> Result<Self> {
        if !(2..=MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidField(format!(
                "{p} is not a prime in [2, 2^31]"
            )));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => Scalar::Prime {
                value: n.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    /// The fraction `num/den` in this field; `None` when `den` vanishes here.
    pub fn from_ratio(&self, num: i64, den: i64) -> Option<Scalar> {
        self.from_i64(den)
            .inv()
            .map(|inv| &self.from_i64(num) * &inv)
    }

    /// Parses "n", "-n" or "n/d". Prime-field inputs are reduced mod p.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let bad = || Error::Parse(format!("malformed scalar {text:?}"));
        let text = text.trim();
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        match *self {
            FieldSpec::Rational => Ok(Scalar::Rational(BigRational::new(num, den))),
            FieldSpec::Prime(p) => {
                let modulus = BigInt::from(p);
                let reduce = |x: &BigInt| -> u64 {
                    let r = x % &modulus;
                    let r = if r.is_negative() { r + &modulus } else { r };
                    r.to_u64().expect("residue fits in u64")
                };
                let n = Scalar::Prime {
                    value: reduce(&num),
                    p,
                };
                let d = Scalar::Prime {
                    value: reduce(&den),
                    p,
                };
                let inv = d.inv().ok_or_else(|| {
                    Error::Parse(format!("denominator of {text:?} vanishes mod {p}"))
                })?;
                Ok(&n * &inv)
            }
        }
    }

    /// Every element of a prime field, in increasing residue order.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match *self {
            FieldSpec::Rational => None,
            FieldSpec::Prime(p) => Some((0..p).map(|value| Scalar::Prime { value, p }).collect()),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// Trial division; moduli are at most 2^31.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// An exact field element. Rationals are kept in lowest terms with a
/// positive denominator, prime-field residues in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rational,
            Scalar::Prime { p, .. } => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse; `None` for zero. Prime fields use x^(p-2).
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Prime { value, p } => Scalar::Prime {
                value: pow_mod(*value, p - 2, *p),
                p: *p,
            },
        })
    }

    pub fn pow(&self, mut exp: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Residue of a prime-field element.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Prime { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    /// Text form: "n/d", or "n" when the denominator is one.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    fn expect_same(&self, other: &Scalar) {
        assert_eq!(
            self.field(),
            other.field(),
            "arithmetic between scalars of different fields"
        );
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.expect_same(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { value: a, p }, Scalar::Prime { value: b, .. }) => Scalar::Prime {
                value: (a + b) % p,
                p: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.expect_same(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Prime { value: a, p }, Scalar::Prime { value: b, .. }) => Scalar::Prime {
                value: (a + p - b) % p,
                p: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.expect_same(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { value: a, p }, Scalar::Prime { value: b, .. }) => Scalar::Prime {
                value: a * b % p,
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
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { value, p } => Scalar::Prime {
                value: (p - value) % p,
                p: *p,
            },
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_spec_rejects_composites() {
        assert!(FieldSpec::prime(7).is_ok());
        assert!(FieldSpec::prime(9).is_err());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime((1 << 31) + 1).is_err());
    }

    #[test]
    fn parse_and_display() {
        let q = FieldSpec::Rational;
        assert_eq!(q.parse("6/4").unwrap().to_text(), "3/2");
        assert_eq!(q.parse("-2/-4").unwrap().to_text(), "1/2");
        assert_eq!(q.parse("5").unwrap().to_text(), "5");
        assert_eq!(q.parse("3/-6").unwrap().to_text(), "-1/2");
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("x").is_err());
        let f5 = FieldSpec::Prime(5);
        assert_eq!(f5.parse("-1").unwrap().residue(), Some(4));
        assert_eq!(f5.parse("1/2").unwrap().residue(), Some(3));
        assert!(f5.parse("1/5").is_err());
    }

    #[test]
    fn gf2_characteristic_two() {
        let f2 = FieldSpec::Prime(2);
        assert!((&f2.one() + &f2.one()).is_zero());
        assert_eq!(-&f2.one(), f2.one());
    }

    proptest! {
        #[test]
        fn rational_reciprocal_round_trip(n in -1000i64..1000, d in 1i64..1000) {
            prop_assume!(n != 0);
            let q = FieldSpec::Rational;
            let x = q.from_ratio(n, d).unwrap();
            let y = q.from_ratio(d, n).unwrap();
            prop_assert!((&x * &y).is_one());
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }

        #[test]
        fn fermat_inverse(p in prop::sample::select(vec![2u64, 3, 5, 7, 101, 65537, 2147483647]), x in 1u64..u64::MAX) {
            let f = FieldSpec::Prime(p);
            let a = f.from_i64((x % p) as i64);
            prop_assume!(!a.is_zero());
            prop_assert!((&a * &a.pow(p - 2)).is_one());
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }
}
