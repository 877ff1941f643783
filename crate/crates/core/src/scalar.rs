//! Exact field elements.
//!
//! Two backends share one [`Scalar`] type: arbitrary-precision rationals
//! (the default, used for every verdict) and small prime fields (a cheap
//! cross-check for the linear algebra). Every value is kept in canonical
//! form, so equality is structural.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Modulus used when a prime field is requested without an explicit one.
pub const DEFAULT_PRIME: u64 = 101;

/// Largest accepted prime modulus. Keeps products comfortably inside `u128`
/// and trial division fast.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed field descriptors: {0} and {1}")]
    FieldMismatch(Field, Field),
    #[error("malformed scalar text {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
}

/// Which field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Prime field with modulus `p`; primality is checked by trial division.
    pub fn prime(p: u64) -> Result<Field, ScalarError> {
        if is_prime(p) && p <= MAX_PRIME {
            Ok(Field::Prime(p))
        } else {
            Err(ScalarError::NotPrime(p))
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, value: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(value))),
            Field::Prime(p) => Scalar::Prime {
                value: value.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// Parses `"±d+(/d+)?"` over the rationals or `"d+"` over a prime field.
    pub fn parse(self, text: &str) -> Result<Scalar, ScalarError> {
        let malformed = || ScalarError::Malformed(text.to_string());
        match self {
            Field::Rational => {
                let (num, den) = match text.split_once('/') {
                    Some((num, den)) => (num, Some(den)),
                    None => (text, None),
                };
                let digits = num.strip_prefix(['+', '-']).unwrap_or(num);
                if !is_digits(digits) || !den.is_none_or(is_digits) {
                    return Err(malformed());
                }
                let num: BigInt = num.parse().map_err(|_| malformed())?;
                let den: BigInt = match den {
                    Some(den) => den.parse().map_err(|_| malformed())?,
                    None => BigInt::one(),
                };
                if den.is_zero() {
                    return Err(ScalarError::ZeroDenominator(text.to_string()));
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            Field::Prime(p) => {
                if !is_digits(text) {
                    return Err(malformed());
                }
                let value: BigInt = text.parse().map_err(|_| malformed())?;
                let reduced = value.mod_floor(&BigInt::from(p));
                let value = u64::try_from(reduced).expect("residue below modulus fits in u64");
                Ok(Scalar::Prime { value, modulus: p })
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "rational"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An exact field element in canonical form.
///
/// Rationals are reduced with a positive denominator; prime-field values
/// lie in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { modulus, .. } => Field::Prime(*modulus),
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

    /// Field operation with explicit errors for mixed fields and division
    /// by zero.
    pub fn arith(&self, other: &Scalar, op: ArithOp) -> Result<Scalar, ScalarError> {
        if self.field() != other.field() {
            return Err(ScalarError::FieldMismatch(self.field(), other.field()));
        }
        if op == ArithOp::Div && other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(match op {
                ArithOp::Add => a + b,
                ArithOp::Sub => a - b,
                ArithOp::Mul => a * b,
                ArithOp::Div => a / b,
            }),
            (&Scalar::Prime { value: a, modulus: p }, &Scalar::Prime { value: b, .. }) => {
                let value = match op {
                    ArithOp::Add => (a + b) % p,
                    ArithOp::Sub => (a + p - b) % p,
                    ArithOp::Mul => mul_mod(a, b, p),
                    ArithOp::Div => mul_mod(a, inv_mod(b, p), p),
                };
                Scalar::Prime { value, modulus: p }
            }
            _ => unreachable!("field equality checked above"),
        })
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.arith(other, ArithOp::Add)
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.arith(other, ArithOp::Sub)
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.arith(other, ArithOp::Mul)
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.arith(other, ArithOp::Div)
    }

    pub fn inverse(&self) -> Result<Scalar, ScalarError> {
        self.field().one().checked_div(self)
    }

    /// Canonical text: `num/den`, with `/den` omitted when the denominator
    /// is 1. Prime-field values print as their residue.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) for prime p.
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    result
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

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(_) => write!(f, "{self}"),
            Scalar::Prime { value, modulus } => write!(f, "{value} (mod {modulus})"),
        }
    }
}

// Operator impls are for engine code where both operands come from the same
// field by construction. A field mismatch there is a bug, so they panic;
// use `arith` for untrusted operands.
macro_rules! impl_op {
    ($trait:ident, $method:ident, $op:expr) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.arith(rhs, $op).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

impl_op!(Add, add, ArithOp::Add);
impl_op!(Sub, sub, ArithOp::Sub);
impl_op!(Mul, mul, ArithOp::Mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            &Scalar::Prime { value, modulus } => Scalar::Prime {
                value: (modulus - value) % modulus,
                modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
