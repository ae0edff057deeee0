//! Meadows: commutative rings with a total division.
//!
//! Evaluation is generic over the [`Meadow`] trait. Three backends ship with
//! the crate:
//!
//! * [`Rationals`], the involutive meadow of rationals over any integer
//!   type, with `x/0 = 0`;
//! * [`PrimeField`], the residues modulo a prime with `0⁻¹ = 0`;
//! * [`CommonRationals`], the rationals extended with an absorbing error
//!   element `a`, where `x/0 = a`.
//!
//! [`MeadowKind`] picks one of the three at run time over big integers and
//! carries [`MeadowValue`]s.

mod check;

pub use check::{
    check_identity, check_identity_parallel, check_identity_sampled, standard_axioms, Axiom,
    CheckError, CheckReport, CheckStatus, Expectation, Identity,
};

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::term::Term;

/// A total algebra over the divisive meadow signature.
pub trait Meadow {
    type Value: Clone + PartialEq + fmt::Debug + fmt::Display;

    fn zero(&self) -> Self::Value;
    fn one(&self) -> Self::Value;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn neg(&self, a: &Self::Value) -> Self::Value;
    /// Total division.
    fn div(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn is_zero(&self, a: &Self::Value) -> bool;

    /// Value of the numeral `n`, a sum of `n` units. The default builds it
    /// by binary doubling.
    fn numeral(&self, n: &BigUint) -> Self::Value {
        let mut acc = self.zero();
        let one = self.one();
        for i in (0..n.bits()).rev() {
            acc = self.add(&acc, &acc);
            if n.bit(i) {
                acc = self.add(&acc, &one);
            }
        }
        acc
    }

    /// All elements, for finite meadows.
    fn elements(&self) -> Option<Vec<Self::Value>> {
        None
    }
}

/// The involutive meadow of rationals over the integer type `T`.
///
/// With a fixed-width `T` arithmetic overflows like `T` does.
pub struct Rationals<T>(PhantomData<T>);

impl<T> Rationals<T> {
    pub fn new() -> Self {
        Rationals(PhantomData)
    }
}

impl<T> Default for Rationals<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> Clone for Rationals<T> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<T> Copy for Rationals<T> {}

impl<T> fmt::Debug for Rationals<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Rationals")
    }
}

fn integer_from_natural<T: Num>(n: &BigUint) -> T {
    T::from_str_radix(&n.to_str_radix(10), 10)
        .unwrap_or_else(|_| panic!("numeral {n} does not fit the integer type"))
}

impl<T> Meadow for Rationals<T>
where
    T: Integer + Signed + Clone + fmt::Debug + fmt::Display,
{
    type Value = Ratio<T>;

    fn zero(&self) -> Ratio<T> {
        Ratio::zero()
    }

    fn one(&self) -> Ratio<T> {
        Ratio::one()
    }

    fn add(&self, a: &Ratio<T>, b: &Ratio<T>) -> Ratio<T> {
        a + b
    }

    fn mul(&self, a: &Ratio<T>, b: &Ratio<T>) -> Ratio<T> {
        a * b
    }

    fn neg(&self, a: &Ratio<T>) -> Ratio<T> {
        -a.clone()
    }

    fn div(&self, a: &Ratio<T>, b: &Ratio<T>) -> Ratio<T> {
        if b.is_zero() {
            Ratio::zero()
        } else {
            a / b
        }
    }

    fn is_zero(&self, a: &Ratio<T>) -> bool {
        a.is_zero()
    }

    fn numeral(&self, n: &BigUint) -> Ratio<T> {
        Ratio::from_integer(integer_from_natural(n))
    }
}

/// The residue meadow of a prime `p`, with `0⁻¹ = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeadowError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {0} is too large (must be below 2^32)")]
    ModulusTooLarge(u64),
    #[error("unknown meadow {0:?}; expected q0, gf:P or common")]
    Unknown(String),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, MeadowError> {
        if p >= 1 << 32 {
            return Err(MeadowError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(MeadowError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }

    /// `x^(2p-3)`: equals `x^(p-2)` on nonzero `x` and is `0` at `0`, also
    /// for `p = 2`.
    pub fn inv(&self, x: u64) -> u64 {
        self.pow(x, 2 * self.p - 3)
    }
}

impl Meadow for PrimeField {
    type Value = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }

    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    fn div(&self, a: &u64, b: &u64) -> u64 {
        self.mul(a, &self.inv(*b))
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn numeral(&self, n: &BigUint) -> u64 {
        (n % self.p).to_u64().expect("residue fits u64")
    }

    fn elements(&self) -> Option<Vec<u64>> {
        Some((0..self.p).collect())
    }
}

/// Element of the common meadow: a rational or the error element `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CommonValue<V> {
    Value(V),
    Error,
}

impl<V: fmt::Display> fmt::Display for CommonValue<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommonValue::Value(v) => v.fmt(f),
            CommonValue::Error => f.write_str("a"),
        }
    }
}

/// The common meadow of rationals: `x/0 = a` and `a` absorbs every
/// operation.
pub struct CommonRationals<T>(PhantomData<T>);

impl<T> CommonRationals<T> {
    pub fn new() -> Self {
        CommonRationals(PhantomData)
    }
}

impl<T> Default for CommonRationals<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> Clone for CommonRationals<T> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<T> Copy for CommonRationals<T> {}

impl<T> fmt::Debug for CommonRationals<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CommonRationals")
    }
}

impl<T> CommonRationals<T>
where
    T: Integer + Signed + Clone + fmt::Debug + fmt::Display,
{
    fn lift(
        a: &CommonValue<Ratio<T>>,
        b: &CommonValue<Ratio<T>>,
        op: impl FnOnce(&Ratio<T>, &Ratio<T>) -> CommonValue<Ratio<T>>,
    ) -> CommonValue<Ratio<T>> {
        match (a, b) {
            (CommonValue::Value(x), CommonValue::Value(y)) => op(x, y),
            _ => CommonValue::Error,
        }
    }
}

impl<T> Meadow for CommonRationals<T>
where
    T: Integer + Signed + Clone + fmt::Debug + fmt::Display,
{
    type Value = CommonValue<Ratio<T>>;

    fn zero(&self) -> Self::Value {
        CommonValue::Value(Ratio::zero())
    }

    fn one(&self) -> Self::Value {
        CommonValue::Value(Ratio::one())
    }

    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        Self::lift(a, b, |x, y| CommonValue::Value(x + y))
    }

    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        Self::lift(a, b, |x, y| CommonValue::Value(x * y))
    }

    fn neg(&self, a: &Self::Value) -> Self::Value {
        match a {
            CommonValue::Value(x) => CommonValue::Value(-x.clone()),
            CommonValue::Error => CommonValue::Error,
        }
    }

    fn div(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        Self::lift(a, b, |x, y| {
            if y.is_zero() {
                CommonValue::Error
            } else {
                CommonValue::Value(x / y)
            }
        })
    }

    fn is_zero(&self, a: &Self::Value) -> bool {
        matches!(a, CommonValue::Value(x) if x.is_zero())
    }

    fn numeral(&self, n: &BigUint) -> Self::Value {
        CommonValue::Value(Ratio::from_integer(integer_from_natural(n)))
    }
}

/// A meadow chosen at run time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeadowKind {
    Q0,
    Gfp(PrimeField),
    CommonQ,
}

/// A value of one of the [`MeadowKind`] backends.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MeadowValue {
    /// Lowest terms, positive denominator.
    Rational(BigRational),
    Residue {
        value: u64,
        modulus: u64,
    },
    /// The error element `a` of the common meadow.
    Error,
}

impl MeadowValue {
    pub fn rational(num: i64, den: i64) -> MeadowValue {
        MeadowValue::Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn integer(n: i64) -> MeadowValue {
        MeadowValue::Rational(BigRational::from_integer(n.into()))
    }
}

impl fmt::Display for MeadowValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeadowValue::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            MeadowValue::Residue { value, modulus } => write!(f, "{value} mod {modulus}"),
            MeadowValue::Error => f.write_str("a"),
        }
    }
}

impl Serialize for MeadowValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl MeadowKind {
    pub fn gf(p: u64) -> Result<MeadowKind, MeadowError> {
        Ok(MeadowKind::Gfp(PrimeField::new(p)?))
    }

    /// Whether `v` is an element of this meadow.
    pub fn contains(&self, v: &MeadowValue) -> bool {
        match (self, v) {
            (MeadowKind::Q0, MeadowValue::Rational(_)) => true,
            (MeadowKind::CommonQ, MeadowValue::Rational(_) | MeadowValue::Error) => true,
            (MeadowKind::Gfp(f), MeadowValue::Residue { value, modulus }) => {
                *modulus == f.modulus() && *value < *modulus
            }
            _ => false,
        }
    }

    fn residue(&self, f: &PrimeField, v: u64) -> MeadowValue {
        MeadowValue::Residue {
            value: v,
            modulus: f.modulus(),
        }
    }

    fn unwrap_rational(v: &MeadowValue) -> &BigRational {
        match v {
            MeadowValue::Rational(r) => r,
            other => panic!("value {other} is not a rational"),
        }
    }

    fn unwrap_residue(f: &PrimeField, v: &MeadowValue) -> u64 {
        match v {
            MeadowValue::Residue { value, modulus } if *modulus == f.modulus() => *value,
            other => panic!("value {other} is not a residue mod {}", f.modulus()),
        }
    }

    fn to_common(v: &MeadowValue) -> CommonValue<BigRational> {
        match v {
            MeadowValue::Rational(r) => CommonValue::Value(r.clone()),
            MeadowValue::Error => CommonValue::Error,
            other => panic!("value {other} is not in the common meadow"),
        }
    }

    fn from_common(v: CommonValue<BigRational>) -> MeadowValue {
        match v {
            CommonValue::Value(r) => MeadowValue::Rational(r),
            CommonValue::Error => MeadowValue::Error,
        }
    }

    fn binary(
        &self,
        a: &MeadowValue,
        b: &MeadowValue,
        q0: impl FnOnce(&Q0, &BigRational, &BigRational) -> BigRational,
        gf: impl FnOnce(&PrimeField, &u64, &u64) -> u64,
        common: impl FnOnce(
            &CommonQ,
            &CommonValue<BigRational>,
            &CommonValue<BigRational>,
        ) -> CommonValue<BigRational>,
    ) -> MeadowValue {
        match self {
            MeadowKind::Q0 => MeadowValue::Rational(q0(
                &Q0::new(),
                Self::unwrap_rational(a),
                Self::unwrap_rational(b),
            )),
            MeadowKind::Gfp(f) => {
                let v = gf(f, &Self::unwrap_residue(f, a), &Self::unwrap_residue(f, b));
                self.residue(f, v)
            }
            MeadowKind::CommonQ => Self::from_common(common(
                &CommonQ::new(),
                &Self::to_common(a),
                &Self::to_common(b),
            )),
        }
    }
}

/// Dispatches to the selected backend.
///
/// # Panics
///
/// The operations panic when handed a value from a different meadow; use
/// [`MeadowKind::contains`] to validate foreign values first.
impl Meadow for MeadowKind {
    type Value = MeadowValue;

    fn zero(&self) -> MeadowValue {
        self.numeral(&BigUint::zero())
    }

    fn one(&self) -> MeadowValue {
        self.numeral(&BigUint::one())
    }

    fn add(&self, a: &MeadowValue, b: &MeadowValue) -> MeadowValue {
        self.binary(
            a,
            b,
            |m, x, y| m.add(x, y),
            |m, x, y| m.add(x, y),
            |m, x, y| m.add(x, y),
        )
    }

    fn mul(&self, a: &MeadowValue, b: &MeadowValue) -> MeadowValue {
        self.binary(
            a,
            b,
            |m, x, y| m.mul(x, y),
            |m, x, y| m.mul(x, y),
            |m, x, y| m.mul(x, y),
        )
    }

    fn div(&self, a: &MeadowValue, b: &MeadowValue) -> MeadowValue {
        self.binary(
            a,
            b,
            |m, x, y| m.div(x, y),
            |m, x, y| m.div(x, y),
            |m, x, y| m.div(x, y),
        )
    }

    fn neg(&self, a: &MeadowValue) -> MeadowValue {
        match self {
            MeadowKind::Q0 => MeadowValue::Rational(-Self::unwrap_rational(a).clone()),
            MeadowKind::Gfp(f) => self.residue(f, f.neg(&Self::unwrap_residue(f, a))),
            MeadowKind::CommonQ => Self::from_common(CommonQ::new().neg(&Self::to_common(a))),
        }
    }

    fn is_zero(&self, a: &MeadowValue) -> bool {
        match a {
            MeadowValue::Rational(r) => r.is_zero(),
            MeadowValue::Residue { value, .. } => *value == 0,
            MeadowValue::Error => false,
        }
    }

    fn numeral(&self, n: &BigUint) -> MeadowValue {
        match self {
            MeadowKind::Q0 | MeadowKind::CommonQ => {
                MeadowValue::Rational(BigRational::from_integer(BigInt::from(n.clone())))
            }
            MeadowKind::Gfp(f) => self.residue(f, f.numeral(n)),
        }
    }

    fn elements(&self) -> Option<Vec<MeadowValue>> {
        match self {
            MeadowKind::Gfp(f) => Some((0..f.modulus()).map(|v| self.residue(f, v)).collect()),
            _ => None,
        }
    }
}

impl fmt::Display for MeadowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeadowKind::Q0 => f.write_str("q0"),
            MeadowKind::Gfp(field) => write!(f, "gf:{}", field.modulus()),
            MeadowKind::CommonQ => f.write_str("common"),
        }
    }
}

impl FromStr for MeadowKind {
    type Err = MeadowError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "q0" => Ok(MeadowKind::Q0),
            "common" | "qa" => Ok(MeadowKind::CommonQ),
            other => {
                let p = other
                    .strip_prefix("gf:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| MeadowError::Unknown(s.to_string()))?;
                MeadowKind::gf(p)
            }
        }
    }
}

/// The involutive meadow of rationals over big integers.
pub type Q0 = Rationals<BigInt>;
/// The common meadow of rationals over big integers.
pub type CommonQ = CommonRationals<BigInt>;

/// Variable bindings for evaluating open terms.
pub type Assignment<V = MeadowValue> = BTreeMap<String, V>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable {0} is not bound")]
    Unbound(String),
    #[error("value bound to {name} ({value}) is not an element of {meadow}")]
    ForeignValue {
        name: String,
        value: String,
        meadow: String,
    },
    #[error("term {0} is not closed")]
    Open(String),
}

/// Homomorphic evaluation of `t` in `meadow` under `env`.
pub fn evaluate<M: Meadow>(
    t: &Term,
    meadow: &M,
    env: &BTreeMap<String, M::Value>,
) -> Result<M::Value, EvalError> {
    Ok(match t {
        Term::Num(n) => meadow.numeral(n),
        Term::Var(name) => env
            .get(name)
            .cloned()
            .ok_or_else(|| EvalError::Unbound(name.clone()))?,
        Term::Neg(a) => meadow.neg(&evaluate(a, meadow, env)?),
        Term::Add(a, b) => meadow.add(&evaluate(a, meadow, env)?, &evaluate(b, meadow, env)?),
        Term::Mul(a, b) => meadow.mul(&evaluate(a, meadow, env)?, &evaluate(b, meadow, env)?),
        Term::Div(a, b) => meadow.div(&evaluate(a, meadow, env)?, &evaluate(b, meadow, env)?),
    })
}

/// Evaluates `t` in a run-time selected meadow, checking that the bindings
/// belong to it.
pub fn eval(t: &Term, meadow: &MeadowKind, env: &Assignment) -> Result<MeadowValue, EvalError> {
    for (name, value) in env {
        if !meadow.contains(value) {
            return Err(EvalError::ForeignValue {
                name: name.clone(),
                value: value.to_string(),
                meadow: meadow.to_string(),
            });
        }
    }
    evaluate(t, meadow, env)
}

/// The value `[t]_A` of a closed term.
pub fn denote<M: Meadow>(t: &Term, meadow: &M) -> Result<M::Value, EvalError> {
    if !t.is_closed() {
        return Err(EvalError::Open(t.to_string()));
    }
    evaluate(t, meadow, &BTreeMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn q(src: &str) -> MeadowValue {
        denote(&parse(src).unwrap(), &MeadowKind::Q0).unwrap()
    }

    #[test]
    fn involutive_division_by_zero() {
        assert_eq!(q("1/0"), MeadowValue::integer(0));
        assert_eq!(q("0/0"), MeadowValue::integer(0));
        assert_eq!(q("1/1 + 1/0"), MeadowValue::integer(1));
        assert_eq!(q("2/4"), MeadowValue::rational(1, 2));
    }

    #[test]
    fn nested_fraction_value() {
        // (1/4) * (2/3) = 2/12
        assert_eq!(q("(1/4)/(3/2)"), MeadowValue::rational(1, 6));
        assert_eq!(q("(1/2)/3"), MeadowValue::rational(1, 6));
        assert_eq!(q("(1+1/2)/3"), MeadowValue::rational(1, 2));
    }

    #[test]
    fn common_meadow_error_propagates() {
        let common = MeadowKind::CommonQ;
        let d = |s: &str| denote(&parse(s).unwrap(), &common).unwrap();
        assert_eq!(d("1/0"), MeadowValue::Error);
        assert_eq!(d("5 + 1/0"), MeadowValue::Error);
        assert_eq!(d("0/0"), MeadowValue::Error);
        assert_eq!(d("0 * (1/0)"), MeadowValue::Error);
        assert_eq!(d("1/(1/0)"), MeadowValue::Error);
        assert_eq!(d("-(1/0)"), MeadowValue::Error);
        assert_eq!(d("1/2 + 1/3"), MeadowValue::rational(5, 6));
        assert_eq!(d("1/0").to_string(), "a");
    }

    #[test]
    fn prime_field_values() {
        let gf5 = MeadowKind::gf(5).unwrap();
        // Inverses mod 5 by table: 2*3 = 6 = 1, so 1/2 = 3 and 1/3 = 2.
        let table: Vec<u64> = (0..5u64)
            .map(|x| (0..5u64).find(|y| x * y % 5 == 1).unwrap_or(0))
            .collect();
        let expected = (table[2] + table[3]) % 5;
        let v = denote(&parse("1/2 + 1/3").unwrap(), &gf5).unwrap();
        assert_eq!(
            v,
            MeadowValue::Residue {
                value: expected,
                modulus: 5
            }
        );
        assert_eq!(expected, 0);

        let gf7 = MeadowKind::gf(7).unwrap();
        assert_eq!(
            denote(&Term::num(7), &gf7).unwrap(),
            MeadowValue::Residue {
                value: 0,
                modulus: 7
            }
        );
    }

    #[test]
    fn inverse_is_total_for_every_small_prime() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let f = PrimeField::new(p).unwrap();
            assert_eq!(f.inv(0), 0);
            for x in 1..p {
                assert_eq!(x * f.inv(x) % p, 1, "p={p} x={x}");
            }
        }
    }

    #[test]
    fn prime_check() {
        assert_eq!(PrimeField::new(4), Err(MeadowError::NotPrime(4)));
        assert_eq!(PrimeField::new(1), Err(MeadowError::NotPrime(1)));
        assert!(PrimeField::new(2).is_ok());
        assert!(matches!(
            "gf:9".parse::<MeadowKind>(),
            Err(MeadowError::NotPrime(9))
        ));
        assert_eq!("gf:7".parse::<MeadowKind>().unwrap().to_string(), "gf:7");
        assert_eq!("common".parse::<MeadowKind>().unwrap(), MeadowKind::CommonQ);
        assert!("reals".parse::<MeadowKind>().is_err());
    }

    #[test]
    fn generic_numerals_agree() {
        // Default doubling construction against the direct one.
        struct Plain(PrimeField);
        impl Meadow for Plain {
            type Value = u64;
            fn zero(&self) -> u64 {
                0
            }
            fn one(&self) -> u64 {
                1
            }
            fn add(&self, a: &u64, b: &u64) -> u64 {
                self.0.add(a, b)
            }
            fn mul(&self, a: &u64, b: &u64) -> u64 {
                self.0.mul(a, b)
            }
            fn neg(&self, a: &u64) -> u64 {
                self.0.neg(a)
            }
            fn div(&self, a: &u64, b: &u64) -> u64 {
                self.0.div(a, b)
            }
            fn is_zero(&self, a: &u64) -> bool {
                *a == 0
            }
        }
        let f = PrimeField::new(13).unwrap();
        for n in 0u32..100 {
            assert_eq!(
                Plain(f).numeral(&BigUint::from(n)),
                f.numeral(&BigUint::from(n))
            );
        }
    }

    #[test]
    fn fixed_width_rationals() {
        let m = Rationals::<i64>::new();
        let v = denote(&parse("(1/4)/(3/2) + 1/0").unwrap(), &m).unwrap();
        assert_eq!(v, Ratio::new(1, 6));
    }

    #[test]
    fn eval_with_assignment() {
        let t = parse("x/y").unwrap();
        let mut env = Assignment::new();
        env.insert("x".into(), MeadowValue::integer(3));
        assert_eq!(
            eval(&t, &MeadowKind::Q0, &env),
            Err(EvalError::Unbound("y".into()))
        );
        env.insert("y".into(), MeadowValue::integer(0));
        assert_eq!(
            eval(&t, &MeadowKind::Q0, &env).unwrap(),
            MeadowValue::integer(0)
        );
        assert!(matches!(
            eval(&t, &MeadowKind::gf(5).unwrap(), &env),
            Err(EvalError::ForeignValue { .. })
        ));
        assert!(matches!(
            denote(&t, &MeadowKind::Q0),
            Err(EvalError::Open(_))
        ));
    }
}
