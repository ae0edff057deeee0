//! Fracterms over meadows.
//!
//! Terms of the divisive meadow signature, their fraction classes, the
//! fracpair algebra of unreduced integer pairs, and a calculator that turns
//! closed terms into simplified flat fractions with a step-by-step trace.
//!
//! ```
//! use fracterm::{normalize_safe, parse};
//!
//! let t = parse("1/2 + 1/3").unwrap();
//! let nf = normalize_safe(&t).unwrap();
//! assert_eq!(nf.to_string(), "5/6");
//! ```

pub mod calculator;
pub mod classify;
pub mod fracpair;
pub mod meadow;
pub mod syntax;
pub mod term;

use num_bigint::BigInt;

pub use calculator::{
    check_equal, normalize, normalize_full, normalize_safe, Derivation, Equality, Mode, NormalForm,
    NormalizeError, Rule, RuleSet, SideCondition, Step,
};
pub use classify::{classify, eq_pair, eq_val, Classification, ClassifyError};
pub use fracpair::{Fracpair, ZeroMode};
pub use meadow::{
    denote, eval, Assignment, CommonRationals, EvalError, Meadow, MeadowKind, MeadowValue,
    PrimeField, Rationals,
};
pub use syntax::{from_json, parse, to_json, ParseError};
pub use term::{eq_syn, Position, Term};

/// Involutive rationals over big integers.
pub type Q0 = meadow::Q0;
/// Common meadow of rationals over big integers.
pub type CommonQ = meadow::CommonQ;
/// Rationals over machine integers; arithmetic panics on overflow in debug
/// builds.
pub type SmallRationals = Rationals<i64>;
pub type BigFracpair = Fracpair<BigInt>;
pub type SmallFracpair = Fracpair<i64>;
