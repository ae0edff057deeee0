//! Single-step rewrite rules and their application at a position.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::term::{Position, Term, TermError};

/// The hypothesis `k ≠ 0` for a numeral `k ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SideCondition(pub BigUint);

impl SideCondition {
    pub fn value(&self) -> &BigUint {
        &self.0
    }
}

impl fmt::Display for SideCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub(crate) fn serialize_natural<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match u64::try_from(n) {
        Ok(small) => s.serialize_u64(small),
        Err(_) => s.collect_str(n),
    }
}

impl Serialize for SideCondition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_natural(&self.0, s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// A division-free closed subterm becomes its value as `k` or `-k`.
    CrEval,
    /// `n → (n/k)·k` for a signed numeral `n` divisible by `k`.
    CrFactor { k: BigUint },
    /// `x → x/1`
    CrEmbed,
    /// `-(x/y) → (-x)/y`
    CrNeg,
    /// `(x/y)·(u/v) → (x·u)/(y·v)`
    CrMul,
    /// `x/(-y) → (-x)/y`
    CrSign,
    /// `x/y + u/y → (x+u)/y`
    Qcr,
    /// `(x/y)/z → x/(y·z)`
    Div1,
    /// `x/(y/z) → (x·z·z)/(y·z)`
    Div2,
    /// `k ≠ 0 → x/y = (x·k)/(y·k)`, left to right.
    Feq { k: BigUint },
    /// The same scheme right to left: `(x·k)/(y·k) → x/y`.
    FeqCancel { k: BigUint },
    /// `x/0 → 0/1`
    Dbz,
    /// `y ≠ 0 ∧ v ≠ 0 → x/y + u/v = (x·v + y·u)/(y·v)`, numeral `y`, `v`.
    Cfar,
}

impl Rule {
    pub fn id(&self) -> &'static str {
        match self {
            Rule::CrEval => "CR-eval",
            Rule::CrFactor { .. } => "CR-factor",
            Rule::CrEmbed => "CR-embed",
            Rule::CrNeg => "CR-neg",
            Rule::CrMul => "CR-mul",
            Rule::CrSign => "CR-sign",
            Rule::Qcr => "QCR",
            Rule::Div1 => "DIV1",
            Rule::Div2 => "DIV2",
            Rule::Feq { .. } => "FEQ",
            Rule::FeqCancel { .. } => "FEQ-cancel",
            Rule::Dbz => "DBZ",
            Rule::Cfar => "CFAR",
        }
    }

    /// The numeral parameter of parametrised rules.
    pub fn parameter(&self) -> Option<&BigUint> {
        match self {
            Rule::CrFactor { k } | Rule::Feq { k } | Rule::FeqCancel { k } => Some(k),
            _ => None,
        }
    }

    pub fn from_id(id: &str, k: Option<BigUint>) -> Option<Rule> {
        Some(match id {
            "CR-eval" => Rule::CrEval,
            "CR-factor" => Rule::CrFactor { k: k? },
            "CR-embed" => Rule::CrEmbed,
            "CR-neg" => Rule::CrNeg,
            "CR-mul" => Rule::CrMul,
            "CR-sign" => Rule::CrSign,
            "QCR" => Rule::Qcr,
            "DIV1" => Rule::Div1,
            "DIV2" => Rule::Div2,
            "FEQ" => Rule::Feq { k: k? },
            "FEQ-cancel" => Rule::FeqCancel { k: k? },
            "DBZ" => Rule::Dbz,
            "CFAR" => Rule::Cfar,
            _ => return None,
        })
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parameter() {
            Some(k) => write!(f, "{}(k={k})", self.id()),
            None => f.write_str(self.id()),
        }
    }
}

/// Which rules a rewrite may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleSet {
    /// CR + QCR + DIV1 + DIV2 + FEQ: no rule that removes a zero
    /// denominator.
    Safe,
    /// Everything, including DBZ and CFAR.
    Full,
}

impl RuleSet {
    pub fn allows(&self, rule: &Rule) -> bool {
        match self {
            RuleSet::Full => true,
            RuleSet::Safe => !matches!(rule, Rule::Dbz | Rule::Cfar),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("{rule} does not match {redex} at {position}: {reason}")]
    NoMatch {
        rule: String,
        position: Position,
        redex: String,
        reason: &'static str,
    },
    #[error("{0} is not part of the selected rule set")]
    Disallowed(String),
    #[error(transparent)]
    Position(#[from] TermError),
}

/// Integer value of a closed division-free term.
pub fn integer_value(t: &Term) -> Option<BigInt> {
    match t {
        Term::Num(n) => Some(BigInt::from(n.clone())),
        Term::Var(_) | Term::Div(..) => None,
        Term::Neg(a) => Some(-integer_value(a)?),
        Term::Add(a, b) => Some(integer_value(a)? + integer_value(b)?),
        Term::Mul(a, b) => Some(integer_value(a)? * integer_value(b)?),
    }
}

/// `k` for `k ≥ 0`, `-k` for `k < 0`.
pub fn signed_numeral(v: &BigInt) -> Term {
    match v.sign() {
        Sign::Minus => Term::neg(Term::Num(v.magnitude().clone())),
        _ => Term::Num(v.magnitude().clone()),
    }
}

/// `k` or `-k` with `k ≥ 1`; the output shape of `CR-eval`.
pub fn is_signed_numeral(t: &Term) -> bool {
    match t {
        Term::Num(_) => true,
        Term::Neg(inner) => matches!(inner.as_ref(), Term::Num(k) if !k.is_zero()),
        _ => false,
    }
}

fn positive_numeral(t: &Term) -> Option<&BigUint> {
    t.as_numeral().filter(|k| !k.is_zero())
}

/// Conditions worth recording: `1 ≠ 0` holds in every nontrivial meadow.
pub(crate) fn condition(k: &BigUint) -> Option<SideCondition> {
    (*k > BigUint::one()).then(|| SideCondition(k.clone()))
}

/// Rewrites the redex itself; returns the replacement and the side
/// conditions of this instance.
pub(crate) fn rewrite_redex(
    rule: &Rule,
    redex: &Term,
    position: &Position,
) -> Result<(Term, Vec<SideCondition>), RuleError> {
    let fail = |reason: &'static str| RuleError::NoMatch {
        rule: rule.to_string(),
        position: position.clone(),
        redex: redex.to_string(),
        reason,
    };
    let no_conditions = |t: Term| Ok((t, Vec::new()));
    match rule {
        Rule::CrEval => {
            if !redex.is_closed() {
                return Err(fail("redex is open"));
            }
            let v = integer_value(redex).ok_or_else(|| fail("redex contains a division"))?;
            no_conditions(signed_numeral(&v))
        }
        Rule::CrFactor { k } => {
            if k.is_zero() {
                return Err(fail("factor must be positive"));
            }
            if !is_signed_numeral(redex) {
                return Err(fail("redex is not a signed numeral"));
            }
            let v = integer_value(redex).expect("signed numerals have a value");
            let k_int = BigInt::from(k.clone());
            if !(&v % &k_int).is_zero() {
                return Err(fail("factor does not divide the numeral"));
            }
            no_conditions(Term::mul(
                signed_numeral(&(v / k_int)),
                Term::Num(k.clone()),
            ))
        }
        Rule::CrEmbed => no_conditions(Term::div(redex.clone(), Term::one())),
        Rule::CrNeg => match redex {
            Term::Neg(inner) => match inner.as_ref() {
                Term::Div(x, y) => {
                    no_conditions(Term::div(Term::neg((**x).clone()), (**y).clone()))
                }
                _ => Err(fail("expected -(x/y)")),
            },
            _ => Err(fail("expected -(x/y)")),
        },
        Rule::CrMul => match redex {
            Term::Mul(a, b) => match (a.as_ref(), b.as_ref()) {
                (Term::Div(x, y), Term::Div(u, v)) => no_conditions(Term::div(
                    Term::mul((**x).clone(), (**u).clone()),
                    Term::mul((**y).clone(), (**v).clone()),
                )),
                _ => Err(fail("expected (x/y)*(u/v)")),
            },
            _ => Err(fail("expected (x/y)*(u/v)")),
        },
        Rule::CrSign => match redex {
            Term::Div(x, d) => match d.as_ref() {
                Term::Neg(y) => no_conditions(Term::div(Term::neg((**x).clone()), (**y).clone())),
                _ => Err(fail("expected x/(-y)")),
            },
            _ => Err(fail("expected x/(-y)")),
        },
        Rule::Qcr => match redex {
            Term::Add(a, b) => match (a.as_ref(), b.as_ref()) {
                (Term::Div(x, y), Term::Div(u, y2)) if y == y2 => no_conditions(Term::div(
                    Term::add((**x).clone(), (**u).clone()),
                    (**y).clone(),
                )),
                (Term::Div(..), Term::Div(..)) => Err(fail("denominators differ")),
                _ => Err(fail("expected x/y + u/y")),
            },
            _ => Err(fail("expected x/y + u/y")),
        },
        Rule::Div1 => match redex {
            Term::Div(n, z) => match n.as_ref() {
                Term::Div(x, y) => no_conditions(Term::div(
                    (**x).clone(),
                    Term::mul((**y).clone(), (**z).clone()),
                )),
                _ => Err(fail("expected (x/y)/z")),
            },
            _ => Err(fail("expected (x/y)/z")),
        },
        Rule::Div2 => match redex {
            Term::Div(x, d) => match d.as_ref() {
                Term::Div(y, z) => no_conditions(Term::div(
                    Term::mul(Term::mul((**x).clone(), (**z).clone()), (**z).clone()),
                    Term::mul((**y).clone(), (**z).clone()),
                )),
                _ => Err(fail("expected x/(y/z)")),
            },
            _ => Err(fail("expected x/(y/z)")),
        },
        Rule::Feq { k } => match redex {
            _ if k.is_zero() => Err(fail("FEQ needs k > 0")),
            Term::Div(x, y) => Ok((
                Term::div(
                    Term::mul((**x).clone(), Term::Num(k.clone())),
                    Term::mul((**y).clone(), Term::Num(k.clone())),
                ),
                condition(k).into_iter().collect(),
            )),
            _ => Err(fail("expected x/y")),
        },
        Rule::FeqCancel { k } => {
            if k.is_zero() {
                return Err(fail("FEQ needs k > 0"));
            }
            let strip = |t: &Term| -> Option<Term> {
                match t {
                    Term::Mul(x, kk) if kk.as_numeral() == Some(k) => Some((**x).clone()),
                    _ => None,
                }
            };
            match redex {
                Term::Div(a, b) => match (strip(a), strip(b)) {
                    (Some(x), Some(y)) => Ok((Term::div(x, y), condition(k).into_iter().collect())),
                    _ => Err(fail("expected (x*k)/(y*k)")),
                },
                _ => Err(fail("expected (x*k)/(y*k)")),
            }
        }
        Rule::Dbz => match redex {
            Term::Div(_, z) if crate::term::is_zero_numeral(z) => {
                no_conditions(Term::div(Term::zero(), Term::one()))
            }
            _ => Err(fail("expected x/0")),
        },
        Rule::Cfar => match redex {
            Term::Add(a, b) => match (a.as_ref(), b.as_ref()) {
                (Term::Div(x, y), Term::Div(u, v)) => {
                    let (Some(yk), Some(vk)) = (positive_numeral(y), positive_numeral(v)) else {
                        return Err(fail("CFAR guards must be positive numerals"));
                    };
                    let mut conditions: Vec<SideCondition> =
                        [yk, vk].into_iter().filter_map(condition).collect();
                    conditions.sort();
                    conditions.dedup();
                    Ok((
                        Term::div(
                            Term::add(
                                Term::mul((**x).clone(), (**v).clone()),
                                Term::mul((**y).clone(), (**u).clone()),
                            ),
                            Term::mul((**y).clone(), (**v).clone()),
                        ),
                        conditions,
                    ))
                }
                _ => Err(fail("expected x/y + u/v")),
            },
            _ => Err(fail("expected x/y + u/v")),
        },
    }
}

/// Applies one instance of `rule` at `position` of `t`.
pub fn apply_rule(
    t: &Term,
    rule: &Rule,
    position: &Position,
    rules: RuleSet,
) -> Result<Term, RuleError> {
    apply_rule_with_conditions(t, rule, position, rules).map(|(t, _)| t)
}

/// Like [`apply_rule`], also returning the side conditions the instance
/// relies on.
pub fn apply_rule_with_conditions(
    t: &Term,
    rule: &Rule,
    position: &Position,
    rules: RuleSet,
) -> Result<(Term, Vec<SideCondition>), RuleError> {
    if !rules.allows(rule) {
        return Err(RuleError::Disallowed(rule.id().to_string()));
    }
    let redex = t.subterm_at(position)?;
    let (replacement, conditions) = rewrite_redex(rule, redex, position)?;
    Ok((t.replace_at(position, replacement)?, conditions))
}
