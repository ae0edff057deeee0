//! Calculating closed terms into simplified flat fractions.
//!
//! Two normalizers share one rewriting engine and both record every step:
//!
//! * [`normalize_full`] may drop zero-denominator fractions (`DBZ`) and
//!   merges sums with the conditional addition rule `CFAR`;
//! * [`normalize_safe`] uses only CR + QCR + DIV1 + DIV2 + FEQ, and refuses
//!   unsafe input up front, naming the offending fraction.
//!
//! The result is always `k/l` or `(-k)/l` with `gcd(k, l) = 1` and `l ≥ 1`;
//! zero is `0/1`. Alongside it come the numerals `k` whose nonzeroness the
//! calculation relied on.

mod rules;

pub use rules::{
    apply_rule, apply_rule_with_conditions, integer_value, is_signed_numeral, signed_numeral, Rule,
    RuleError, RuleSet, SideCondition,
};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::meadow::{Meadow, Q0};
use crate::term::{Position, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub position: Position,
    pub before: Term,
    pub after: Term,
    pub conditions: Vec<SideCondition>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Derivation {
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub result: Term,
    /// Sorted, without duplicates.
    pub conditions: Vec<SideCondition>,
    pub trace: Derivation,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    Full,
    #[default]
    Safe,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(Mode::Full),
            "safe" => Ok(Mode::Safe),
            other => Err(format!("unknown mode {other:?}; expected full or safe")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("term {0} is not closed")]
    Open(String),
    #[error("unsafe term: the fraction {subterm} at {position} has a zero denominator")]
    Unsafe { subterm: Term, position: Position },
    #[error("internal rewrite failure: {0}")]
    Rule(#[from] RuleError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {index} starts from a different term than the previous step produced")]
    Broken { index: usize },
    #[error("step {index} ({rule}) does not reproduce its recorded result")]
    Mismatch { index: usize, rule: String },
    #[error("step {index} records conditions {recorded:?}, rule gives {computed:?}")]
    Conditions {
        index: usize,
        recorded: Vec<String>,
        computed: Vec<String>,
    },
    #[error("step {index}: {source}")]
    Rule { index: usize, source: RuleError },
}

impl Derivation {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-applies every step to `start` and checks that the recorded terms
    /// and conditions are reproduced. Returns the final term.
    pub fn replay(&self, start: &Term, rules: RuleSet) -> Result<Term, ReplayError> {
        let mut current = start.clone();
        for (index, step) in self.steps.iter().enumerate() {
            if step.before != current {
                return Err(ReplayError::Broken { index });
            }
            let (after, conditions) =
                apply_rule_with_conditions(&current, &step.rule, &step.position, rules)
                    .map_err(|source| ReplayError::Rule { index, source })?;
            if after != step.after {
                return Err(ReplayError::Mismatch {
                    index,
                    rule: step.rule.to_string(),
                });
            }
            if conditions != step.conditions {
                let show = |c: &[SideCondition]| c.iter().map(ToString::to_string).collect();
                return Err(ReplayError::Conditions {
                    index,
                    recorded: show(&step.conditions),
                    computed: show(&conditions),
                });
            }
            current = after;
        }
        Ok(current)
    }

    /// Every term of the derivation: the start and each step's result.
    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.steps
            .first()
            .map(|s| &s.before)
            .into_iter()
            .chain(self.steps.iter().map(|s| &s.after))
    }
}

impl Serialize for Step {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct StepJson<'a> {
            rule: &'static str,
            #[serde(
                skip_serializing_if = "Option::is_none",
                serialize_with = "opt_natural"
            )]
            k: Option<&'a BigUint>,
            position: &'a [usize],
            before: &'a Term,
            after: &'a Term,
            conditions: &'a [SideCondition],
        }
        StepJson {
            rule: self.rule.id(),
            k: self.rule.parameter(),
            position: &self.position.0,
            before: &self.before,
            after: &self.after,
            conditions: &self.conditions,
        }
        .serialize(serializer)
    }
}

fn opt_natural<S: Serializer>(k: &Option<&BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match k {
        Some(k) => rules::serialize_natural(k, s),
        None => s.serialize_none(),
    }
}

impl Serialize for NormalForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct TraceJson<'a> {
            result: &'a Term,
            conditions: &'a [SideCondition],
            steps: &'a Derivation,
        }
        TraceJson {
            result: &self.result,
            conditions: &self.conditions,
            steps: &self.trace,
        }
        .serialize(serializer)
    }
}

impl NormalForm {
    /// Numerator (signed) and denominator of the result.
    pub fn parts(&self) -> (BigInt, BigUint) {
        let (p, q) = self
            .result
            .as_fraction()
            .expect("normal forms are fractions");
        (
            integer_value(p).expect("numerator is a signed numeral"),
            q.as_numeral().expect("denominator is a numeral").clone(),
        )
    }

    pub fn value(&self) -> BigRational {
        let (n, d) = self.parts();
        BigRational::new(n, BigInt::from(d))
    }
}

/// Compact display: `k/l` or `-k/l`.
impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.parts();
        write!(f, "{n}/{d}")
    }
}

/// Checks the normal-form invariant on a term.
pub fn is_simplified_flat(t: &Term) -> bool {
    let Some((p, q)) = t.as_fraction() else {
        return false;
    };
    let Some(l) = q.as_numeral() else {
        return false;
    };
    if !is_signed_numeral(p) || l.is_zero() {
        return false;
    }
    let k = integer_value(p)
        .expect("signed numeral")
        .magnitude()
        .clone();
    k.gcd(l).is_one()
}

/// Outermost (first in preorder) fraction whose denominator is zero in the
/// involutive rationals, found by one bottom-up evaluation.
pub fn find_unsafe(t: &Term) -> Option<(Position, Term)> {
    fn walk(t: &Term, path: &mut Vec<usize>, found: &mut Vec<Vec<usize>>) -> BigRational {
        let q0 = Q0::new();
        let mut child = |i: usize, c: &Term, found: &mut Vec<Vec<usize>>| {
            path.push(i);
            let v = walk(c, path, found);
            path.pop();
            v
        };
        match t {
            Term::Num(n) => q0.numeral(n),
            Term::Var(_) => panic!("find_unsafe needs a closed term"),
            Term::Neg(a) => -child(0, a, found),
            Term::Add(a, b) => child(0, a, found) + child(1, b, found),
            Term::Mul(a, b) => child(0, a, found) * child(1, b, found),
            Term::Div(a, b) => {
                let x = child(0, a, found);
                let y = child(1, b, found);
                if y.is_zero() {
                    found.push(path.clone());
                }
                q0.div(&x, &y)
            }
        }
    }
    let mut found = Vec::new();
    walk(t, &mut Vec::new(), &mut found);
    let first = found.into_iter().min()?;
    let position = Position(first);
    let subterm = t.subterm_at(&position).expect("recorded path").clone();
    Some((position, subterm))
}

struct Engine {
    term: Term,
    rules: RuleSet,
    steps: Vec<Step>,
}

impl Engine {
    fn at(&self, pos: &Position) -> &Term {
        self.term
            .subterm_at(pos)
            .expect("engine positions are valid")
    }

    fn step(&mut self, rule: Rule, pos: &Position) -> Result<(), NormalizeError> {
        let (after, conditions) = apply_rule_with_conditions(&self.term, &rule, pos, self.rules)?;
        let before = std::mem::replace(&mut self.term, after.clone());
        self.steps.push(Step {
            rule,
            position: pos.clone(),
            before,
            after,
            conditions,
        });
        Ok(())
    }

    /// Division-free subterm to `k` or `-k`.
    fn eval(&mut self, pos: &Position) -> Result<(), NormalizeError> {
        if !is_signed_numeral(self.at(pos)) {
            self.step(Rule::CrEval, pos)?;
        }
        Ok(())
    }

    fn numeral_parts(&self, pos: &Position) -> (BigInt, BigUint) {
        let (p, q) = self.at(pos).as_fraction().expect("flat fraction");
        (
            integer_value(p).expect("signed numerator"),
            q.as_numeral().expect("numeral denominator").clone(),
        )
    }

    /// `x/d` with `x`, `d` signed numerals to the flat shape: a negative
    /// denominator moves its sign up, a zero one is dropped by DBZ.
    fn fix_denominator(&mut self, pos: &Position) -> Result<(), NormalizeError> {
        let (_, den) = self.at(pos).as_fraction().expect("fraction");
        match den {
            Term::Neg(_) => {
                self.step(Rule::CrSign, pos)?;
                self.eval(&pos.child(0))
            }
            Term::Num(l) if l.is_zero() => self.step(Rule::Dbz, pos),
            _ => Ok(()),
        }
    }

    /// Rewrites the subterm at `pos` into a flat fraction `±k/l`, `l ≥ 1`.
    fn flatten(&mut self, pos: &Position) -> Result<(), NormalizeError> {
        let t = self.at(pos).clone();
        if t.is_polynomial() {
            self.eval(pos)?;
            return self.step(Rule::CrEmbed, pos);
        }
        let (left, right) = (pos.child(0), pos.child(1));
        match &t {
            Term::Neg(_) => {
                self.flatten(&left)?;
                self.step(Rule::CrNeg, pos)?;
                self.eval(&left)
            }
            Term::Mul(..) => {
                self.flatten(&left)?;
                self.flatten(&right)?;
                self.step(Rule::CrMul, pos)?;
                self.eval(&left)?;
                self.eval(&right)
            }
            Term::Add(..) => {
                self.flatten(&left)?;
                self.flatten(&right)?;
                self.merge_sum(pos)
            }
            Term::Div(a, b) => match (a.is_polynomial(), b.is_polynomial()) {
                (true, true) => {
                    self.eval(&left)?;
                    self.eval(&right)?;
                    self.fix_denominator(pos)
                }
                (true, false) => {
                    self.eval(&left)?;
                    self.flatten(&right)?;
                    self.divide_by_fraction(pos)
                }
                (false, true) => {
                    self.flatten(&left)?;
                    self.eval(&right)?;
                    self.step(Rule::Div1, pos)?;
                    self.eval(&right)?;
                    self.fix_denominator(pos)
                }
                (false, false) => {
                    self.flatten(&left)?;
                    self.flatten(&right)?;
                    // n1/(d1·(n2/d2)), then flatten the denominator.
                    self.step(Rule::Div1, pos)?;
                    self.flatten(&right)?;
                    self.divide_by_fraction(pos)
                }
            },
            Term::Num(_) | Term::Var(_) => unreachable!("leaves are polynomial"),
        }
    }

    /// `k/(n/d)` with flat denominator to a flat fraction via DIV2.
    fn divide_by_fraction(&mut self, pos: &Position) -> Result<(), NormalizeError> {
        self.step(Rule::Div2, pos)?;
        self.eval(&pos.child(0))?;
        self.eval(&pos.child(1))?;
        self.fix_denominator(pos)
    }

    /// `n1/d1 + n2/d2`, both flat, to one flat fraction.
    fn merge_sum(&mut self, pos: &Position) -> Result<(), NormalizeError> {
        let (left, right) = (pos.child(0), pos.child(1));
        match self.rules {
            RuleSet::Full => {
                self.step(Rule::Cfar, pos)?;
                self.eval(&left)?;
                self.eval(&right)
            }
            RuleSet::Safe => {
                let (_, d1) = self.numeral_parts(&left);
                let (_, d2) = self.numeral_parts(&right);
                let g = d1.gcd(&d2);
                for (side, k) in [(&left, &d2 / &g), (&right, &d1 / &g)] {
                    if !k.is_one() {
                        self.step(Rule::Feq { k }, side)?;
                        self.eval(&side.child(0))?;
                        self.eval(&side.child(1))?;
                    }
                }
                self.step(Rule::Qcr, pos)?;
                self.eval(&left)
            }
        }
    }

    /// Cancels `gcd(|k|, l)` from the flat fraction at the root.
    fn reduce(&mut self) -> Result<(), NormalizeError> {
        let root = Position::root();
        let (n, d) = self.numeral_parts(&root);
        let g = n.magnitude().gcd(&d);
        if g > BigUint::one() {
            self.step(Rule::CrFactor { k: g.clone() }, &root.child(0))?;
            self.step(Rule::CrFactor { k: g.clone() }, &root.child(1))?;
            self.step(Rule::FeqCancel { k: g }, &root)?;
        }
        Ok(())
    }
}

fn denominators(t: &Term, out: &mut BTreeSet<SideCondition>) {
    for (_, sub) in t.subterms() {
        if let Some(l) = sub.as_fraction().and_then(|(_, q)| q.as_numeral()) {
            out.extend(rules::condition(l));
        }
    }
}

fn run(t: &Term, rules: RuleSet) -> Result<NormalForm, NormalizeError> {
    if !t.is_closed() {
        return Err(NormalizeError::Open(t.to_string()));
    }
    let mut engine = Engine {
        term: t.clone(),
        rules,
        steps: Vec::new(),
    };
    engine.flatten(&Position::root())?;
    engine.reduce()?;

    let mut conditions = BTreeSet::new();
    denominators(t, &mut conditions);
    for step in &engine.steps {
        conditions.extend(step.conditions.iter().cloned());
        denominators(&step.after, &mut conditions);
    }
    debug_assert!(is_simplified_flat(&engine.term));
    Ok(NormalForm {
        result: engine.term,
        conditions: conditions.into_iter().collect(),
        trace: Derivation {
            steps: engine.steps,
        },
    })
}

/// Normal form using the full meadow calculus: zero-denominator fractions
/// vanish and sums merge by CFAR.
pub fn normalize_full(t: &Term) -> Result<NormalForm, NormalizeError> {
    run(t, RuleSet::Full)
}

/// Division-safe normal form. Fails on the outermost uncommon fraction of
/// an unsafe input instead of calculating it away.
pub fn normalize_safe(t: &Term) -> Result<NormalForm, NormalizeError> {
    if !t.is_closed() {
        return Err(NormalizeError::Open(t.to_string()));
    }
    if let Some((position, subterm)) = find_unsafe(t) {
        return Err(NormalizeError::Unsafe { subterm, position });
    }
    run(t, RuleSet::Safe)
}

pub fn normalize(t: &Term, mode: Mode) -> Result<NormalForm, NormalizeError> {
    match mode {
        Mode::Full => normalize_full(t),
        Mode::Safe => normalize_safe(t),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Equality {
    pub equal: bool,
    pub left: NormalForm,
    pub right: NormalForm,
    pub conditions: Vec<SideCondition>,
}

/// Compares the normal forms of two closed terms.
pub fn check_equal(s: &Term, t: &Term, mode: Mode) -> Result<Equality, NormalizeError> {
    let left = normalize(s, mode)?;
    let right = normalize(t, mode)?;
    let conditions: BTreeSet<SideCondition> = left
        .conditions
        .iter()
        .chain(&right.conditions)
        .cloned()
        .collect();
    Ok(Equality {
        equal: left.result == right.result,
        left,
        right,
        conditions: conditions.into_iter().collect(),
    })
}
