//! Arithmetical terms over the divisive meadow signature.
//!
//! A [`Term`] is built from numerals, variables, addition, multiplication,
//! unary minus and division. There is no inverse constructor; `x/y` is the
//! only way to express division. Numerals are primitive leaves: `Num(3)` is
//! not the same tree as `(1+1)+1`, although [`expand_numeral`] produces the
//! latter reading on demand.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Num(BigUint),
    Var(String),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    Div(Box<Term>, Box<Term>),
}

/// Path of 0-based child indices from the root of a term.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<usize>);

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("position {position} does not address a subterm")]
    InvalidPosition { position: Position },
}

/// The numeral `k`.
pub fn numeral(k: impl Into<BigUint>) -> Term {
    Term::Num(k.into())
}

#[allow(clippy::should_implement_trait)]
impl Term {
    pub fn num(k: u64) -> Term {
        Term::Num(BigUint::from(k))
    }

    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn zero() -> Term {
        Term::num(0)
    }

    pub fn one() -> Term {
        Term::num(1)
    }

    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Term) -> Term {
        Term::Neg(Box::new(a))
    }

    pub fn div(a: Term, b: Term) -> Term {
        Term::Div(Box::new(a), Box::new(b))
    }

    /// `a - b`, which the signature spells `a + (-b)`.
    pub fn sub(a: Term, b: Term) -> Term {
        Term::add(a, Term::neg(b))
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Num(_) | Term::Var(_) => Vec::new(),
            Term::Neg(a) => vec![a],
            Term::Add(a, b) | Term::Mul(a, b) | Term::Div(a, b) => vec![a, b],
        }
    }

    fn child_mut(&mut self, index: usize) -> Option<&mut Term> {
        match (self, index) {
            (Term::Neg(a), 0) => Some(a),
            (Term::Add(a, _) | Term::Mul(a, _) | Term::Div(a, _), 0) => Some(a),
            (Term::Add(_, b) | Term::Mul(_, b) | Term::Div(_, b), 1) => Some(b),
            _ => None,
        }
    }

    /// Numerator and denominator when the leading symbol is division.
    pub fn as_fraction(&self) -> Option<(&Term, &Term)> {
        match self {
            Term::Div(p, q) => Some((p, q)),
            _ => None,
        }
    }

    pub fn as_numeral(&self) -> Option<&BigUint> {
        match self {
            Term::Num(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_fraction(&self) -> bool {
        matches!(self, Term::Div(..))
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Num(_) => true,
            Term::Var(_) => false,
            Term::Neg(a) => a.is_closed(),
            Term::Add(a, b) | Term::Mul(a, b) | Term::Div(a, b) => a.is_closed() && b.is_closed(),
        }
    }

    /// True when no division occurs anywhere in the term.
    pub fn is_polynomial(&self) -> bool {
        match self {
            Term::Num(_) | Term::Var(_) => true,
            Term::Div(..) => false,
            Term::Neg(a) => a.is_polynomial(),
            Term::Add(a, b) | Term::Mul(a, b) => a.is_polynomial() && b.is_polynomial(),
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Term::node_count)
            .sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Term::depth)
            .max()
            .unwrap_or(0)
    }

    /// Free variables in first-occurrence order, without duplicates.
    pub fn variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(name) => {
                if !out.iter().any(|v| v == name) {
                    out.push(name.clone());
                }
            }
            _ => self
                .children()
                .into_iter()
                .for_each(|c| c.collect_variables(out)),
        }
    }

    pub fn subterm_at(&self, position: &Position) -> Result<&Term, TermError> {
        let mut current = self;
        for &index in &position.0 {
            current = *current
                .children()
                .get(index)
                .ok_or_else(|| TermError::InvalidPosition {
                    position: position.clone(),
                })?;
        }
        Ok(current)
    }

    /// Copy of `self` with the subterm at `position` replaced.
    pub fn replace_at(&self, position: &Position, replacement: Term) -> Result<Term, TermError> {
        let mut out = self.clone();
        let mut slot = &mut out;
        for &index in &position.0 {
            slot = slot
                .child_mut(index)
                .ok_or_else(|| TermError::InvalidPosition {
                    position: position.clone(),
                })?;
        }
        *slot = replacement;
        Ok(out)
    }

    /// All `(position, subterm)` pairs in preorder.
    pub fn subterms(&self) -> Vec<(Position, &Term)> {
        let mut out = Vec::with_capacity(self.node_count());
        let mut path = Vec::new();
        self.collect_subterms(&mut path, &mut out);
        out
    }

    fn collect_subterms<'a>(&'a self, path: &mut Vec<usize>, out: &mut Vec<(Position, &'a Term)>) {
        out.push((Position(path.clone()), self));
        for (i, child) in self.children().into_iter().enumerate() {
            path.push(i);
            child.collect_subterms(path, out);
            path.pop();
        }
    }
}

/// Syntactic (fracterm) equality: structural identity of the two trees.
pub fn eq_syn(s: &Term, t: &Term) -> bool {
    s == t
}

/// Replaces every numeral `n >= 2` by the left-nested sum of `n` units.
pub fn expand_numeral(t: &Term) -> Term {
    match t {
        Term::Num(n) if *n > BigUint::one() => {
            let mut acc = Term::one();
            let mut count = BigUint::one();
            while &count < n {
                acc = Term::add(acc, Term::one());
                count += 1u32;
            }
            acc
        }
        Term::Num(_) | Term::Var(_) => t.clone(),
        Term::Neg(a) => Term::neg(expand_numeral(a)),
        Term::Add(a, b) => Term::add(expand_numeral(a), expand_numeral(b)),
        Term::Mul(a, b) => Term::mul(expand_numeral(a), expand_numeral(b)),
        Term::Div(a, b) => Term::div(expand_numeral(a), expand_numeral(b)),
    }
}

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn child(&self, index: usize) -> Position {
        let mut path = self.0.clone();
        path.push(index);
        Position(path)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// True if `self` is a strict prefix of `other`.
    pub fn is_proper_prefix_of(&self, other: &Position) -> bool {
        self.0.len() < other.0.len() && other.0.starts_with(&self.0)
    }
}

impl From<Vec<usize>> for Position {
    fn from(path: Vec<usize>) -> Self {
        Position(path)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, index) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{index}")?;
        }
        write!(f, "]")
    }
}

pub(crate) fn is_zero_numeral(t: &Term) -> bool {
    matches!(t, Term::Num(n) if n.is_zero())
}
