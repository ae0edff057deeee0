//! Fraction classes of a term relative to a meadow, and the three
//! equalities of fracterms (syntactic `≡`, pairwise `≅`, value `=`).
//!
//! Flags that depend on the value of a denominator are three-valued: for an
//! open denominator they are `None` (indeterminate) rather than quantified
//! over all assignments.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::meadow::{denote, Meadow, MeadowKind, MeadowValue};
use crate::term::Term;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub is_fraction: bool,
    pub is_closed: bool,
    pub is_flat: bool,
    pub is_composed: bool,
    pub is_common: Option<bool>,
    pub is_uncommon: Option<bool>,
    pub is_safe_term: Option<bool>,
    pub is_safe_fraction: Option<bool>,
    pub is_simple: bool,
    pub is_unit: Option<bool>,
    pub is_simplified: bool,
    pub is_proper: bool,
    pub is_improper: bool,
    pub is_scheinbruch: bool,
    /// Simple fraction with numerator `-k`; the size flags above then refer
    /// to `k`.
    pub is_negative: bool,
    #[serde(serialize_with = "printed")]
    pub numerator: Option<Term>,
    #[serde(serialize_with = "printed")]
    pub denominator: Option<Term>,
}

fn printed<S: Serializer>(t: &Option<Term>, s: S) -> Result<S::Ok, S::Error> {
    match t {
        Some(t) => s.collect_str(t),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("{0} is not a simple fraction")]
    NotSimple(String),
    #[error("term {0} is not closed")]
    Open(String),
}

fn kleene_not(v: Option<bool>) -> Option<bool> {
    v.map(|b| !b)
}

/// Whether a denominator makes its fraction common in `meadow`: it must
/// denote neither 0 nor the error element.
pub fn denominator_is_nonzero(den: &Term, meadow: &MeadowKind) -> Option<bool> {
    if !den.is_closed() {
        return None;
    }
    let v = denote(den, meadow).ok()?;
    Some(!meadow.is_zero(&v) && v != MeadowValue::Error)
}

/// Signed numeral view `(negative, k)` of `k` or `-k`.
fn signed_numeral(t: &Term) -> Option<(bool, &BigUint)> {
    match t {
        Term::Num(k) => Some((false, k)),
        Term::Neg(inner) => match inner.as_ref() {
            Term::Num(k) => Some((true, k)),
            _ => None,
        },
        _ => None,
    }
}

/// True when no subterm is an uncommon fraction; `None` when that hinges on
/// an open denominator.
pub fn is_safe(t: &Term, meadow: &MeadowKind) -> Option<bool> {
    let mut unknown = false;
    for (_, sub) in t.subterms() {
        if let Some((_, den)) = sub.as_fraction() {
            match denominator_is_nonzero(den, meadow) {
                Some(false) => return Some(false),
                None => unknown = true,
                Some(true) => {}
            }
        }
    }
    if unknown {
        None
    } else {
        Some(true)
    }
}

pub fn classify(t: &Term, meadow: &MeadowKind) -> Classification {
    let fraction = t.as_fraction();
    let is_fraction = fraction.is_some();
    let is_flat = fraction.is_some_and(|(p, q)| p.is_polynomial() && q.is_polynomial());
    let is_common = match fraction {
        Some((_, q)) => denominator_is_nonzero(q, meadow),
        None => Some(false),
    };
    let is_uncommon = if is_fraction {
        kleene_not(is_common)
    } else {
        Some(false)
    };
    let is_safe_term = is_safe(t, meadow);
    let is_safe_fraction = if is_fraction {
        is_safe_term
    } else {
        Some(false)
    };

    let simple = fraction.and_then(|(p, q)| {
        let (negative, k) = signed_numeral(p)?;
        let l = q.as_numeral()?;
        (is_common == Some(true)).then_some((negative, k, l))
    });
    let is_unit = match fraction {
        Some((Term::Num(k), _)) if k.is_one() => is_common,
        _ => Some(false),
    };
    let (is_simplified, is_proper, is_improper, is_scheinbruch, is_negative) = match simple {
        Some((negative, k, l)) => (
            k.gcd(l).is_one(),
            k < l,
            k >= l,
            !l.is_zero() && (k % l).is_zero(),
            negative,
        ),
        None => (false, false, false, false, false),
    };

    Classification {
        is_fraction,
        is_closed: t.is_closed(),
        is_flat,
        is_composed: is_fraction && !is_flat,
        is_common: if is_fraction { is_common } else { Some(false) },
        is_uncommon,
        is_safe_term,
        is_safe_fraction,
        is_simple: simple.is_some(),
        is_unit,
        is_simplified,
        is_proper,
        is_improper,
        is_scheinbruch,
        is_negative,
        numerator: fraction.map(|(p, _)| p.clone()),
        denominator: fraction.map(|(_, q)| q.clone()),
    }
}

/// Equivalence of simple fractions `p/q` and `r/s`: `p·s = q·r` in the meadow.
pub fn simple_equivalent(f: &Term, g: &Term, meadow: &MeadowKind) -> Result<bool, ClassifyError> {
    let parts = |t: &Term| -> Result<(Term, Term), ClassifyError> {
        if !classify(t, meadow).is_simple {
            return Err(ClassifyError::NotSimple(t.to_string()));
        }
        let (p, q) = t.as_fraction().expect("simple fractions are fractions");
        Ok((p.clone(), q.clone()))
    };
    let (p, q) = parts(f)?;
    let (r, s) = parts(g)?;
    let lhs = denote(&Term::mul(p, s), meadow).expect("simple fractions are closed");
    let rhs = denote(&Term::mul(q, r), meadow).expect("simple fractions are closed");
    Ok(lhs == rhs)
}

/// The fracpair view of a closed term: a fraction contributes the values of
/// its numerator and denominator, any other term `t` the pair `(t, 1)`.
pub fn pair_view(
    t: &Term,
    meadow: &MeadowKind,
) -> Result<(MeadowValue, MeadowValue), ClassifyError> {
    if !t.is_closed() {
        return Err(ClassifyError::Open(t.to_string()));
    }
    let d = |t: &Term| denote(t, meadow).expect("closed terms always evaluate");
    Ok(match t.as_fraction() {
        Some((p, q)) => (d(p), d(q)),
        None => (d(t), meadow.one()),
    })
}

/// Fracpair equality `P ≅ Q`.
pub fn eq_pair(p: &Term, q: &Term, meadow: &MeadowKind) -> Result<bool, ClassifyError> {
    Ok(pair_view(p, meadow)? == pair_view(q, meadow)?)
}

/// Fracvalue equality `P = Q`.
pub fn eq_val(p: &Term, q: &Term, meadow: &MeadowKind) -> Result<bool, ClassifyError> {
    for t in [p, q] {
        if !t.is_closed() {
            return Err(ClassifyError::Open(t.to_string()));
        }
    }
    Ok(denote(p, meadow).expect("closed") == denote(q, meadow).expect("closed"))
}
