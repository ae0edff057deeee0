//! Checking conditional identities in a meadow: exhaustively over a
//! finite carrier, or over a supplied list of sample assignments.

use std::collections::BTreeMap;
use std::ops::Range;

use serde::Serialize;
use thiserror::Error;

use super::{evaluate, EvalError, Meadow};
use crate::syntax::{parse, ParseError};
use crate::term::Term;

/// `conditions ≠ 0 → lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
    /// Each term is required to be nonzero.
    pub conditions: Vec<Term>,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Identity {
            lhs,
            rhs,
            conditions: Vec::new(),
        }
    }

    pub fn when_nonzero(mut self, guard: Term) -> Self {
        self.conditions.push(guard);
        self
    }

    /// Builds an identity from infix source, e.g.
    /// `Identity::parse("x/y + u/v", "(x*v + y*u)/(y*v)", &["y", "v"])`.
    pub fn parse(lhs: &str, rhs: &str, nonzero: &[&str]) -> Result<Self, ParseError> {
        let mut id = Identity::new(parse(lhs)?, parse(rhs)?);
        for guard in nonzero {
            id = id.when_nonzero(parse(guard)?);
        }
        Ok(id)
    }

    /// Sorted free variables of both sides and the guards.
    pub fn variables(&self) -> Vec<String> {
        let mut vars: Vec<String> = std::iter::once(&self.lhs)
            .chain(std::iter::once(&self.rhs))
            .chain(self.conditions.iter())
            .flat_map(Term::variables)
            .collect();
        vars.sort();
        vars.dedup();
        vars
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Valid,
    Counterexample,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub status: CheckStatus,
    pub assignments_checked: u64,
    pub counterexample: Option<BTreeMap<String, String>>,
}

impl CheckReport {
    pub fn is_valid(&self) -> bool {
        self.status == CheckStatus::Valid
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("exhaustive checking needs a finite meadow; supply sample assignments instead")]
    Infinite,
    #[error("assignment space of {vars} variables over {size} elements is too large")]
    TooLarge { vars: usize, size: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

struct Space<'a, V> {
    vars: &'a [String],
    elements: &'a [V],
}

impl<V: Clone> Space<'_, V> {
    // First variable is the most significant digit.
    fn assignment(&self, mut index: u64) -> BTreeMap<String, V> {
        let n = self.elements.len() as u64;
        let mut env = BTreeMap::new();
        for var in self.vars.iter().rev() {
            env.insert(var.clone(), self.elements[(index % n) as usize].clone());
            index /= n;
        }
        env
    }
}

fn holds<M: Meadow>(
    id: &Identity,
    meadow: &M,
    env: &BTreeMap<String, M::Value>,
) -> Result<bool, EvalError> {
    for guard in &id.conditions {
        if meadow.is_zero(&evaluate(guard, meadow, env)?) {
            return Ok(true);
        }
    }
    Ok(evaluate(&id.lhs, meadow, env)? == evaluate(&id.rhs, meadow, env)?)
}

fn first_failure<M: Meadow>(
    id: &Identity,
    meadow: &M,
    space: &Space<'_, M::Value>,
    range: Range<u64>,
) -> Result<Option<u64>, EvalError> {
    for index in range {
        if !holds(id, meadow, &space.assignment(index))? {
            return Ok(Some(index));
        }
    }
    Ok(None)
}

fn render<V: std::fmt::Display>(env: BTreeMap<String, V>) -> BTreeMap<String, String> {
    env.into_iter().map(|(k, v)| (k, v.to_string())).collect()
}

fn space_size(vars: usize, size: usize) -> Result<u64, CheckError> {
    u32::try_from(vars)
        .ok()
        .and_then(|k| (size as u64).checked_pow(k))
        .ok_or(CheckError::TooLarge { vars, size })
}

fn report<V: Clone + std::fmt::Display>(
    failure: Option<u64>,
    total: u64,
    space: &Space<'_, V>,
) -> CheckReport {
    match failure {
        None => CheckReport {
            status: CheckStatus::Valid,
            assignments_checked: total,
            counterexample: None,
        },
        Some(index) => CheckReport {
            status: CheckStatus::Counterexample,
            assignments_checked: index + 1,
            counterexample: Some(render(space.assignment(index))),
        },
    }
}

/// Checks `id` on every assignment over a finite meadow. The reported
/// counterexample is the first failing assignment in lexicographic order of
/// the sorted variables.
pub fn check_identity<M: Meadow>(id: &Identity, meadow: &M) -> Result<CheckReport, CheckError> {
    let elements = meadow.elements().ok_or(CheckError::Infinite)?;
    let vars = id.variables();
    let total = space_size(vars.len(), elements.len())?;
    let space = Space {
        vars: &vars,
        elements: &elements,
    };
    let failure = first_failure(id, meadow, &space, 0..total)?;
    Ok(report(failure, total, &space))
}

/// Like [`check_identity`], splitting the assignment space over `threads`
/// workers. The report does not depend on the number of workers.
pub fn check_identity_parallel<M>(
    id: &Identity,
    meadow: &M,
    threads: usize,
) -> Result<CheckReport, CheckError>
where
    M: Meadow + Sync,
    M::Value: Send + Sync,
{
    let elements = meadow.elements().ok_or(CheckError::Infinite)?;
    let vars = id.variables();
    let total = space_size(vars.len(), elements.len())?;
    let space = Space {
        vars: &vars,
        elements: &elements,
    };
    let threads = threads.max(1) as u64;
    let chunk = total.div_ceil(threads).max(1);
    let results: Vec<Result<Option<u64>, EvalError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|i| {
                let range = (i * chunk).min(total)..((i + 1) * chunk).min(total);
                let space = &space;
                scope.spawn(move || first_failure(id, meadow, space, range))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("checker thread panicked"))
            .collect()
    });
    let mut failure = None;
    for r in results {
        if let Some(index) = r? {
            failure = Some(failure.map_or(index, |f: u64| f.min(index)));
        }
    }
    Ok(report(failure, total, &space))
}

/// Checks `id` on the given assignments only; validity here means "no
/// counterexample among the samples".
pub fn check_identity_sampled<M: Meadow>(
    id: &Identity,
    meadow: &M,
    samples: &[BTreeMap<String, M::Value>],
) -> Result<CheckReport, CheckError> {
    for (i, env) in samples.iter().enumerate() {
        if !holds(id, meadow, env)? {
            return Ok(CheckReport {
                status: CheckStatus::Counterexample,
                assignments_checked: i as u64 + 1,
                counterexample: Some(render(env.clone())),
            });
        }
    }
    Ok(CheckReport {
        status: CheckStatus::Valid,
        assignments_checked: samples.len() as u64,
        counterexample: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    Valid,
    Counterexample,
}

#[derive(Clone, Debug)]
pub struct Axiom {
    pub name: &'static str,
    pub identity: Identity,
    /// Expected outcome in a nontrivial involutive meadow.
    pub expect: Expectation,
}

/// The rule catalogue used by the `axioms` command and the acceptance
/// suite.
pub fn standard_axioms() -> Vec<Axiom> {
    use Expectation::*;
    let table: &[(&str, &str, &str, &[&str], Expectation)] = &[
        ("QCR", "x/y + u/y", "(x+u)/y", &[], Valid),
        ("DIV1", "(x/y)/z", "x/(y*z)", &[], Valid),
        ("DIV2", "x/(y/z)", "(x*z*z)/(y*z)", &[], Valid),
        ("DBZ", "x/0", "0/1", &[], Valid),
        ("INV", "1/(1/x)", "x", &[], Valid),
        ("SQUARE", "(x*x)/x", "x", &[], Valid),
        ("DIVMUL", "x/y", "x*(1/y)", &[], Valid),
        ("CANCEL", "x*(1/x)", "1", &["x"], Valid),
        ("FEQ", "x/y", "(x*z)/(y*z)", &["z"], Valid),
        ("CFAR", "x/y + u/v", "(x*v + y*u)/(y*v)", &["y", "v"], Valid),
        ("FAR", "x/y + u/v", "(x*v + y*u)/(y*v)", &[], Counterexample),
        ("MULFRAC", "(x/y)*(u/v)", "(x*u)/(y*v)", &[], Valid),
        ("INVFRAC", "1/(x/y)", "y/x", &[], Valid),
        ("NEGFRAC", "-(x/y)", "(-x)/y", &[], Valid),
        ("SIGNDEN", "x/(-y)", "(-x)/y", &[], Valid),
    ];
    table
        .iter()
        .map(|(name, lhs, rhs, guards, expect)| Axiom {
            name,
            identity: Identity::parse(lhs, rhs, guards).expect("catalogue parses"),
            expect: *expect,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meadow::{MeadowKind, MeadowValue, PrimeField};

    #[test]
    fn div1_valid_over_all_125_assignments() {
        let id = Identity::parse("(x/y)/z", "x/(y*z)", &[]).unwrap();
        let r = check_identity(&id, &PrimeField::new(5).unwrap()).unwrap();
        assert_eq!(r.status, CheckStatus::Valid);
        assert_eq!(r.assignments_checked, 125);
        assert_eq!(r.counterexample, None);
    }

    #[test]
    fn far_fails_in_gf3() {
        let id = Identity::parse("x/y + u/v", "(x*v+y*u)/(y*v)", &[]).unwrap();
        let r = check_identity(&id, &MeadowKind::gf(3).unwrap()).unwrap();
        assert_eq!(r.status, CheckStatus::Counterexample);
        let cex = r.counterexample.unwrap();
        // Re-evaluate the reported assignment.
        let env: BTreeMap<String, MeadowValue> = cex
            .iter()
            .map(|(k, v)| {
                let value: u64 = v.split(' ').next().unwrap().parse().unwrap();
                (k.clone(), MeadowValue::Residue { value, modulus: 3 })
            })
            .collect();
        let m = MeadowKind::gf(3).unwrap();
        assert!(!holds(&id, &m, &env).unwrap());
    }

    #[test]
    fn cfar_valid_under_guards() {
        let id = Identity::parse("x/y + u/v", "(x*v+y*u)/(y*v)", &["y", "v"]).unwrap();
        let r = check_identity(&id, &PrimeField::new(5).unwrap()).unwrap();
        assert!(r.is_valid());
        assert_eq!(r.assignments_checked, 625);
    }

    #[test]
    fn infinite_meadow_needs_samples() {
        let id = Identity::parse("x", "x", &[]).unwrap();
        assert_eq!(
            check_identity(&id, &MeadowKind::Q0),
            Err(CheckError::Infinite)
        );
        let far = Identity::parse("x/y + u/v", "(x*v+y*u)/(y*v)", &[]).unwrap();
        let sample: BTreeMap<String, MeadowValue> = [("x", 1), ("y", 1), ("u", 1), ("v", 0)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), MeadowValue::integer(v)))
            .collect();
        let r = check_identity_sampled(&far, &MeadowKind::Q0, &[sample]).unwrap();
        assert_eq!(r.status, CheckStatus::Counterexample);
    }

    #[test]
    fn partitioning_does_not_change_reports() {
        let field = PrimeField::new(5).unwrap();
        for axiom in standard_axioms() {
            let seq = check_identity(&axiom.identity, &field).unwrap();
            for threads in [1, 2, 3, 7, 1000] {
                let par = check_identity_parallel(&axiom.identity, &field, threads).unwrap();
                assert_eq!(seq, par, "{} with {threads} threads", axiom.name);
            }
        }
    }

    #[test]
    fn report_json_shape() {
        let id = Identity::parse("x/0", "0/1", &[]).unwrap();
        let r = check_identity(&id, &PrimeField::new(2).unwrap()).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"status":"valid","assignments_checked":2,"counterexample":null}"#
        );
    }
}
