//! Random closed terms and reference evaluators shared by the integration
//! tests. The evaluators here are written from scratch on top of
//! `num-rational` and plain modular arithmetic and do not touch the crate's
//! meadow code.

#![allow(dead_code)]

use fracterm::term::{Position, Term};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const MAX_DEPTH: usize = 6;
pub const MAX_NUMERAL: u64 = 12;

#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    pub max_depth: usize,
    pub max_numeral: u64,
    /// Chance that a generated denominator is replaced by one denoting zero.
    pub zero_denominator: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_depth: MAX_DEPTH,
            max_numeral: MAX_NUMERAL,
            zero_denominator: 0.0,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

fn leaf(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Term {
    Term::num(rng.gen_range(0..=cfg.max_numeral))
}

/// A closed term denoting zero, of depth at most `depth`.
pub fn zero_term(rng: &mut ChaCha8Rng, cfg: &GenConfig, depth: usize) -> Term {
    if depth < 3 {
        return Term::zero();
    }
    let k = Term::num(rng.gen_range(0..=cfg.max_numeral));
    match rng.gen_range(0..4) {
        0 => Term::zero(),
        1 => Term::add(k.clone(), Term::neg(k)),
        2 => Term::mul(Term::zero(), gen_with(rng, cfg, depth - 1)),
        _ => Term::div(gen_with(rng, cfg, depth - 2), Term::zero()),
    }
}

/// Closed term of depth at most `depth` (a leaf has depth 1).
pub fn gen_with(rng: &mut ChaCha8Rng, cfg: &GenConfig, depth: usize) -> Term {
    if depth <= 1 || rng.gen_bool(0.25) {
        return leaf(rng, cfg);
    }
    let sub = depth - 1;
    match rng.gen_range(0..7) {
        0 | 1 => Term::add(gen_with(rng, cfg, sub), gen_with(rng, cfg, sub)),
        2 => Term::mul(gen_with(rng, cfg, sub), gen_with(rng, cfg, sub)),
        3 => Term::neg(gen_with(rng, cfg, sub)),
        _ => {
            let num = gen_with(rng, cfg, sub);
            let den = if rng.gen_bool(cfg.zero_denominator) {
                zero_term(rng, cfg, sub)
            } else {
                gen_with(rng, cfg, sub)
            };
            Term::div(num, den)
        }
    }
}

pub fn gen_term(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Term {
    gen_with(rng, cfg, cfg.max_depth)
}

/// Random closed term that is safe according to [`oracle_unsafe`].
pub fn gen_safe(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Term {
    loop {
        let t = gen_term(rng, cfg);
        if oracle_unsafe(&t).is_none() {
            return t;
        }
    }
}

/// Random fraction `p/q` with closed `p`, `q`.
pub fn gen_fraction(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Term {
    let sub = cfg.max_depth - 1;
    let den = if rng.gen_bool(cfg.zero_denominator) {
        zero_term(rng, cfg, sub)
    } else {
        gen_with(rng, cfg, sub)
    };
    Term::div(gen_with(rng, cfg, sub), den)
}

/// Proptest strategy for closed terms of bounded depth.
pub fn closed_term() -> impl Strategy<Value = Term> {
    let leaf = (0..=MAX_NUMERAL).prop_map(Term::num);
    leaf.prop_recursive(MAX_DEPTH as u32 - 1, 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::mul(a, b)),
            inner.clone().prop_map(Term::neg),
            (inner.clone(), inner).prop_map(|(a, b)| Term::div(a, b)),
        ]
    })
}

/// Proptest strategy for terms over the variables `x`, `y`, `z`.
pub fn open_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0..=MAX_NUMERAL).prop_map(Term::num),
        prop::sample::select(vec!["x", "y", "z"]).prop_map(Term::var),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::mul(a, b)),
            inner.clone().prop_map(Term::neg),
            (inner.clone(), inner).prop_map(|(a, b)| Term::div(a, b)),
        ]
    })
}

fn big(n: &num_bigint::BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// Value in the rationals with `x/0 = 0`.
pub fn oracle_q0(t: &Term) -> BigRational {
    match t {
        Term::Num(n) => big(n),
        Term::Var(v) => panic!("oracle needs a closed term, found {v}"),
        Term::Neg(a) => -oracle_q0(a),
        Term::Add(a, b) => oracle_q0(a) + oracle_q0(b),
        Term::Mul(a, b) => oracle_q0(a) * oracle_q0(b),
        Term::Div(a, b) => {
            let d = oracle_q0(b);
            if d.is_zero() {
                BigRational::zero()
            } else {
                oracle_q0(a) / d
            }
        }
    }
}

/// Value in the rationals with an absorbing error element; `None` is the
/// error.
pub fn oracle_common(t: &Term) -> Option<BigRational> {
    Some(match t {
        Term::Num(n) => big(n),
        Term::Var(v) => panic!("oracle needs a closed term, found {v}"),
        Term::Neg(a) => -oracle_common(a)?,
        Term::Add(a, b) => oracle_common(a)? + oracle_common(b)?,
        Term::Mul(a, b) => oracle_common(a)? * oracle_common(b)?,
        Term::Div(a, b) => {
            let (x, y) = (oracle_common(a)?, oracle_common(b)?);
            if y.is_zero() {
                return None;
            }
            x / y
        }
    })
}

/// Inverse modulo `p` by search, with `0⁻¹ = 0`.
pub fn inverse_mod(x: u64, p: u64) -> u64 {
    (1..p).find(|y| x * y % p == 1).unwrap_or(0)
}

/// Value modulo `p` under `env` (variables to residues).
pub fn oracle_gf(t: &Term, p: u64, env: &dyn Fn(&str) -> u64) -> u64 {
    match t {
        Term::Num(n) => (n % p).try_into().unwrap(),
        Term::Var(v) => env(v) % p,
        Term::Neg(a) => (p - oracle_gf(a, p, env)) % p,
        Term::Add(a, b) => (oracle_gf(a, p, env) + oracle_gf(b, p, env)) % p,
        Term::Mul(a, b) => oracle_gf(a, p, env) * oracle_gf(b, p, env) % p,
        Term::Div(a, b) => oracle_gf(a, p, env) * inverse_mod(oracle_gf(b, p, env), p) % p,
    }
}

/// First fraction in preorder whose denominator is zero in the rationals.
pub fn oracle_unsafe(t: &Term) -> Option<Position> {
    fn walk(t: &Term, path: &mut Vec<usize>) -> Option<Position> {
        if let Term::Div(_, b) = t {
            if oracle_q0(b).is_zero() {
                return Some(Position(path.clone()));
            }
        }
        for (i, c) in t.children().into_iter().enumerate() {
            path.push(i);
            let found = walk(c, path);
            path.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
    walk(t, &mut Vec::new())
}
