//! Concrete syntax for terms: an infix parser, a fully parenthesized
//! printer and a JSON tree encoding.
//!
//! Grammar, with `*` and `/` of equal precedence and everything
//! left-associative:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom
//! atom   := natural | mixed | identifier | '(' expr ')'
//! mixed  := digits '_' digits '/' digits
//! ```
//!
//! `a - b` is read as `a + (-b)`, and the mixed literal `n_p/q` as
//! `n + p/q`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at offset {offset}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the source text.
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("empty input")]
    Empty,
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unexpected {0}")]
    UnexpectedToken(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("malformed mixed fraction: {0}")]
    BadMixed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Nat(BigUint),
    Mixed(BigUint, BigUint, BigUint),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Nat(n) => write!(f, "number {n}"),
            Token::Mixed(n, p, q) => write!(f, "mixed fraction {n}_{p}/{q}"),
            Token::Ident(s) => write!(f, "identifier {s}"),
            Token::Plus => f.write_str("'+'"),
            Token::Minus => f.write_str("'-'"),
            Token::Star => f.write_str("'*'"),
            Token::Slash => f.write_str("'/'"),
            Token::LParen => f.write_str("'('"),
            Token::RParen => f.write_str("')'"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    let digits = |start: usize| -> usize {
        let mut j = start;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => tokens.push((Token::Plus, start)),
            b'-' => tokens.push((Token::Minus, start)),
            b'*' => tokens.push((Token::Star, start)),
            b'/' => tokens.push((Token::Slash, start)),
            b'(' => tokens.push((Token::LParen, start)),
            b')' => tokens.push((Token::RParen, start)),
            b'0'..=b'9' => {
                let end = digits(i);
                let whole = parse_digits(&src[i..end]);
                if end < bytes.len() && bytes[end] == b'_' {
                    let p_end = digits(end + 1);
                    let slash_ok = p_end > end + 1 && p_end < bytes.len() && bytes[p_end] == b'/';
                    let q_end = if slash_ok { digits(p_end + 1) } else { p_end };
                    if !slash_ok || q_end == p_end + 1 {
                        return Err(ParseError {
                            kind: ParseErrorKind::BadMixed("expected digits_digits/digits".into()),
                            offset: start,
                        });
                    }
                    let p = parse_digits(&src[end + 1..p_end]);
                    let q = parse_digits(&src[p_end + 1..q_end]);
                    check_mixed(&whole, &p, &q).map_err(|msg| ParseError {
                        kind: ParseErrorKind::BadMixed(msg),
                        offset: start,
                    })?;
                    tokens.push((Token::Mixed(whole, p, q), start));
                    i = q_end;
                } else {
                    tokens.push((Token::Nat(whole), start));
                    i = end;
                }
                if i < bytes.len() && (bytes[i] == b'.' || bytes[i].is_ascii_alphabetic()) {
                    return Err(ParseError {
                        kind: ParseErrorKind::UnexpectedChar(bytes[i] as char),
                        offset: i,
                    });
                }
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let mut j = i + 1;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                tokens.push((Token::Ident(src[i..j].to_string()), start));
                i = j;
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    kind: ParseErrorKind::UnexpectedChar(ch),
                    offset: i,
                });
            }
        }
        i += 1;
    }
    Ok(tokens)
}

fn parse_digits(s: &str) -> BigUint {
    BigUint::parse_bytes(s.as_bytes(), 10).expect("lexer only passes ASCII digits")
}

// A mixed fraction has a positive whole part and a positive proper fraction.
fn check_mixed(n: &BigUint, p: &BigUint, q: &BigUint) -> Result<(), String> {
    if n.is_zero() {
        return Err("whole part must be positive".into());
    }
    if p.is_zero() || p >= q {
        return Err("fraction part must be positive and proper".into());
    }
    Ok(())
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn unexpected(&self) -> ParseError {
        match self.tokens.get(self.pos) {
            Some((tok, offset)) => ParseError {
                kind: ParseErrorKind::UnexpectedToken(tok.to_string()),
                offset: *offset,
            },
            None => ParseError {
                kind: ParseErrorKind::UnexpectedEnd,
                offset: self.end,
            },
        }
    }

    fn expr(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    lhs = Term::add(lhs, self.term()?);
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    lhs = Term::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    lhs = Term::mul(lhs, self.factor()?);
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    lhs = Term::div(lhs, self.factor()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Term, ParseError> {
        if let Some(Token::Minus) = self.peek() {
            self.pos += 1;
            return Ok(Term::neg(self.factor()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let Some((tok, _)) = self.tokens.get(self.pos).cloned() else {
            return Err(self.unexpected());
        };
        match tok {
            Token::Nat(n) => {
                self.pos += 1;
                Ok(Term::Num(n))
            }
            Token::Mixed(n, p, q) => {
                self.pos += 1;
                Ok(Term::add(
                    Term::Num(n),
                    Term::div(Term::Num(p), Term::Num(q)),
                ))
            }
            Token::Ident(name) => {
                self.pos += 1;
                Ok(Term::Var(name))
            }
            Token::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Token::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.unexpected()),
                }
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parses infix source text into a term.
pub fn parse(src: &str) -> Result<Term, ParseError> {
    let tokens = lex(src)?;
    if tokens.is_empty() {
        return Err(ParseError {
            kind: ParseErrorKind::Empty,
            offset: 0,
        });
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: src.len(),
    };
    let term = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.unexpected());
    }
    Ok(term)
}

/// Fully parenthesized infix text; `parse(&print(t)) == t`.
pub fn print(t: &Term) -> String {
    t.to_string()
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Num(n) => write!(f, "{n}"),
            Term::Var(name) => f.write_str(name),
            Term::Neg(a) => write!(f, "(-{a})"),
            Term::Add(a, b) => write!(f, "({a}+{b})"),
            Term::Mul(a, b) => write!(f, "({a}*{b})"),
            Term::Div(a, b) => write!(f, "({a}/{b})"),
        }
    }
}

impl std::str::FromStr for Term {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum JsonOp {
    Add,
    Mul,
    Neg,
    Div,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum JsonTerm {
    Op { op: JsonOp, args: Vec<JsonTerm> },
    Num { num: String },
    Var { var: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonTermError {
    #[error("invalid JSON term: {0}")]
    Json(String),
    #[error("operator {op} expects {expected} argument(s), got {got}")]
    Arity {
        op: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("numeral {0:?} is not a decimal natural number")]
    BadNumeral(String),
    #[error("empty variable name")]
    EmptyVar,
}

impl From<&Term> for JsonTerm {
    fn from(t: &Term) -> Self {
        let op = |op, args: Vec<&Term>| JsonTerm::Op {
            op,
            args: args.into_iter().map(JsonTerm::from).collect(),
        };
        match t {
            Term::Num(n) => JsonTerm::Num { num: n.to_string() },
            Term::Var(v) => JsonTerm::Var { var: v.clone() },
            Term::Add(a, b) => op(JsonOp::Add, vec![a, b]),
            Term::Mul(a, b) => op(JsonOp::Mul, vec![a, b]),
            Term::Div(a, b) => op(JsonOp::Div, vec![a, b]),
            Term::Neg(a) => op(JsonOp::Neg, vec![a]),
        }
    }
}

impl TryFrom<JsonTerm> for Term {
    type Error = JsonTermError;

    fn try_from(j: JsonTerm) -> Result<Self, Self::Error> {
        match j {
            JsonTerm::Num { num } => {
                if num.is_empty() || !num.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(JsonTermError::BadNumeral(num));
                }
                Ok(Term::Num(parse_digits(&num)))
            }
            JsonTerm::Var { var } if var.is_empty() => Err(JsonTermError::EmptyVar),
            JsonTerm::Var { var } => Ok(Term::Var(var)),
            JsonTerm::Op { op, args } => {
                let (name, expected) = match op {
                    JsonOp::Add => ("add", 2),
                    JsonOp::Mul => ("mul", 2),
                    JsonOp::Div => ("div", 2),
                    JsonOp::Neg => ("neg", 1),
                };
                if args.len() != expected {
                    return Err(JsonTermError::Arity {
                        op: name,
                        expected,
                        got: args.len(),
                    });
                }
                let mut args = args
                    .into_iter()
                    .map(Term::try_from)
                    .collect::<Result<Vec<_>, _>>()?
                    .into_iter();
                let mut next = || args.next().expect("arity checked");
                Ok(match op {
                    JsonOp::Neg => Term::neg(next()),
                    JsonOp::Add => Term::add(next(), next()),
                    JsonOp::Mul => Term::mul(next(), next()),
                    JsonOp::Div => Term::div(next(), next()),
                })
            }
        }
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        JsonTerm::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let j = JsonTerm::deserialize(deserializer)?;
        Term::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// JSON tree encoding of a term.
pub fn to_json(t: &Term) -> String {
    serde_json::to_string(t).expect("term serialization is infallible")
}

pub fn from_json(s: &str) -> Result<Term, JsonTermError> {
    let j: JsonTerm = serde_json::from_str(s).map_err(|e| JsonTermError::Json(e.to_string()))?;
    Term::try_from(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n(k: u64) -> Term {
        Term::num(k)
    }

    #[test]
    fn parses_two_level_fraction() {
        assert_eq!(
            parse("(2+3)/7").unwrap(),
            Term::div(Term::add(n(2), n(3)), n(7))
        );
    }

    #[test]
    fn parses_mixed_literal() {
        assert_eq!(
            parse("3_1/2").unwrap(),
            Term::add(n(3), Term::div(n(1), n(2)))
        );
        assert_eq!(
            parse("-3_1/2").unwrap(),
            Term::neg(Term::add(n(3), Term::div(n(1), n(2))))
        );
    }

    #[test]
    fn division_is_left_associative() {
        assert_eq!(
            parse("1/2/3").unwrap(),
            Term::div(Term::div(n(1), n(2)), n(3))
        );
        assert_eq!(
            parse("2*3/4").unwrap(),
            Term::div(Term::mul(n(2), n(3)), n(4))
        );
    }

    #[test]
    fn subtraction_desugars() {
        assert_eq!(
            parse("1 - 2 - x").unwrap(),
            Term::add(Term::add(n(1), Term::neg(n(2))), Term::neg(Term::var("x")))
        );
        assert_eq!(parse("--1").unwrap(), Term::neg(Term::neg(n(1))));
        assert_eq!(parse("-1*2").unwrap(), Term::mul(Term::neg(n(1)), n(2)));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(parse("").unwrap_err().kind, ParseErrorKind::Empty);
        assert_eq!(parse("   ").unwrap_err().kind, ParseErrorKind::Empty);
        assert_eq!(parse("0.5").unwrap_err().offset, 1);
        assert_eq!(
            parse("1 +").unwrap_err().kind,
            ParseErrorKind::UnexpectedEnd
        );
        assert_eq!(parse("(1").unwrap_err().kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(parse("1 2").unwrap_err().offset, 2);
        assert_eq!(
            parse("1 ÷ 2").unwrap_err().kind,
            ParseErrorKind::UnexpectedChar('÷')
        );
        assert!(matches!(
            parse("3_4/2").unwrap_err().kind,
            ParseErrorKind::BadMixed(_)
        ));
        assert!(matches!(
            parse("0_1/2").unwrap_err().kind,
            ParseErrorKind::BadMixed(_)
        ));
        assert!(matches!(
            parse("3_/2").unwrap_err().kind,
            ParseErrorKind::BadMixed(_)
        ));
        assert!(parse("2x").is_err());
        assert!(parse(")").is_err());
    }

    #[test]
    fn prints_fully_parenthesized() {
        assert_eq!(print(&Term::div(n(1), n(2))), "(1/2)");
        assert_eq!(print(&Term::add(n(1), Term::neg(n(1)))), "(1+(-1))");
        assert_eq!(
            print(&Term::div(Term::div(n(1), n(4)), Term::div(n(3), n(2)))),
            "((1/4)/(3/2))"
        );
    }

    #[test]
    fn json_encoding() {
        let t = Term::div(Term::neg(Term::var("x")), n(12));
        let s = to_json(&t);
        assert_eq!(
            s,
            r#"{"op":"div","args":[{"op":"neg","args":[{"var":"x"}]},{"num":"12"}]}"#
        );
        assert_eq!(from_json(&s).unwrap(), t);
        assert!(matches!(
            from_json(r#"{"op":"neg","args":[]}"#),
            Err(JsonTermError::Arity { .. })
        ));
        assert!(matches!(
            from_json(r#"{"num":"-3"}"#),
            Err(JsonTermError::BadNumeral(_))
        ));
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            (0u64..1000).prop_map(Term::num),
            "[a-z][a-z0-9_]{0,3}".prop_map(Term::Var),
        ];
        leaf.prop_recursive(6, 64, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Term::neg),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::add(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::mul(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Term::div(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(t in arb_term()) {
            prop_assert_eq!(parse(&print(&t)).unwrap(), t);
        }

        #[test]
        fn json_round_trip(t in arb_term()) {
            prop_assert_eq!(from_json(&to_json(&t)).unwrap(), t);
        }
    }
}
