use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fracterm::calculator::{check_equal, normalize, Mode, NormalizeError};
use fracterm::classify::{classify, eq_pair, eq_val, ClassifyError};
use fracterm::meadow::{
    check_identity, denote, eval, standard_axioms, Assignment, CheckError, EvalError, Expectation,
    MeadowKind, MeadowValue,
};
use fracterm::syntax::{parse, ParseError};
use fracterm::term::{eq_syn, Term};
use fracterm::{BigFracpair, ZeroMode};

#[derive(Parser)]
#[command(name = "fracterm", version, about = "Fractions as terms over meadows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical form of an expression.
    Parse {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Print the JSON syntax tree instead.
        #[arg(long)]
        json: bool,
    },
    /// Print the fraction classes of an expression as JSON.
    Classify {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value = "q0")]
        meadow: String,
    },
    /// Evaluate an expression in a meadow.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value = "q0")]
        meadow: String,
        /// Bind a variable to the value of a closed expression, e.g. x=1/2.
        #[arg(long = "let", value_name = "VAR=EXPR")]
        bindings: Vec<String>,
    },
    /// Calculate a closed expression into a simplified flat fraction.
    Normalize {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value = "safe")]
        mode: Mode,
        /// Print the full derivation as JSON.
        #[arg(long)]
        trace: bool,
    },
    /// Compare two expressions.
    Equal {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
        #[arg(long, value_enum, conflicts_with = "mode")]
        relation: Option<Relation>,
        #[arg(long, default_value = "q0")]
        meadow: String,
        /// Compare normal forms instead.
        #[arg(long)]
        mode: Option<Mode>,
    },
    /// Arithmetic on unreduced integer pairs p/q.
    Fracpair {
        #[arg(value_enum)]
        op: PairOp,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(long, value_enum, default_value = "collapse")]
        zero_mode: ZeroModeArg,
    },
    /// Check the identity catalogue on every assignment of a finite meadow.
    Axioms {
        #[arg(long)]
        meadow: String,
        /// Check a single entry of the catalogue.
        #[arg(long)]
        axiom: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Relation {
    Syn,
    Pair,
    Val,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PairOp {
    Add,
    Mul,
    Div,
    Neg,
    /// Pair equality.
    Eq,
    /// Cross-multiplication equivalence.
    Equiv,
    Value,
}

#[derive(Clone, Copy, ValueEnum)]
enum ZeroModeArg {
    Sum,
    Collapse,
}

enum Failure {
    Parse(String, ParseError),
    Unsafe(NormalizeError),
    Domain(String),
    /// An axiom did not behave as expected.
    Check,
}

impl Failure {
    fn domain(e: impl ToString) -> Failure {
        Failure::Domain(e.to_string())
    }
}

impl From<NormalizeError> for Failure {
    fn from(e: NormalizeError) -> Self {
        match e {
            NormalizeError::Unsafe { .. } => Failure::Unsafe(e),
            other => Failure::domain(other),
        }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        Failure::domain(e)
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        Failure::domain(e)
    }
}

impl From<CheckError> for Failure {
    fn from(e: CheckError) -> Self {
        Failure::domain(e)
    }
}

fn term(src: &str) -> Result<Term, Failure> {
    parse(src).map_err(|e| Failure::Parse(src.to_string(), e))
}

fn pair(src: &str) -> Result<BigFracpair, Failure> {
    src.parse().map_err(Failure::domain)
}

fn meadow(src: &str) -> Result<MeadowKind, Failure> {
    src.parse().map_err(Failure::domain)
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn bindings(defs: &[String], meadow: &MeadowKind) -> Result<Assignment, Failure> {
    let mut env = Assignment::new();
    for def in defs {
        let (name, expr) = def
            .split_once('=')
            .ok_or_else(|| Failure::Domain(format!("binding {def:?} is not VAR=EXPR")))?;
        let value = denote(&term(expr)?, meadow)?;
        env.insert(name.trim().to_string(), value);
    }
    Ok(env)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Parse {
            expr,
            json: as_json,
        } => {
            let t = term(&expr)?;
            if as_json {
                println!("{}", json(&t));
            } else {
                println!("{t}");
            }
        }
        Command::Classify { expr, meadow: m } => {
            let t = term(&expr)?;
            println!("{}", json(&classify(&t, &meadow(&m)?)));
        }
        Command::Eval {
            expr,
            meadow: m,
            bindings: defs,
        } => {
            let t = term(&expr)?;
            let meadow = meadow(&m)?;
            let env = bindings(&defs, &meadow)?;
            println!("{}", eval(&t, &meadow, &env)?);
        }
        Command::Normalize { expr, mode, trace } => {
            let nf = normalize(&term(&expr)?, mode)?;
            if trace {
                println!("{}", json(&nf));
            } else {
                println!("{nf}");
                println!("conditions: {}", json(&nf.conditions));
            }
        }
        Command::Equal {
            left,
            right,
            relation,
            meadow: m,
            mode,
        } => {
            let (s, t) = (term(&left)?, term(&right)?);
            let meadow = meadow(&m)?;
            if let Some(mode) = mode {
                let eq = check_equal(&s, &t, mode)?;
                println!("{}", eq.equal);
                println!("{} vs {}", eq.left, eq.right);
                println!("conditions: {}", json(&eq.conditions));
            } else {
                let equal = match relation.unwrap_or(Relation::Val) {
                    Relation::Syn => eq_syn(&s, &t),
                    Relation::Pair => eq_pair(&s, &t, &meadow)?,
                    Relation::Val => eq_val(&s, &t, &meadow)?,
                };
                println!("{equal}");
            }
        }
        Command::Fracpair {
            op,
            a,
            b,
            zero_mode,
        } => {
            let x = pair(&a)?;
            let zero_mode = match zero_mode {
                ZeroModeArg::Sum => ZeroMode::SumNumerators,
                ZeroModeArg::Collapse => ZeroMode::Collapse,
            };
            let unary = matches!(op, PairOp::Neg | PairOp::Value);
            let y = match (&b, unary) {
                (Some(b), false) => Some(pair(b)?),
                (None, true) => None,
                (Some(_), true) => return Err(Failure::domain("operation takes one operand")),
                (None, false) => return Err(Failure::domain("operation takes two operands")),
            };
            let y = || y.clone().expect("checked above");
            match op {
                PairOp::Add => println!("{}", x.sum(&y(), zero_mode)),
                PairOp::Mul => println!("{}", x.product(&y())),
                PairOp::Div => println!("{}", x.quotient(&y())),
                PairOp::Neg => println!("{}", x.negated()),
                PairOp::Eq => println!("{}", x == y()),
                PairOp::Equiv => println!("{}", x.is_equivalent(&y())),
                PairOp::Value => println!("{}", MeadowValue::Rational(x.value())),
            }
        }
        Command::Axioms {
            meadow: m,
            axiom,
            json: as_json,
        } => {
            let meadow = meadow(&m)?;
            let mut axioms = standard_axioms();
            if let Some(name) = &axiom {
                axioms.retain(|a| a.name.eq_ignore_ascii_case(name));
                if axioms.is_empty() {
                    return Err(Failure::Domain(format!("unknown axiom {name:?}")));
                }
            }
            let mut missed = false;
            for ax in &axioms {
                let report = check_identity(&ax.identity, &meadow)?;
                let expected = match ax.expect {
                    Expectation::Valid => report.is_valid(),
                    Expectation::Counterexample => !report.is_valid(),
                };
                missed |= !expected;
                if as_json {
                    println!(
                        "{}",
                        json(&serde_json::json!({
                            "axiom": ax.name,
                            "report": report,
                            "expected": ax.expect,
                        }))
                    );
                } else {
                    let mut line = format!(
                        "{:<8} {:<14} {:>7} assignments",
                        ax.name,
                        if report.is_valid() {
                            "valid"
                        } else {
                            "counterexample"
                        },
                        report.assignments_checked
                    );
                    if let Some(ce) = &report.counterexample {
                        let shown: Vec<String> =
                            ce.iter().map(|(k, v)| format!("{k}={v}")).collect();
                        line.push_str(&format!("  {}", shown.join(" ")));
                    }
                    if !expected {
                        line.push_str("  UNEXPECTED");
                    }
                    println!("{line}");
                }
            }
            if missed {
                return Err(Failure::Check);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Parse(src, e)) => {
            eprintln!("parse error: {e}");
            eprintln!("  {src}");
            eprintln!(
                "  {}^",
                " ".repeat(src[..e.offset.min(src.len())].chars().count())
            );
            ExitCode::from(2)
        }
        Err(Failure::Unsafe(e)) => {
            eprintln!("safety error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
        Err(Failure::Check) => ExitCode::from(1),
    }
}
