//! Command-line front end.

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::cg::{cg_table, column_content, monomial_states, CgRecord};
use crate::contragredient::lowest_weight_vector;
use crate::error::{Error, Result};
use crate::invariants::{invariant_basis, TensorProblem};
use crate::signature::Signature;
use crate::weyl;

/// A parsed `sig x sig x ... -> sig` expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expression {
    pub factors: Vec<Signature>,
    pub target: Option<Signature>,
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let sign = usize::from(rest.starts_with('-') || rest.starts_with('+'));
        let digits = rest[sign..].bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return self.error("expected an integer");
        }
        let Ok(v) = rest[..sign + digits].parse() else {
            return self.error("integer out of range");
        };
        self.pos += sign + digits;
        Ok(v)
    }

    fn signature(&mut self) -> Result<Signature> {
        if !self.eat("(") {
            return self.error("expected '('");
        }
        let mut raw = Vec::new();
        if !self.eat(")") {
            loop {
                raw.push(self.int()?);
                if self.eat(")") {
                    break;
                }
                if !self.eat(",") {
                    return self.error("expected ',' or ')'");
                }
            }
        }
        Signature::normalize(&raw)
    }
}

/// Parses `product := sig ("x" sig)* ("->" sig)?`, with `⊗` accepted for `x`.
pub fn parse_expression(text: &str) -> Result<Expression> {
    let mut lx = Lexer { text, pos: 0 };
    let mut factors = vec![lx.signature()?];
    while lx.eat("x") || lx.eat("⊗") {
        factors.push(lx.signature()?);
    }
    let target = if lx.eat("->") { Some(lx.signature()?) } else { None };
    if !lx.at_end() {
        return lx.error("unexpected trailing input");
    }
    Ok(Expression { factors, target })
}

#[derive(Parser, Debug)]
#[command(name = "tensorinv", about = "Tensor products of U(k) representations and their invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Expression such as "(1)x(2)x(2)x(3) -> (7,1)"
    expression: String,
    /// Rank override
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    json: bool,
    /// Print expanded polynomials
    #[arg(long)]
    show_polynomials: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectrum of a tensor product
    Decompose(Common),
    /// Multiplicity of the target in the product
    Multiplicity(Common),
    /// Covariant invariant basis for the target
    Invariants(Common),
    /// CG table against the lowest weight vector of the target
    Cgc(Common),
    /// Rank from which the spectrum is stable
    Stabilize(Common),
}

/// JSON form of an invariant basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsReport {
    pub dimension: usize,
    pub monomials: Vec<String>,
    pub basis: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomials: Option<Vec<String>>,
}

/// Result of a CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Exit code for a library error: 2 for bad input, 3 for failed
/// self-checks, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Syntax { .. }
        | Error::NotDominant(_)
        | Error::MixedSigns(_)
        | Error::NotPolynomial(_)
        | Error::EmptyProduct
        | Error::RankTooSmall { .. }
        | Error::TooShort { .. } => 2,
        Error::DimensionCheck { .. } | Error::NegativeMultiplicity { .. } | Error::SpanViolation => 3,
        _ => 1,
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr };
        }
    };
    match execute(cli.command) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(Usage(msg)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Lib(e)) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

enum Failure {
    Usage(String),
    Lib(Error),
}
use Failure::{Lib, Usage};

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Lib(e)
    }
}

fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("plain data serializes") + "\n"
}

fn with_target(expr: &Expression) -> std::result::Result<&Signature, Failure> {
    expr.target.as_ref().ok_or_else(|| Usage("this command needs a target: \"... -> (m)\"".into()))
}

fn without_target(expr: &Expression) -> std::result::Result<(), Failure> {
    match expr.target {
        Some(_) => Err(Usage("this command takes a product without a target".into())),
        None => Ok(()),
    }
}

fn execute(command: Command) -> std::result::Result<String, Failure> {
    match command {
        Command::Decompose(c) => {
            let expr = parse_expression(&c.expression)?;
            without_target(&expr)?;
            let k = c.k.unwrap_or_else(|| weyl::stability_bound(&expr.factors));
            let spectrum = weyl::tensor_decompose(&expr.factors, k)?;
            if c.json {
                Ok(to_json(&spectrum))
            } else {
                Ok(format!("k = {k}\n{}\n", spectrum.display_padded(k)))
            }
        }
        Command::Multiplicity(c) => {
            let expr = parse_expression(&c.expression)?;
            let target = with_target(&expr)?;
            let m = match c.k {
                Some(k) => weyl::tensor_decompose(&expr.factors, k)?.multiplicity(target),
                None => weyl::multiplicity(&expr.factors, target)? as i64,
            };
            Ok(if c.json { to_json(&m) } else { format!("{m}\n") })
        }
        Command::Stabilize(c) => {
            let expr = parse_expression(&c.expression)?;
            without_target(&expr)?;
            let s = weyl::stabilization_index(&expr.factors)?;
            Ok(if c.json { to_json(&s) } else { format!("{s}\n") })
        }
        Command::Invariants(c) => {
            let expr = parse_expression(&c.expression)?;
            let target = with_target(&expr)?.clone();
            let problem = TensorProblem::new(expr.factors, target, c.k)?;
            let basis = invariant_basis(&problem)?;
            let polynomials = c
                .show_polynomials
                .then(|| basis.expand(problem.k() as u32).iter().map(ToString::to_string).collect::<Vec<_>>());
            if c.json {
                let report = InvariantsReport {
                    dimension: basis.dimension(),
                    monomials: basis.monomials.iter().map(ToString::to_string).collect(),
                    basis: basis.coefficients.iter().map(|v| v.iter().map(ToString::to_string).collect()).collect(),
                    polynomials,
                };
                return Ok(to_json(&report));
            }
            let mut out = format!("dimension {}\n", basis.dimension());
            for (i, m) in basis.monomials.iter().enumerate() {
                out += &format!("M{} = {m}\n", i + 1);
            }
            for (i, e) in basis.elements.iter().enumerate() {
                out += &format!("I{} = {e}\n", i + 1);
            }
            for (i, p) in polynomials.iter().flatten().enumerate() {
                out += &format!("I{} (k = {}) = {p}\n", i + 1, problem.k());
            }
            Ok(out)
        }
        Command::Cgc(c) => {
            let expr = parse_expression(&c.expression)?;
            let target = with_target(&expr)?.clone();
            let problem = TensorProblem::new(expr.factors, target.clone(), c.k)?;
            let basis = invariant_basis(&problem)?;
            let f_star = lowest_weight_vector(&target, target.len())?;
            let cols = column_content(std::slice::from_ref(&f_star)).len().max(1) as u32;
            let states = monomial_states(&problem, cols);
            let table: Vec<CgRecord> = cg_table(&problem, &basis.elements, &states, &f_star)?;
            if c.json {
                return Ok(to_json(&table));
            }
            let mut out = format!("f* = {f_star}\n");
            for r in &table {
                out += &format!("I{}\t{}\t{}\n", r.invariant, r.state.join(" "), r.value);
            }
            Ok(out)
        }
    }
}
