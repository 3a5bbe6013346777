//! Input files, method selection and the machine-readable report.
//!
//! An input file has one line `x<k> = <expr>` per component, `k` in 1..4.
//! Optional lines `method = ...`, `edges = i,j,...` and `seed = N` set
//! defaults for the run. `#` starts a comment.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::chowform::{cross_gcd, implicitize_chow, Diagnostics, ImplicitResult};
use crate::error::{Error, Result};
use crate::exact_algebra::{parse_polynomial_in, ParseFailure, Polynomial, Var};
use crate::lattice_geometry::degree_formula_check;
use crate::moving_surfaces::implicitize_mq_with;
use crate::oracle::verify_vanishing;
use crate::surface::Surface;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Chow,
    Mq,
    #[default]
    Auto,
    Both,
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Method, String> {
        match s {
            "chow" => Ok(Method::Chow),
            "mq" => Ok(Method::Mq),
            "auto" => Ok(Method::Auto),
            "both" => Ok(Method::Both),
            _ => Err(format!("unknown method `{s}` (expected chow, mq, auto or both)")),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Chow => "chow",
            Method::Mq => "mq",
            Method::Auto => "auto",
            Method::Both => "both",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InputError {
    #[error("line {line}, column {col}: expected {expected}")]
    Parse {
        line: usize,
        col: usize,
        expected: String,
    },
    #[error("line {line}, column {col}: `{name}` is not a parameter (only s and t are allowed)")]
    WrongVariable { line: usize, col: usize, name: String },
    #[error("component x{0} is missing")]
    MissingComponent(usize),
    #[error("line {line}: component x{k} is given twice")]
    DuplicateComponent { line: usize, k: usize },
    #[error("invalid surface: {0}")]
    Surface(String),
}

#[derive(Clone, Debug)]
pub struct SurfaceInput {
    pub x: [Polynomial; 4],
    pub method: Option<Method>,
    pub edges: Option<Vec<usize>>,
    pub seed: Option<u64>,
}

impl SurfaceInput {
    pub fn surface(&self) -> std::result::Result<Surface, InputError> {
        Surface::new(self.x.clone()).map_err(|e| InputError::Surface(e.to_string()))
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn parse_error(line: usize, col: usize, expected: &str) -> InputError {
    InputError::Parse {
        line,
        col,
        expected: expected.to_string(),
    }
}

pub fn parse_input(text: &str) -> std::result::Result<SurfaceInput, InputError> {
    let mut x: [Option<Polynomial>; 4] = Default::default();
    let mut input = SurfaceInput {
        x: std::array::from_fn(|_| Polynomial::zero()),
        method: None,
        edges: None,
        seed: None,
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            continue;
        }
        let Some(eq) = body.find('=') else {
            let col = body.len() - body.trim_start().len() + 1;
            return Err(parse_error(line, col, "`name = value`"));
        };
        let key = body[..eq].trim();
        let value_start = eq + 1;
        let value = &body[value_start..];
        let key_col = body.len() - body.trim_start().len() + 1;
        match key {
            "method" => {
                let m = value
                    .trim()
                    .parse()
                    .map_err(|_| parse_error(line, value_start + 1, "chow, mq, auto or both"))?;
                input.method = Some(m);
            }
            "seed" => {
                let s = value
                    .trim()
                    .parse()
                    .map_err(|_| parse_error(line, value_start + 1, "a nonnegative integer seed"))?;
                input.seed = Some(s);
            }
            "edges" => {
                let edges = value
                    .split(',')
                    .map(|e| e.trim().parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| parse_error(line, value_start + 1, "comma-separated edge indices"))?;
                input.edges = Some(edges);
            }
            _ => {
                let k = key
                    .strip_prefix('x')
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|k| (1..=4).contains(k))
                    .ok_or_else(|| parse_error(line, key_col, "x1, x2, x3, x4, method, edges or seed"))?;
                if x[k - 1].is_some() {
                    return Err(InputError::DuplicateComponent { line, k });
                }
                let p = parse_polynomial_in(value, &[Var::S, Var::T]).map_err(|e| match e {
                    ParseFailure::WrongVariable { col, name } => InputError::WrongVariable {
                        line,
                        col: value_start + col,
                        name,
                    },
                    ParseFailure::Expected { col, expected } => parse_error(line, value_start + col, expected),
                    ParseFailure::ZeroDenominator { col } => parse_error(line, value_start + col, "a nonzero denominator"),
                })?;
                x[k - 1] = Some(p);
            }
        }
    }
    for (k, p) in x.into_iter().enumerate() {
        input.x[k] = p.ok_or(InputError::MissingComponent(k + 1))?;
    }
    Ok(input)
}

/// Canonical input text for a parameterization.
pub fn print_input(x: &[Polynomial; 4]) -> String {
    x.iter()
        .enumerate()
        .map(|(k, p)| format!("x{} = {p}\n", k + 1))
        .collect()
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub method: Method,
    pub edges: Option<Vec<usize>>,
    pub seed: u64,
    pub verify: bool,
}

/// Result of a run, with the method that produced it.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub method: Method,
    pub result: ImplicitResult,
    pub verified: Option<bool>,
}

fn run_mq(surface: &Surface, opts: &RunOptions) -> Result<ImplicitResult> {
    implicitize_mq_with(surface, opts.edges.as_deref(), opts.seed)
}

pub fn run(surface: &Surface, opts: &RunOptions) -> Result<Outcome> {
    let result = match opts.method {
        Method::Chow => implicitize_chow(surface, opts.seed)?,
        Method::Mq => run_mq(surface, opts)?,
        Method::Auto => match implicitize_chow(surface, opts.seed) {
            Ok(chow) if chow.basepoint_degree == 0 => chow,
            Ok(chow) => match run_mq(surface, opts) {
                Ok(mq) => cross_gcd(&chow, &mq, surface, opts.seed).unwrap_or(chow),
                Err(_) => chow,
            },
            Err(_) => run_mq(surface, opts)?,
        },
        Method::Both => {
            let chow = implicitize_chow(surface, opts.seed)?;
            let mq = run_mq(surface, opts)?;
            cross_gcd(&chow, &mq, surface, opts.seed)?
        }
    };
    let verified = opts.verify.then(|| verify(surface, &result));
    if verified == Some(false) {
        return Err(Error::VerificationFailed(format!(
            "{} fails the vanishing or degree check",
            result.implicit
        )));
    }
    Ok(Outcome {
        method: opts.method,
        result,
        verified,
    })
}

/// Exact vanishing plus `deg_phi * deg P = 2A - e`, with `e` the corank
/// plus the degree of any extraneous factor.
pub fn verify(surface: &Surface, r: &ImplicitResult) -> bool {
    let extra = r.extraneous.as_ref().map_or(0, |e| e.total_degree().max(0) as i64);
    verify_vanishing(&r.implicit, surface.x(), 4)
        && degree_formula_check(
            surface.polygon(),
            i64::from(r.degree()),
            i64::from(r.exponent_d),
            r.basepoint_degree as i64 + extra,
        )
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub implicit: String,
    pub degree: i32,
    pub deg_phi: u32,
    pub method: Method,
    pub basepoint_degree: usize,
    pub extraneous: Option<String>,
    pub diagnostics: Option<Diagnostics>,
}

impl Report {
    pub fn new(outcome: &Outcome, projective: bool, diagnostics: bool) -> Report {
        let r = &outcome.result;
        let show = |p: &Polynomial| {
            if projective {
                p.homogenize_x4().to_string()
            } else {
                p.to_string()
            }
        };
        Report {
            implicit: show(&r.implicit),
            degree: r.degree(),
            deg_phi: r.exponent_d,
            method: outcome.method,
            basepoint_degree: r.basepoint_degree,
            extraneous: r.extraneous.as_ref().map(show),
            diagnostics: diagnostics.then(|| r.diagnostics.clone()),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.implicit);
        if let Some(d) = &self.diagnostics {
            out += &format!(
                "# method {}, degree {}, deg_phi {}, basepoint_degree {}\n",
                self.method, self.degree, self.deg_phi, self.basepoint_degree
            );
            if let Some(e) = &self.extraneous {
                out += &format!("# extraneous factor: {e}\n");
            }
            out += &format!("# {}\n", serde_json::to_string(d).expect("diagnostics serialize"));
        }
        out
    }
}
