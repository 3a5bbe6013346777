use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use toric_implicit::surface_io::{parse_input, run, Method, Report, RunOptions};
use toric_implicit::Error;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Chow,
    Mq,
    Auto,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Chow => Method::Chow,
            MethodArg::Mq => Method::Mq,
            MethodArg::Auto => Method::Auto,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

/// Compute the implicit equation of a surface given by four polynomials
/// in s and t.
#[derive(Debug, Parser)]
#[command(name = "toric-implicit", version)]
struct Args {
    /// Input file with lines `x1 = ...` to `x4 = ...`; standard input if absent
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Implicitization method (overrides a `method =` line in the input)
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Edge indices of the pushed-in chain for moving surfaces
    #[arg(long, value_delimiter = ',')]
    edges: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for the randomized rank and minor selection
    #[arg(long)]
    seed: Option<u64>,
    /// Check vanishing on the parameterization and the degree formula
    #[arg(long)]
    verify: bool,
    /// Include diagnostics in the output
    #[arg(long)]
    diagnostics: bool,
    /// Print polynomials homogenized with X4
    #[arg(long)]
    projective: bool,
}

const EXIT_FAILURE: u8 = 1;
const EXIT_VERIFICATION: u8 = 2;
const EXIT_INPUT: u8 = 3;

fn read_source(path: Option<&PathBuf>) -> std::io::Result<String> {
    match path {
        Some(p) => fs::read_to_string(p),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let text = match read_source(args.input.as_ref()) {
        Ok(t) => t,
        Err(e) => {
            let name = args.input.as_ref().map_or("<stdin>".into(), |p| p.display().to_string());
            eprintln!("error: cannot read {name}: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let input = match parse_input(&text) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let surface = match input.surface() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let opts = RunOptions {
        method: args.method.map(Method::from).or(input.method).unwrap_or_default(),
        edges: args.edges.or(input.edges),
        seed: args.seed.or(input.seed).unwrap_or(0),
        verify: args.verify,
    };
    let outcome = match run(&surface, &opts) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(match e {
                Error::VerificationFailed(_) => EXIT_VERIFICATION,
                _ => EXIT_FAILURE,
            });
        }
    };
    let report = Report::new(&outcome, args.projective, args.diagnostics);
    match args.format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("report serializes")),
    }
    ExitCode::SUCCESS
}
