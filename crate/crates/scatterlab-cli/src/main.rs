mod cache;
mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use scatterlab::Error;

#[derive(Parser, Debug)]
#[command(name = "scatterlab", version, about = "Scatteredness experiments for linearized binomials")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Exhaustive, curve and classification verdicts for one binomial.
    Check(CheckArgs),
    /// Every binomial of a family over one field.
    Scan(ScanArgs),
    /// Equivalence classes of scattered x^q + δx^{q^4} over F_{q^6}.
    Classes(ClassesArgs),
    /// Point certificates and the closed-form tests built on them.
    Cert(CertArgs),
    /// Lang–Weil type lower bound.
    Bound(BoundArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FieldArgs {
    /// Characteristic.
    #[arg(long = "p")]
    pub p: Option<u64>,
    /// q = p^e.
    #[arg(long = "e", default_value_t = 1)]
    pub e: u32,
    /// Alternative to -p/-e.
    #[arg(long = "q")]
    pub q: Option<u64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    #[arg(long = "format", value_enum, default_value_t = Format::Jsonl)]
    pub format: Format,
    /// Worker threads; defaults to the number of cores.
    #[arg(long = "jobs")]
    #[serde(skip)]
    pub jobs: Option<usize>,
    /// Cache directory. SCATTERLAB_CACHE is used when the flag is absent.
    #[arg(long = "cache")]
    #[serde(skip)]
    pub cache: Option<PathBuf>,
    /// Largest field size accepted by exhaustive scans.
    #[arg(long = "cap")]
    pub cap: Option<u64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Jsonl,
    Csv,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CheckArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long = "n")]
    pub n: u32,
    #[arg(long = "I")]
    pub i: u32,
    #[arg(long = "J")]
    pub j: u32,
    /// Digit string, `g` or `g^k`.
    #[arg(long = "alpha")]
    pub alpha: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Lp,
    Cmpz,
    AllBinomials,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ScanArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long = "n")]
    pub n: u32,
    #[arg(long = "family", value_enum)]
    pub family: Family,
    /// Restrict to this I.
    #[arg(long = "I")]
    pub i: Option<u32>,
    /// Restrict to this J.
    #[arg(long = "J")]
    pub j: Option<u32>,
    /// `all` or a comma-separated list of elements.
    #[arg(long = "alpha", default_value = "all")]
    pub alpha: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ClassesArgs {
    #[arg(long = "q")]
    pub q: u64,
    /// Also run the exhaustive test on every δ.
    #[arg(long = "crosscheck")]
    pub crosscheck: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertKind {
    #[value(name = "gcd1")]
    #[serde(rename = "gcd1")]
    Gcd1,
    #[value(name = "n6gcd2")]
    #[serde(rename = "n6gcd2")]
    N6Gcd2,
    #[value(name = "n8gcd2")]
    #[serde(rename = "n8gcd2")]
    N8Gcd2,
    #[value(name = "n8gcd4")]
    #[serde(rename = "n8gcd4")]
    N8Gcd4,
    #[value(name = "n6gcd3")]
    #[serde(rename = "n6gcd3")]
    N6Gcd3,
    #[value(name = "n8gcd4-classification")]
    #[serde(rename = "n8gcd4-classification")]
    N8Gcd4Classification,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CertArgs {
    #[arg(value_enum)]
    pub case: CertKind,
    #[command(flatten)]
    pub field: FieldArgs,
    /// Extension degree (gcd1 only; fixed by the case otherwise).
    #[arg(long = "n")]
    pub n: Option<u32>,
    #[arg(long = "I")]
    pub i: Option<u32>,
    #[arg(long = "J")]
    pub j: Option<u32>,
    /// Coefficient A of P (gcd1).
    #[arg(long = "A")]
    pub a: Option<String>,
    /// β, or `all` for every admissible value in its subfield.
    #[arg(long = "beta", default_value = "all")]
    pub beta: String,
    /// Generator powers tried per coordinate by the n8gcd2 point search.
    #[arg(long = "sweep", default_value_t = 12)]
    pub sweep: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BoundArgs {
    #[arg(long = "ndim")]
    pub ndim: u32,
    #[arg(long = "degree")]
    pub degree: u64,
    #[arg(long = "q")]
    pub q: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Usage(String),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::ScanCapExceeded { .. } | Error::DegreeOverflow { .. }) => 3,
            CliError::Io(_) => 1,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(s) => write!(f, "{s}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

/// `-alpha` and `-p` become `--alpha` and `--p`; negative numbers are left alone.
fn long_flags(args: impl Iterator<Item = String>) -> Vec<String> {
    args.map(|a| {
        let b = a.as_bytes();
        if b.len() >= 2 && b[0] == b'-' && b[1] != b'-' && b[1].is_ascii_alphabetic() {
            format!("-{a}")
        } else {
            a
        }
    })
    .collect()
}

fn main() -> ExitCode {
    let argv = long_flags(std::env::args());
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let raw: Vec<String> = std::env::args().skip(1).collect();
    let res = match cli.cmd {
        Cmd::Check(a) => commands::check(a, raw),
        Cmd::Scan(a) => commands::scan(a, raw),
        Cmd::Classes(a) => commands::classes(a, raw),
        Cmd::Cert(a) => commands::cert(a, raw),
        Cmd::Bound(a) => commands::bound(a, raw),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
