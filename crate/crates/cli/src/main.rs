use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use northcott_cli::commands::{
    render_json, render_table, run_command, Command, Options, EXIT_PARSE,
};
use northcott_cli::parser::parse_problem_with_char;
use northcott_core::hilbert::FitPolicy;
use northcott_core::length::TruncationPolicy;
use northcott_core::northcott::HypothesisFlags;
use northcott_core::omega::ColonReading;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Colon {
    X1,
    Xnext,
}

/// Generalized Hilbert coefficients, j-multiplicity, reduction numbers and
/// Northcott-type bounds for an ideal I of R = F_p[vars]/Q.
///
/// All lengths are taken in R localized at the origin m = (vars): components
/// of an ideal away from the origin do not contribute.
///
/// Input (from FILE or stdin):
///
///   ring char=32003 vars=x,y
///   mod x^3-x^2*y        # optional relations defining Q
///   ideal x*y^2
///
/// Exit codes: 0 ok, 2 parse error, 3 hypothesis surrogate failure (results
/// still printed), 4 non-stabilization or computation cap, 5 cross-check
/// violation.
#[derive(Debug, Parser)]
#[command(name = "northcott", version, verbatim_doc_comment)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Problem file; `-` or absent reads stdin.
    file: Option<PathBuf>,
    /// Seed for the general elements.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Characteristic overriding the ring line.
    #[arg(long = "char")]
    characteristic: Option<u64>,
    /// Largest n for omega terms and the Valabrega-Valla check (default r + d + 2).
    #[arg(long)]
    nmax: Option<usize>,
    /// Largest truncation degree M when stabilizing lengths.
    #[arg(long)]
    cap_m: Option<u32>,
    /// Consecutive equal values required for a length to count as stable.
    #[arg(long)]
    window: Option<u32>,
    /// Vouch for the G_d condition.
    #[arg(long)]
    assert_gd: bool,
    /// Vouch for the Artin-Nagata property AN^-_{d-2}.
    #[arg(long)]
    assert_an: bool,
    /// Vouch for weak (d-2)-residual S_2.
    #[arg(long)]
    assert_s2: bool,
    /// Colon element in the Ktilde terms: x_1 as printed, or x_{i+1}.
    #[arg(long, value_enum, default_value = "x1")]
    omega_colon: Colon,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Add the monomial oracle's values (monomial inputs only).
    #[arg(long)]
    oracle: bool,
}

fn read_input(file: &Option<PathBuf>) -> std::io::Result<String> {
    match file {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match read_input(&cli.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("northcott: cannot read input: {e}");
            return ExitCode::from(EXIT_PARSE);
        }
    };
    let problem = match parse_problem_with_char(&text, cli.characteristic) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("northcott: {e}");
            return ExitCode::from(EXIT_PARSE);
        }
    };
    let mut truncation = TruncationPolicy::default();
    if let Some(c) = cli.cap_m {
        truncation.cap_m = c;
    }
    if let Some(w) = cli.window {
        truncation.window = w;
    }
    let opts = Options {
        seed: cli.seed,
        nmax: cli.nmax,
        truncation,
        fit: FitPolicy::default(),
        flags: HypothesisFlags {
            gd_asserted: cli.assert_gd,
            an_asserted: cli.assert_an,
            s2_asserted: cli.assert_s2,
        },
        reading: match cli.omega_colon {
            Colon::X1 => ColonReading::X1,
            Colon::Xnext => ColonReading::XNext,
        },
        oracle: cli.oracle,
    };
    let outcome = run_command(cli.command, &problem, &opts);
    match cli.format {
        Format::Json => print!("{}", render_json(&outcome.report)),
        Format::Table => print!("{}", render_table(&outcome.report)),
    }
    ExitCode::from(outcome.exit)
}
