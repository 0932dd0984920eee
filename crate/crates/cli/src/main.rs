use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hecke_padic::commands::{self, Overrides};
use hecke_padic::config::RunConfig;
use hecke_padic::report::{envelope, write_atomic};

#[derive(Parser, Debug)]
#[command(name = "hecke-padic", version, about = "p-adic Fourier theory and critical Hecke L-values of imaginary quadratic fields")]
struct Cli {
    /// TOML run configuration (the shipped default when omitted).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// p-adic working precision N (digits).
    #[arg(long, global = true)]
    precision_padic: Option<i64>,
    /// Complex working precision in bits.
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    /// Tolerance for the interpolation comparison.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Directory for JSON reports.
    #[arg(long, global = true, default_value = "reports")]
    out: PathBuf,
    /// Allow weights 1 and 2 through the continued (uncertified) series.
    #[arg(long, global = true)]
    experimental_low_weight: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Finite Fourier transform checks and a worked example.
    Fourier,
    /// W-analyticity of the configured character points.
    Charvar,
    /// One Kronecker–Eisenstein value with its row-sum cross-check.
    Eisenstein,
    /// Partial and full L-values of the configured characters.
    Lvalue,
    /// Local(χ, Σ), the Euler factor at p and the smoothing factor.
    LocalFactor,
    /// Both sides of the interpolation formula for every character.
    VerifyInterpolation,
    /// Measure tables, refinement and the Kummer congruence.
    Congruence,
    /// The full acceptance suite.
    Selftest,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Fourier => "fourier",
            Command::Charvar => "charvar",
            Command::Eisenstein => "eisenstein",
            Command::Lvalue => "lvalue",
            Command::LocalFactor => "local-factor",
            Command::VerifyInterpolation => "verify-interpolation",
            Command::Congruence => "congruence",
            Command::Selftest => "selftest",
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    let ov = Overrides {
        precision_padic: cli.precision_padic,
        precision_bits: cli.precision_bits,
        tol: cli.tol,
        experimental_low_weight: cli.experimental_low_weight,
    };
    ov.apply(&mut cfg);
    // validation happens before any computation
    let resolved = cfg.resolve()?;
    let outcome = match cli.command {
        Command::Fourier => commands::fourier(&cfg)?,
        Command::Charvar => commands::charvar(&cfg, &resolved)?,
        Command::Eisenstein => commands::eisenstein(&cfg, &resolved, &ov)?,
        Command::Lvalue => commands::lvalue(&cfg, &resolved, &ov)?,
        Command::LocalFactor => commands::local_factors(&resolved)?,
        Command::VerifyInterpolation => commands::verify_interpolation(&cfg, &resolved, &ov)?,
        Command::Congruence => commands::congruence(&cfg, &resolved, &ov)?,
        Command::Selftest => commands::selftest(&cfg)?,
    };
    let name = cli.command.name();
    let doc = envelope(name, &serde_json::to_value(&cfg)?, outcome.pass, outcome.results);
    let path = write_atomic(&cli.out, &format!("{name}.json"), &doc)?;
    println!("{name}: {} ({})", if outcome.pass { "pass" } else { "FAIL" }, path.display());
    Ok(outcome.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let diag = serde_json::json!({ "error": format!("{e:#}"), "command": cli.command.name() });
            eprintln!("{}", serde_json::to_string_pretty(&diag).unwrap_or_else(|_| format!("{e:#}")));
            ExitCode::from(2)
        }
    }
}
