//! `shintani-kit`: config-driven runs of cone zeta values, Hill's cocycle,
//! p-adic measures and p-adic L-functions of real quadratic fields.

mod commands;
mod config;
mod output;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Failure;
use config::{ConfigError, Loaded, Overrides, Preset};

#[derive(Parser, Debug)]
#[command(name = "shintani-kit", version, about = "Shintani cone zeta values and p-adic L-functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact special values at s = −k.
    Zeta(RunArgs),
    /// Hill's perturbed-cone cocycle on a tuple of matrices.
    Hill(RunArgs),
    /// Pseudo-measure of a cone: measure criterion, Amice coefficients, moments.
    Measure(RunArgs),
    /// p-adic partial zeta values of a real quadratic field.
    PadicZeta(RunArgs),
    /// The smoothed Kubota–Leopoldt measure.
    KubotaLeopoldt(RunArgs),
    /// Run the invariant suites.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the JSON record here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
    /// Comma-separated list of k.
    #[arg(short = 'k', value_delimiter = ',')]
    k: Option<Vec<u32>>,
    #[arg(long)]
    p: Option<u64>,
    /// p-adic precision M.
    #[arg(long)]
    prec: Option<u32>,
    /// Comma-separated series caps.
    #[arg(long, value_delimiter = ',')]
    caps: Option<Vec<u32>>,
    /// Mahler cutoff for evaluation at s.
    #[arg(long)]
    cutoff: Option<u32>,
    /// Smoothing prime.
    #[arg(long)]
    ell: Option<u64>,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    #[arg(long, conflicts_with = "full")]
    quick: bool,
    #[arg(long)]
    full: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Corrupt the reference Bernoulli table; the run must report a failure.
    #[arg(long, hide = true)]
    tamper_bernoulli: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PresetArg {
    Riemann,
    Hurwitz,
    RqField,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Riemann => Preset::Riemann,
            PresetArg::Hurwitz => Preset::Hurwitz,
            PresetArg::RqField => Preset::RqField,
        }
    }
}

const EXIT_RUNTIME: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_CONTRACT: u8 = 3;

fn load(args: &RunArgs) -> Result<Loaded, (ConfigError, Option<PathBuf>)> {
    let mut loaded = match &args.config {
        Some(path) => {
            let src = std::fs::read_to_string(path)
                .map_err(|e| (ConfigError::new(format!("cannot read {}: {e}", path.display())), None))?;
            Loaded::parse(&src).map_err(|e| (e, Some(path.clone())))?
        }
        None => Loaded::default(),
    };
    loaded.apply(&Overrides {
        preset: args.preset.map(Preset::from),
        k: args.k.clone(),
        p: args.p,
        prec: args.prec,
        caps: args.caps.clone(),
        cutoff: args.cutoff,
        ell: args.ell,
    });
    Ok(loaded)
}

fn report_config(e: &ConfigError, path: Option<&PathBuf>) -> ExitCode {
    eprintln!("error: {}", e.message);
    match (path, e.line) {
        (Some(p), Some(l)) => eprintln!("  --> {}:{l}", p.display()),
        (None, Some(l)) => eprintln!("  --> line {l}"),
        _ => {}
    }
    ExitCode::from(EXIT_CONFIG)
}

fn emit(json: &serde_json::Value, out: Option<&PathBuf>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(json).map_err(|e| e.to_string())? + "\n";
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish(rec: &output::Record, start: Instant, out: Option<&PathBuf>) -> ExitCode {
    if let Err(e) = emit(&rec.to_json(start.elapsed().as_millis()), out) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_RUNTIME);
    }
    if rec.ok {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: contract violation in {}", rec.task);
        ExitCode::from(EXIT_CONTRACT)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (args, run): (&RunArgs, fn(&Loaded) -> commands::CmdResult) = match &cli.command {
        Command::Zeta(a) => (a, commands::zeta),
        Command::Hill(a) => (a, commands::hill),
        Command::Measure(a) => (a, commands::measure),
        Command::PadicZeta(a) => (a, commands::padic_zeta),
        Command::KubotaLeopoldt(a) => (a, commands::kubota_leopoldt_cmd),
        Command::Selftest(s) => {
            let level = if s.full { selftest::Level::Full } else { selftest::Level::Quick };
            let rec = selftest::run(level, s.tamper_bernoulli);
            return finish(&rec, start, s.out.as_ref());
        }
    };
    let loaded = match load(args) {
        Ok(l) => l,
        Err((e, path)) => return report_config(&e, path.as_ref()),
    };
    match run(&loaded) {
        Ok(rec) => finish(&rec, start, args.out.as_ref()),
        Err(Failure::Config(e)) => report_config(&e, args.config.as_ref()),
        Err(Failure::Contract(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_CONTRACT)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
