use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use r2pencil::config::{explicit_config_json, Backend, Mode, Preset};
use r2pencil::report::{emit_report, read_json, Format};
use r2pencil::{gen_instance, load_config, run_suites, RunConfig, SuiteSelection};

/// Verification harness for orthogonal rational functions of R_II type.
#[derive(Parser)]
#[command(name = "r2pencil", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance and write it as an explicit-mode config.
    Gen {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites and emit a report.
    Verify {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteSelection,
        /// float, exact or both; overrides R2PENCIL_BACKEND and the config.
        #[arg(long)]
        backend: Option<String>,
        /// Depth cap for the exact backend.
        #[arg(long)]
        exact_max_n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Convert a saved JSON report.
    Report {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

#[derive(Args)]
struct InstanceArgs {
    /// JSON config file; flags override its fields.
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    /// s1 or s2.
    #[arg(long)]
    preset: Option<String>,
    /// Unimodular beta with a single alpha (random mode).
    #[arg(long)]
    unimodular: bool,
}

/// Failure that prevents producing a report.
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

fn resolve(args: &InstanceArgs) -> Result<RunConfig, Fatal> {
    let mut cfg = match &args.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    cfg.apply_env()?;
    if let Some(p) = &args.preset {
        cfg.mode = Mode::Preset;
        cfg.preset = Some(Preset::parse(p)?);
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if args.n.is_some() {
        cfg.n = args.n;
    }
    if args.unimodular {
        cfg.unimodular = true;
    }
    r2pencil::config::validate(&cfg)?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<ExitCode, Fatal> {
    match cli.command {
        Command::Gen { instance, out } => {
            let cfg = resolve(&instance)?;
            let inst = gen_instance(&cfg)?;
            let mut text = serde_json::to_string_pretty(&explicit_config_json(&inst.params, inst.n))?;
            text.push('\n');
            match out {
                Some(p) => std::fs::write(p, text)?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            instance,
            suite,
            backend,
            exact_max_n,
            out,
            format,
        } => {
            let mut cfg = resolve(&instance)?;
            cfg.suite = suite;
            if let Some(b) = backend {
                cfg.backend = Backend::parse(&b)?;
            }
            if let Some(n) = exact_max_n {
                cfg.exact_max_n = n;
            }
            let report = run_suites(&cfg)?;
            emit_report(&report, format, out.as_deref())?;
            for e in report.failures() {
                eprintln!(
                    "FAIL {} {} {} n={:?} m={:?} residual={:?} tol={:e}{}",
                    e.suite,
                    e.instance,
                    e.backend,
                    e.n,
                    e.m,
                    e.residual,
                    e.tolerance,
                    e.error.as_ref().map(|m| format!(" ({m})")).unwrap_or_default()
                );
            }
            Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Report { input, out, format } => {
            let report = read_json(&std::fs::read_to_string(input)?)?;
            emit_report(&report, format, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Fatal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
