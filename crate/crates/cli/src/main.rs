//! roughlab: experiment specs in, CSV/JSON tables out.
//!
//! Exit codes: 0 success (a diagnosed divergence is a result, not a
//! failure), 2 spec validation error, 3 size-limit refusal, 1 anything
//! else.

mod run;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spec::{CommandKind, ExperimentSpec, SizeLimit};

#[derive(Parser)]
#[command(
    name = "roughlab",
    about = "p-variation, Lévy area, and refinement-convergence experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment spec (JSON)
    #[arg(long)]
    spec: PathBuf,
    /// Output directory (overrides the spec)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tolerance override for integrate / probe
    #[arg(long)]
    tol: Option<f64>,
    /// Reserved for stochastic inputs; accepted for interface stability
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// p-variation of a path: value plus an optimal partition
    Pvar(RunArgs),
    /// Lévy area table over an (s, t) window grid
    Area(RunArgs),
    /// Riemann-Stieltjes integration with refinement diagnosis
    Integrate(RunArgs),
    /// Closed-form dyadic bracket-sum table of a block series
    Lacunary(RunArgs),
    /// Enhancibility / boundedness probe, JSON report
    Probe(RunArgs),
    /// Envelope-constant table over an (a, p) grid
    Constants(RunArgs),
}

impl Command {
    fn kind(&self) -> CommandKind {
        match self {
            Command::Pvar(_) => CommandKind::Pvar,
            Command::Area(_) => CommandKind::Area,
            Command::Integrate(_) => CommandKind::Integrate,
            Command::Lacunary(_) => CommandKind::Lacunary,
            Command::Probe(_) => CommandKind::Probe,
            Command::Constants(_) => CommandKind::Constants,
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::Pvar(a)
            | Command::Area(a)
            | Command::Integrate(a)
            | Command::Lacunary(a)
            | Command::Probe(a)
            | Command::Constants(a) => a,
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<SizeLimit>().is_some() {
            return 3;
        }
        if let Some(core) = cause.downcast_ref::<roughlab_core::Error>() {
            return match core {
                roughlab_core::Error::SizeLimit { .. }
                | roughlab_core::Error::BlocksInfeasible { .. } => 3,
                roughlab_core::Error::Io(_) => 1,
                roughlab_core::Error::Inconsistency(_) => 1,
                _ => 2,
            };
        }
        if cause.downcast_ref::<serde_json::Error>().is_some() {
            return 2;
        }
    }
    // spec-shape problems raised as plain messages are validation failures
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args = cli.command.args();
    match run_command(&cli.command, args) {
        Ok(artifacts) => {
            for a in artifacts {
                println!("{}", a.display());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn run_command(command: &Command, args: &RunArgs) -> anyhow::Result<Vec<PathBuf>> {
    let spec = ExperimentSpec::load(&args.spec)?;
    if spec.command != command.kind() {
        anyhow::bail!(
            "spec declares command `{}` but `{}` was invoked",
            spec.command.name(),
            command.kind().name()
        );
    }
    let spec_dir = args
        .spec
        .parent()
        .map(|p| p.to_path_buf())
        .unwrap_or_else(|| PathBuf::from("."));
    let out_dir = run::resolve_out_dir(&spec, args.out.as_deref(), &spec_dir);
    let ctx = run::RunContext {
        spec_dir,
        out_dir,
        tol_override: args.tol,
    };
    run::run(&spec, &ctx)
}
