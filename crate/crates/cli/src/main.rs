//! `stekloff`: batch front end for meshing, solving, convergence studies,
//! diagnostics and the ball oracle.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "stekloff", version, about = "Electromagnetic Stekloff eigenvalue toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    args: ConfigArgs,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Generate or read a mesh and write it out.
    Mesh,
    /// Solve one eigenvalue problem.
    Solve,
    /// Track eigenvalues over a nested mesh hierarchy.
    Study,
    /// Stability and consistency diagnostics over a mesh hierarchy.
    Diagnose,
    /// Closed-form eigenvalues of the ball.
    Oracle,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Mesh => "mesh",
            Command::Solve => "solve",
            Command::Study => "study",
            Command::Diagnose => "diagnose",
            Command::Oracle => "oracle",
        }
    }
}

/// Flags override the config file; `--set` overrides everything else.
#[derive(Args, Debug)]
struct ConfigArgs {
    /// Config file with one `key = value` per line.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Any config key, as KEY=VALUE. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// `cube N`, `ball LEVEL` or `file PATH`.
    #[arg(long, global = true)]
    geometry: Option<String>,
    #[arg(long, global = true, value_name = "N")]
    cube: Option<String>,
    #[arg(long, global = true, value_name = "LEVEL")]
    ball: Option<String>,
    /// Mesh file (.msh or .json).
    #[arg(long, global = true, value_name = "FILE")]
    mesh: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    eps: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    omega: Option<String>,
    /// original, modified_schur, aux0 or aux1.
    #[arg(long, global = true)]
    problem: Option<String>,
    /// auto, deflation or a positive number.
    #[arg(long, global = true)]
    gamma: Option<String>,
    /// qz or shift_invert.
    #[arg(long, global = true)]
    solver: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    shift: Option<String>,
    #[arg(long, global = true)]
    k: Option<String>,
    #[arg(long, global = true)]
    levels: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<String>,
}

fn resolve(cmd: Command, a: &ConfigArgs) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig { command: cmd.name().into(), ..Default::default() };
    if let Some(path) = &a.config {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        cfg.apply_text(&text, path)?;
    }
    let flags = [
        ("geometry", &a.geometry),
        ("cube", &a.cube),
        ("ball", &a.ball),
        ("mesh", &a.mesh),
        ("eps", &a.eps),
        ("mu", &a.mu),
        ("omega", &a.omega),
        ("problem", &a.problem),
        ("gamma", &a.gamma),
        ("solver", &a.solver),
        ("shift", &a.shift),
        ("k", &a.k),
        ("levels", &a.levels),
        ("seed", &a.seed),
        ("out", &a.out),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    for kv in &a.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Config(format!("--set {kv:?}: expected KEY=VALUE")))?;
        cfg.set(k.trim(), v)?;
    }
    cfg.check()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<Vec<String>, CliError> {
    let cfg = resolve(cli.command, &cli.args)?;
    match cli.command {
        Command::Mesh => commands::mesh::run(&cfg),
        Command::Solve => commands::solve::run(&cfg),
        Command::Study => commands::study::run(&cfg),
        Command::Diagnose => commands::diagnose::run(&cfg),
        Command::Oracle => commands::oracle::run(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("stekloff {}: {e}", cli.command.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
