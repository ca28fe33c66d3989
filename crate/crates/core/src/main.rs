use std::io::Write;
use std::path::PathBuf;

use capillar::cli::{execute, Command};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "capillar", version, about = "Two-phase flow with a thermodynamic interface")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args)]
struct Common {
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the 1D solver
    Run(Common),
    /// Finite-difference checks of the equations of state
    CheckThermo {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        h: Option<f64>,
    },
    /// Solve for thermodynamic equilibrium
    Equilibrium(Common),
    /// Eigenstructure of the quasilinear matrix at one cell
    Eigen(Common),
}

fn main() {
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Cmd::Run(c) => (Command::Run, c),
        Cmd::CheckThermo { common, tol, h } => (Command::CheckThermo { tol, h }, common),
        Cmd::Equilibrium(c) => (Command::Equilibrium, c),
        Cmd::Eigen(c) => (Command::Eigen, c),
    };
    let outcome = execute(command, &common.config, common.out.as_deref());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(outcome.code as i32);
}
