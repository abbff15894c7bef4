use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pnodal::asymptotics::ExpansionVariant;
use pnodal_cli::run::{self, Outcome, RunError};
use pnodal_cli::{Experiment, ExperimentConfig};

#[derive(Parser)]
#[command(name = "pnodal", version, about = "Eigenvalues, nodal data and reconstructions for p-Laplacian pencils")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Printed,
    ProofConsistent,
}

impl From<Variant> for ExpansionVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Printed => ExpansionVariant::Printed,
            Variant::ProofConsistent => ExpansionVariant::ProofConsistent,
        }
    }
}

#[derive(clap::Args)]
struct Common {
    /// Experiment config (TOML).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output directory; overrides `output_dir` from the config.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Exponent reading used for seeds and predictions.
    #[arg(long, value_enum)]
    variant: Option<Variant>,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalue table with expansion residuals.
    Eig(Common),
    /// Nodal points and lengths, numeric and predicted.
    Nodes(Common),
    /// Reconstruction of q from nodal lengths.
    Reconstruct {
        #[command(flatten)]
        common: Common,
        /// Add an extrapolated column over the n-ladder.
        #[arg(long)]
        ladder: bool,
    },
    /// Generalized sine and cosine over two half-periods.
    SpTable(Common),
}

fn execute(cli: Cli) -> Result<Outcome, RunError> {
    let common = match &cli.command {
        Command::Eig(c) | Command::Nodes(c) | Command::SpTable(c) => c,
        Command::Reconstruct { common, .. } => common,
    };
    let config = ExperimentConfig::load(&common.config)?;
    let config = run::with_variant(config, common.variant.map(Into::into));
    let out_dir = run::output_dir(&config, common.out.as_deref());
    let threads = run::threads_from_env()?;
    let exp = Experiment::new(config, out_dir, threads)?;
    match cli.command {
        Command::Eig(_) => run::cmd_eig(&exp),
        Command::Nodes(_) => run::cmd_nodes(&exp),
        Command::Reconstruct { ladder, .. } => run::cmd_reconstruct(&exp, ladder),
        Command::SpTable(_) => run::cmd_sp_table(&exp),
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(Outcome::Complete) => ExitCode::SUCCESS,
        Ok(Outcome::Partial) => {
            eprintln!("pnodal: some indices failed");
            ExitCode::from(1)
        }
        Err(e @ RunError::Config(_)) => {
            eprintln!("pnodal: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("pnodal: {e}");
            ExitCode::from(1)
        }
    }
}
