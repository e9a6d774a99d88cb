use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod bench;
mod check;
mod selftest;

#[derive(Parser)]
#[command(name = "hflcheck", version, about = "Model checking of higher-order modal fixpoint logic")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether the LTS satisfies the HES; prints `valid` or `invalid`.
    Check(CheckArgs),
    /// Run every `NAME.hes`/`NAME.lts` pair of a directory and write a CSV.
    Bench(BenchArgs),
    /// Run the embedded corpus and a small oracle comparison.
    Selftest,
    /// One supervised bench run; prints the report as JSON.
    #[command(hide = true)]
    Worker { hes: PathBuf, lts: PathBuf },
}

#[derive(Args)]
pub struct CheckArgs {
    pub hes: PathBuf,
    pub lts: PathBuf,
    /// Decide with the semantic oracle instead.
    #[arg(long)]
    pub naive_oracle: bool,
    /// Seed the initial environment with every ν-equation.
    #[arg(long)]
    pub no_call_graph_opt: bool,
    /// Keep bindings and moves dominated through subtyping.
    #[arg(long)]
    pub no_subsume: bool,
    /// Print the saturation log to standard error.
    #[arg(long)]
    pub trace: bool,
    /// Print the saturated environment to standard error.
    #[arg(long)]
    pub dump_types: bool,
    /// Print the flow map to standard error.
    #[arg(long)]
    pub dump_flow: bool,
    /// Write the subgame in pgsolver format.
    #[arg(long, value_name = "FILE")]
    pub dump_game: Option<PathBuf>,
    /// Print the run report as one line of JSON to standard error.
    #[arg(long)]
    pub stats: bool,
}

#[derive(Args)]
pub struct BenchArgs {
    pub dir: PathBuf,
    /// Per-instance wall-clock limit in seconds.
    #[arg(long, default_value_t = 60.0)]
    pub timeout: f64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Instances run in parallel.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Check(args) => check::run(&args),
        Cmd::Bench(args) => bench::run(&args),
        Cmd::Selftest => selftest::run(),
        Cmd::Worker { hes, lts } => bench::worker(&hes, &lts),
    }
}
