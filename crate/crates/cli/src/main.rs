//! `gpbog`: command-line front end for the gp-core library.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use commands::*;

#[derive(Debug, Parser)]
#[command(name = "gpbog", version, about = "Bogoliubov theory for dilute Bose gases in the Gross-Pitaevskii regime")]
struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Output format; each subcommand has a natural default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(long, short, global = true, action = ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Zero-energy scattering length and profile f(r).
    Scatter(ScatterArgs),
    /// First and second Born approximations.
    Born(BornArgs),
    /// Neumann problem on the ball of radius 1/2.
    Neumann(NeumannArgs),
    /// High-pass correlation kernel on the momentum lattice.
    Eta(EtaArgs),
    /// The lattice constant e_Lambda.
    Elambda(ElambdaArgs),
    /// Bogoliubov lattice sum for a given a0.
    Bogsum(BogsumArgs),
    /// Ground-state energy in the Gross-Pitaevskii regime.
    Energy(EnergyArgs),
    /// Excitation energy of an occupation list.
    Spectrum(SpectrumArgs),
    /// Condensate depletion per unit volume.
    Depletion(DepletionArgs),
    /// Lee-Huang-Yang energy per particle.
    Lhy(LhyArgs),
    /// Renormalised coefficients F_p, G_p, tau_p.
    Coeffs(CoeffsArgs),
    /// Rescaled lattice sum against its continuum integral.
    SumVsIntegral(SumVsIntegralArgs),
    /// Exact diagonalisation and the conjugation cascade on a small Fock space.
    Simulate(SimulateArgs),
    /// Run the acceptance suite.
    Check(CheckArgs),
}

fn dispatch(cli: &Cli) -> Result<output::Artifact, CliError> {
    let fmt = cli.format;
    match &cli.command {
        Command::Scatter(a) => scatter(a, fmt),
        Command::Born(a) => born(a),
        Command::Neumann(a) => neumann(a, fmt),
        Command::Eta(a) => eta(a, fmt),
        Command::Elambda(a) => elambda(a),
        Command::Bogsum(a) => bogsum(a),
        Command::Energy(a) => energy(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Depletion(a) => depletion(a),
        Command::Lhy(a) => lhy(a),
        Command::Coeffs(a) => coeffs(a, fmt),
        Command::SumVsIntegral(a) => sum_vs_integral(a),
        Command::Simulate(a) => simulate(a),
        Command::Check(a) => check(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure the thread pool: {e}");
            return ExitCode::from(3);
        }
    }
    let artifact = match dispatch(&cli) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    if let Err(e) = artifact.write(cli.output.as_deref(), cli.threads) {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code());
    }
    ExitCode::from(artifact.status)
}
