//! Command-line front end: closed-form evaluation, Monte Carlo runs,
//! spectral and Hamiltonian experiments, and the validation suite.

mod commands;

use anyhow::Result;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "typent",
    about = "Typical entanglement entropy of random pure states: closed forms, samplers, experiments",
    version
)]
struct Cli {
    /// Worker threads for sampling (0 = all cores). Also honors TYPENT_THREADS.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate exact closed forms (mean and variance) for one ensemble
    Exact(commands::ExactArgs),
    /// Emit plot data: exact and asymptotic curves over a V_A grid
    Curve(commands::CurveArgs),
    /// Monte Carlo estimate with a z-score against the closed form
    Sample(commands::SampleArgs),
    /// Spectral-statistics experiments (GOE/GUE spacings, direct sums, Porter-Thomas)
    Spectrum(commands::SpectrumArgs),
    /// Hamiltonian eigenstate-entropy experiments
    Hamiltonian(commands::HamiltonianArgs),
    /// Run the validation suite (exit code 1 on any failed criterion)
    Validate(commands::ValidateArgs),
}

fn main() {
    let cli = Cli::parse();
    let threads = std::env::var("TYPENT_THREADS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(cli.threads);
    typent_core::set_blas_threads(1);
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .expect("rayon pool");
    }
    let outcome: Result<i32> = match cli.command {
        Command::Exact(args) => commands::run_exact(args),
        Command::Curve(args) => commands::run_curve(args),
        Command::Sample(args) => commands::run_sample(args),
        Command::Spectrum(args) => commands::run_spectrum(args),
        Command::Hamiltonian(args) => commands::run_hamiltonian(args),
        Command::Validate(args) => commands::run_validate(args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(2);
        }
    }
}
