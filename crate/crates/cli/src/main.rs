//! `teich`: length spectra, equal-length loci, Markoff triples, flat tori and
//! four-holed sphere trace identities from the command line.

mod args;
mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use commands::{fhs, flat, markoff, torus};
use output::{emit, Format, Report};

#[derive(Debug, Parser)]
#[command(name = "teich", version, about = "Simple closed geodesics and equal-length loci on one-holed tori")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result to a file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for the parallel library routines.
    #[arg(long, global = true, env = "TEICH_JOBS", value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simple length spectrum grouped into equal-length classes.
    Spectrum(torus::SpectrumArgs),
    /// Equal-length locus of two slopes inside a slice of fixed boundary length.
    Locus(torus::LocusArgs),
    /// Markoff triples.
    #[command(subcommand)]
    Markoff(markoff::MarkoffCmd),
    /// Parameters of the symmetric family where distinct orbits share a length.
    #[command(subcommand)]
    Violations(torus::ViolationsCmd),
    /// Twist sequences.
    #[command(subcommand)]
    Twist(torus::TwistCmd),
    /// Length order between two tori.
    #[command(subcommand)]
    Order(torus::OrderCmd),
    /// Flat tori.
    #[command(subcommand)]
    Flat(flat::FlatCmd),
    /// Four-holed sphere trace identities.
    #[command(subcommand)]
    Fhs(fhs::FhsCmd),
}

fn dispatch(command: &Command) -> Result<Report> {
    match command {
        Command::Spectrum(a) => torus::spectrum(a),
        Command::Locus(a) => torus::locus(a),
        Command::Markoff(c) => markoff::run(c),
        Command::Violations(c) => torus::violations(c),
        Command::Twist(c) => torus::twist(c),
        Command::Order(c) => torus::order(c),
        Command::Flat(c) => flat::run(c),
        Command::Fhs(c) => fhs::run(c),
    }
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let report = dispatch(&cli.command)?;
    emit(&report, cli.format, cli.output.as_deref())
}

/// Errors caused by the input rather than by the environment.
fn is_domain_error(err: &anyhow::Error) -> bool {
    use teich_core::Error as E;
    err.chain().any(|cause| {
        matches!(
            cause.downcast_ref::<E>(),
            Some(
                E::Domain(_)
                    | E::InvalidPoint(_)
                    | E::NotPrimitive { .. }
                    | E::NotUnimodular(..)
                    | E::Disjoint(..)
                    | E::SameOrbit(..)
                    | E::BracketNotFound { .. }
                    | E::LeafFailure { .. }
                    | E::DepthCap(_)
                    | E::Degenerate(_)
                    | E::Overflow(_)
                    | E::Parse(_)
            )
        )
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if is_domain_error(&err) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn domain_errors_are_recognised() {
        let e: anyhow::Error = teich_core::Error::domain("x").into();
        assert!(is_domain_error(&e));
        assert!(!is_domain_error(&anyhow::anyhow!("io")));
    }
}
