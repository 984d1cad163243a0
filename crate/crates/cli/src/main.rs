use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

mod analysis;
mod config;
mod flow;
mod output;

use output::{Format, Outputs};

#[derive(Parser, Debug)]
#[command(name = "mevisc", version, about = "Midpoint viscous-operator experiments")]
struct Cli {
    #[command(flatten)]
    io: Io,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Io {
    /// Flat JSON config; command-line flags override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; without it the primary result goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact coefficient dump of a scheme.
    Coeffs(analysis::CoeffsOpts),
    /// Modified-wavenumber curve and derived metrics.
    Spectra(analysis::SpectraOpts),
    /// Resolving-efficiency search over a coefficient family.
    Optimize(analysis::OptimizeOpts),
    /// Order-of-accuracy study.
    Oa(analysis::OaOpts),
    /// Nonlinear diffusion benchmark.
    Diffuse(analysis::DiffuseOpts),
    /// Navier–Stokes benchmark run.
    Run(flow::RunOpts),
    /// Largest stable filter cycle by bisection.
    ScanTheta(flow::ScanOpts),
    /// Applies an operator to a field read from CSV.
    Apply(analysis::ApplyOpts),
}

fn job<T>(
    io: &Io,
    name: &str,
    cli: &T,
    format: impl Fn(&T) -> Option<Format>,
    body: impl FnOnce(&mut T) -> Result<Outputs>,
) -> Result<()>
where
    T: Serialize + DeserializeOwned + Default,
{
    let mut opts = config::merge(cli, io.config.as_deref(), name)?;
    let out = body(&mut opts)?;
    let resolved = config::resolved(&opts, name)?;
    output::emit(&out, io.out.as_deref(), format(&opts).unwrap_or_default(), &resolved)
}

fn dispatch(command: &Command, io: &Io) -> Result<()> {
    match command {
        Command::Coeffs(o) => job(io, "coeffs", o, |o| o.format, analysis::coeffs),
        Command::Spectra(o) => job(io, "spectra", o, |o| o.format, analysis::spectra),
        Command::Optimize(o) => job(io, "optimize", o, |o| o.format, analysis::optimize),
        Command::Oa(o) => job(io, "oa", o, |o| o.format, analysis::oa),
        Command::Diffuse(o) => job(io, "diffuse", o, |o| o.format, analysis::diffuse),
        Command::Apply(o) => job(io, "apply", o, |o| o.format, analysis::apply),
        Command::Run(o) => job(io, "run", o, |o| o.format, flow::run),
        Command::ScanTheta(o) => job(io, "scan-theta", o, |o| o.run.format, flow::scan_theta),
    }
}

fn main() -> ExitCode {
    // clap prints usage and exits with status 2 on bad flags
    let cli = Cli::parse();
    match dispatch(&cli.command, &cli.io) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = format!("{e:#}");
            eprintln!("{}", serde_json::json!({ "error": msg }));
            ExitCode::from(1)
        }
    }
}
