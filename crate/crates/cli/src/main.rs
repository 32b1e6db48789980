use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use kitaev_cli::commands::{run, Failure};
use kitaev_cli::config::{
    Command, FileConfig, Format, GridAxes, Overrides, Range, RunConfig, Sweep,
};
use kitaev_core::biortho::Band;
use kitaev_core::realspace::EnergyUnit;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BandArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum UnitArg {
    Quarter,
    Coefficient,
}

/// Spectra, phase diagrams, Zak phases and open-chain zero modes of the
/// Kitaev chain with imbalanced pairing.
#[derive(Debug, Parser)]
#[command(name = "kitaev", version, allow_negative_numbers = true)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Hopping amplitude.
    #[arg(long, global = true)]
    t: Option<f64>,
    /// Chemical potential.
    #[arg(long, global = true)]
    mu: Option<f64>,
    /// Pair-creation amplitude.
    #[arg(long, global = true)]
    da: Option<f64>,
    /// Pair-annihilation amplitude.
    #[arg(long, global = true)]
    db: Option<f64>,
    /// Momentum grid size.
    #[arg(long, global = true)]
    nk: Option<usize>,
    /// Open-chain length.
    #[arg(long = "n-sites", global = true)]
    n_sites: Option<usize>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// JSON config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// AXIS:START:STOP:STEPS with AXIS one of mu, delta_a, delta_b, product.
    #[arg(long, value_parser = Sweep::parse, allow_hyphen_values = true)]
    sweep: Option<Sweep>,
    #[arg(long = "grid-axes", value_enum)]
    grid_axes: Option<GridAxes>,
    /// Outer grid axis as START:STOP:STEPS.
    #[arg(long, value_parser = Range::parse, allow_hyphen_values = true)]
    x: Option<Range>,
    /// Inner grid axis as START:STOP:STEPS.
    #[arg(long, value_parser = Range::parse, allow_hyphen_values = true)]
    y: Option<Range>,
    #[arg(long, value_enum)]
    band: Option<BandArg>,
    #[arg(long, value_enum)]
    units: Option<UnitArg>,
    /// Samples per axis for boundaries.
    #[arg(long)]
    resolution: Option<usize>,
}

fn write(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Config(format!("cannot write stdout: {e}")))
        }
    }
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn main_inner(cli: Cli) -> Result<(), Failure> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p).map_err(Failure::Config)?,
        None => FileConfig::default(),
    };
    let overrides = Overrides {
        t: cli.t,
        mu: cli.mu,
        delta_a: cli.da,
        delta_b: cli.db,
        nk: cli.nk,
        n_sites: cli.n_sites,
        out: cli.out,
        format: cli.format,
        sweep: cli.sweep,
        grid_axes: cli.grid_axes,
        x: cli.x,
        y: cli.y,
        band: cli.band.map(|b| match b {
            BandArg::Plus => Band::Plus,
            BandArg::Minus => Band::Minus,
        }),
        units: cli.units.map(|u| match u {
            UnitArg::Quarter => EnergyUnit::Quarter,
            UnitArg::Coefficient => EnergyUnit::Coefficient,
        }),
        resolution: cli.resolution,
    };
    let cfg = RunConfig::resolve(cli.command, file, overrides).map_err(Failure::Config)?;
    let rendered = run(&cfg)?;
    let out = cfg.output_path.as_deref();
    write(out, &rendered.main)?;
    if let (Some(side), Some(p)) = (&rendered.sidecar, out) {
        write(Some(&sidecar_path(p)), side)?;
    }
    if rendered.unconverged {
        return Err(Failure::NonConvergence(
            "zak phase changed by more than 1e-6 when doubling nk".into(),
        ));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
