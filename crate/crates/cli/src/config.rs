//! Run configuration: JSON file values overridden by command-line flags.

use std::path::{Path, PathBuf};

use kitaev_core::biortho::Band;
use kitaev_core::realspace::EnergyUnit;
use kitaev_core::ModelParams;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    PhaseGrid,
    Zak,
    OpenSpectrum,
    EdgeModes,
    Boundaries,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Mu,
    DeltaA,
    DeltaB,
    /// The pairing product delta_a * delta_b.
    Product,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Mu => "mu",
            Axis::DeltaA => "delta_a",
            Axis::DeltaB => "delta_b",
            Axis::Product => "product",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "mu" => Some(Axis::Mu),
            "delta_a" | "da" => Some(Axis::DeltaA),
            "delta_b" | "db" => Some(Axis::DeltaB),
            "product" => Some(Axis::Product),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
pub enum GridAxes {
    /// delta_a (outer) by delta_b (inner) at fixed mu.
    #[serde(rename = "delta_a,delta_b")]
    #[value(name = "delta_a,delta_b")]
    Pairings,
    /// mu (outer) by delta_a * delta_b (inner).
    #[serde(rename = "mu,product")]
    #[value(name = "mu,product")]
    MuProduct,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (i as f64 / last)
                }
            })
            .collect()
    }

    fn validate(&self, what: &str) -> Result<(), String> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(format!("{what}: range must be finite"));
        }
        if self.steps < 2 {
            return Err(format!(
                "{what}: steps must be at least 2, got {}",
                self.steps
            ));
        }
        Ok(())
    }

    /// START:STOP:STEPS
    pub fn parse(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected START:STOP:STEPS, got {s:?}"));
        }
        let num = |x: &str| x.parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
        Ok(Range {
            start: num(parts[0])?,
            stop: num(parts[1])?,
            steps: parts[2]
                .parse()
                .map_err(|e| format!("{:?}: {e}", parts[2]))?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn range(&self) -> Range {
        Range {
            start: self.start,
            stop: self.stop,
            steps: self.steps,
        }
    }

    /// AXIS:START:STOP:STEPS
    pub fn parse(s: &str) -> Result<Self, String> {
        let (axis, rest) = s
            .split_once(':')
            .ok_or_else(|| format!("expected AXIS:START:STOP:STEPS, got {s:?}"))?;
        let axis = Axis::parse(axis).ok_or_else(|| format!("unknown sweep axis {axis:?}"))?;
        let r = Range::parse(rest)?;
        Ok(Sweep {
            axis,
            start: r.start,
            stop: r.stop,
            steps: r.steps,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub axes: GridAxes,
    pub x: Range,
    pub y: Range,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileParams {
    pub t: Option<f64>,
    pub mu: Option<f64>,
    pub delta_a: Option<f64>,
    pub delta_b: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BandName {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitName {
    Quarter,
    Coefficient,
}

/// Contents of a `--config` file. Every field is optional.
#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub command: Option<Command>,
    #[serde(default)]
    pub params: FileParams,
    pub sweep: Option<Sweep>,
    pub grid: Option<Grid>,
    pub nk: Option<usize>,
    pub n_sites: Option<usize>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
    pub band: Option<BandName>,
    pub units: Option<UnitName>,
    pub resolution: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }
}

/// Values given on the command line.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub t: Option<f64>,
    pub mu: Option<f64>,
    pub delta_a: Option<f64>,
    pub delta_b: Option<f64>,
    pub nk: Option<usize>,
    pub n_sites: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub sweep: Option<Sweep>,
    pub grid_axes: Option<GridAxes>,
    pub x: Option<Range>,
    pub y: Option<Range>,
    pub band: Option<Band>,
    pub units: Option<EnergyUnit>,
    pub resolution: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: ModelParams,
    pub sweep: Option<Sweep>,
    pub grid: Option<Grid>,
    pub nk: usize,
    pub n_sites: usize,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub band: Band,
    pub units: EnergyUnit,
    pub resolution: usize,
}

pub const DEFAULT_NK: usize = 1024;
pub const DEFAULT_N_SITES: usize = 50;
pub const DEFAULT_RESOLUTION: usize = 16;
const DEFAULT_RANGE: Range = Range {
    start: -2.0,
    stop: 2.0,
    steps: 81,
};

impl RunConfig {
    /// The command line's subcommand wins over a `command` entry in the file.
    pub fn resolve(command: Command, file: FileConfig, cli: Overrides) -> Result<Self, String> {
        let fp = file.params;
        let params = ModelParams::new(
            cli.t.or(fp.t).unwrap_or(1.0),
            cli.mu.or(fp.mu).unwrap_or(0.5),
            cli.delta_a.or(fp.delta_a).unwrap_or(1.0),
            cli.delta_b.or(fp.delta_b).unwrap_or(1.0),
        )
        .map_err(|e| e.to_string())?;

        let sweep = cli.sweep.or(file.sweep);
        if let Some(s) = &sweep {
            s.range().validate("sweep")?;
        }

        let file_grid = file.grid;
        let grid =
            if command == Command::PhaseGrid || file_grid.is_some() || cli.grid_axes.is_some() {
                let g = Grid {
                    axes: cli
                        .grid_axes
                        .or(file_grid.map(|g| g.axes))
                        .unwrap_or(GridAxes::Pairings),
                    x: cli.x.or(file_grid.map(|g| g.x)).unwrap_or(DEFAULT_RANGE),
                    y: cli.y.or(file_grid.map(|g| g.y)).unwrap_or(DEFAULT_RANGE),
                };
                g.x.validate("grid x")?;
                g.y.validate("grid y")?;
                Some(g)
            } else {
                None
            };

        let band = cli.band.unwrap_or(match file.band {
            Some(BandName::Minus) => Band::Minus,
            _ => Band::Plus,
        });
        let units = cli.units.unwrap_or(match file.units {
            Some(UnitName::Coefficient) => EnergyUnit::Coefficient,
            _ => EnergyUnit::Quarter,
        });

        let cfg = RunConfig {
            command,
            params,
            sweep,
            grid,
            nk: cli.nk.or(file.nk).unwrap_or(DEFAULT_NK),
            n_sites: cli.n_sites.or(file.n_sites).unwrap_or(DEFAULT_N_SITES),
            output_path: cli.out.or(file.output_path),
            format: cli.format.or(file.format).unwrap_or_default(),
            band,
            units,
            resolution: cli
                .resolution
                .or(file.resolution)
                .unwrap_or(DEFAULT_RESOLUTION),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), String> {
        match self.command {
            Command::Spectrum if self.nk < 2 => {
                return Err(format!("nk must be at least 2, got {}", self.nk))
            }
            Command::Zak if self.nk < 64 => {
                return Err(format!("nk must be at least 64 for zak, got {}", self.nk))
            }
            _ => {}
        }
        let sweeps = matches!(self.command, Command::OpenSpectrum);
        if self.sweep.is_some() && !sweeps {
            return Err("sweep is only supported by open-spectrum".into());
        }
        if self.grid.is_some() && self.command != Command::PhaseGrid {
            return Err("grid is only supported by phase-grid".into());
        }
        if self.command == Command::EdgeModes
            && self.format == Format::Csv
            && self.output_path.is_none()
        {
            return Err("edge-modes CSV output needs --out for its JSON sidecar".into());
        }
        Ok(())
    }
}

/// Replace one coordinate of `base`. The product axis sets
/// |delta_a| = |delta_b| = sqrt|v|, delta_a keeps the sign of the base value
/// and delta_b takes sign(v) times that.
pub fn apply_axis(base: &ModelParams, axis: Axis, v: f64) -> kitaev_core::Result<ModelParams> {
    match axis {
        Axis::Mu => base.with_mu(v),
        Axis::DeltaA => base.with_pairing(v, base.delta_b()),
        Axis::DeltaB => base.with_pairing(base.delta_a(), v),
        Axis::Product => {
            let s = if base.delta_a() < 0.0 { -1.0 } else { 1.0 };
            let m = v.abs().sqrt();
            let sb = if v < 0.0 { -s } else { s };
            base.with_pairing(s * m, sb * m)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_values_hit_endpoints() {
        let r = Range::parse("-2:2:81").unwrap();
        let v = r.values();
        assert_eq!(v.len(), 81);
        assert_eq!(v[0], -2.0);
        assert_eq!(v[40], 0.0);
        assert_eq!(v[80], 2.0);
        assert!(Range::parse("0:1").is_err());
    }

    #[test]
    fn sweep_parse() {
        let s = Sweep::parse("mu:0:2:100").unwrap();
        assert_eq!(s.axis, Axis::Mu);
        assert_eq!(s.steps, 100);
        assert!(Sweep::parse("nope:0:1:3").is_err());
        assert_eq!(Sweep::parse("da:-1:1:3").unwrap().axis, Axis::DeltaA);
    }

    #[test]
    fn flags_override_file() {
        let file: FileConfig = serde_json::from_str(
            r#"{"params": {"mu": 0.3, "delta_b": -1}, "nk": 256, "format": "json"}"#,
        )
        .unwrap();
        let cli = Overrides {
            mu: Some(0.7),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(Command::Spectrum, file, cli).unwrap();
        assert_eq!(cfg.params.mu(), 0.7);
        assert_eq!(cfg.params.delta_b(), -1.0);
        assert_eq!(cfg.nk, 256);
        assert_eq!(cfg.format, Format::Json);
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(serde_json::from_str::<FileConfig>(r#"{"mu": 1}"#).is_err());
        let g: FileConfig = serde_json::from_str(
            r#"{"grid": {"axes": "mu,product", "x": {"start": 0, "stop": 2, "steps": 3},
                "y": {"start": -1, "stop": 1, "steps": 3}}}"#,
        )
        .unwrap();
        assert_eq!(g.grid.unwrap().axes, GridAxes::MuProduct);
    }

    #[test]
    fn product_axis() {
        let base = ModelParams::new(1.0, 0.5, -2.0, -0.5).unwrap();
        let q = apply_axis(&base, Axis::Product, 4.0).unwrap();
        assert_eq!((q.delta_a(), q.delta_b()), (-2.0, -2.0));
        let q = apply_axis(&base, Axis::Product, -1.0).unwrap();
        assert_eq!((q.delta_a(), q.delta_b()), (-1.0, 1.0));
    }
}
