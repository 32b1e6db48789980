use rayon::prelude::*;

use kitaev_core::biortho::zak_phase;
use kitaev_core::model::{dispersion, momentum_grid};
use kitaev_core::phases::{boundary_surfaces, classify};
use kitaev_core::realspace::{
    build_system, canonical_zero_modes, edge_states, kernel_overlap, midgap_count, open_spectrum,
    MIDGAP_THRESHOLD,
};
use kitaev_core::{Error, ModelParams};

use crate::config::{apply_axis, Command, Format, GridAxes, RunConfig};
use crate::output::{object, raw_object, Cell, Table};

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Physics(String),
    NonConvergence(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 2,
            Failure::Physics(_) => 3,
            Failure::NonConvergence(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Physics(m) | Failure::NonConvergence(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidParams(_) | Error::InvalidArgument(_) => Failure::Config(msg),
            Error::NoConvergence(_) => Failure::NonConvergence(msg),
            Error::NonPositivePairing(_)
            | Error::DegenerateMomentum { .. }
            | Error::NotCritical { .. }
            | Error::NotGapped(_)
            | Error::NotAnalytic(_) => Failure::Physics(msg),
        }
    }
}

/// Rendered output: the main document plus an optional JSON sidecar.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub main: String,
    pub sidecar: Option<String>,
    /// Output was written but the computation did not converge.
    pub unconverged: bool,
}

impl Rendered {
    fn plain(main: String) -> Self {
        Self {
            main,
            sidecar: None,
            unconverged: false,
        }
    }
}

fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    }
}

fn params_json(p: &ModelParams) -> String {
    object([
        ("t", p.t().into()),
        ("mu", p.mu().into()),
        ("delta_a", p.delta_a().into()),
        ("delta_b", p.delta_b().into()),
    ])
}

pub fn run(cfg: &RunConfig) -> Result<Rendered, Failure> {
    match cfg.command {
        Command::Spectrum => spectrum(cfg),
        Command::PhaseGrid => phase_grid(cfg),
        Command::Zak => zak(cfg),
        Command::OpenSpectrum => open_spectrum_cmd(cfg),
        Command::EdgeModes => edge_modes(cfg),
        Command::Boundaries => boundaries(cfg),
    }
}

fn spectrum(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let mut table = Table::new(["k", "re_epsilon", "im_epsilon"]);
    for k in momentum_grid(cfg.nk) {
        let e = dispersion(&cfg.params, k).epsilon;
        table.push(vec![k.into(), e.re.into(), e.im.into()]);
    }
    Ok(Rendered::plain(render(&table, cfg.format)))
}

fn phase_grid(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let grid = cfg.grid.expect("phase-grid always carries a grid");
    let xs = grid.x.values();
    let ys = grid.y.values();
    let points: Vec<(f64, f64)> = xs
        .iter()
        .flat_map(|&x| ys.iter().map(move |&y| (x, y)))
        .collect();
    let rows: Result<Vec<Vec<Cell>>, Error> = points
        .par_iter()
        .map(|&(x, y)| {
            let q = match grid.axes {
                GridAxes::Pairings => cfg.params.with_pairing(x, y)?,
                GridAxes::MuProduct => {
                    apply_axis(&cfg.params.with_mu(x)?, crate::config::Axis::Product, y)?
                }
            };
            let label = classify(&q);
            Ok(vec![
                q.delta_a().into(),
                q.delta_b().into(),
                q.mu().into(),
                label.kind.as_str().into(),
                label.zak_value.into(),
            ])
        })
        .collect();
    let mut table = Table::new(["delta_a", "delta_b", "mu", "label", "zak"]);
    table.rows = rows?;
    Ok(Rendered::plain(render(&table, cfg.format)))
}

fn zak(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let z = zak_phase(&cfg.params, cfg.band, cfg.nk)?;
    let main = match cfg.format {
        Format::Json => {
            let mut s = raw_object([
                ("params", params_json(&cfg.params)),
                ("band", Cell::from(cfg.band.as_str()).json()),
                ("nk", Cell::from(z.nk).json()),
                ("zak", Cell::from(z.value).json()),
                ("converged", Cell::from(z.converged).json()),
            ]);
            s.push('\n');
            s
        }
        Format::Csv => {
            let p = &cfg.params;
            let mut t = Table::new([
                "t",
                "mu",
                "delta_a",
                "delta_b",
                "band",
                "nk",
                "zak",
                "converged",
            ]);
            t.push(vec![
                p.t().into(),
                p.mu().into(),
                p.delta_a().into(),
                p.delta_b().into(),
                cfg.band.as_str().into(),
                z.nk.into(),
                z.value.into(),
                z.converged.into(),
            ]);
            t.to_csv()
        }
    };
    Ok(Rendered {
        main,
        sidecar: None,
        unconverged: !z.converged,
    })
}

fn open_spectrum_cmd(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let n = cfg.n_sites;
    let points: Vec<(f64, ModelParams)> = match &cfg.sweep {
        Some(s) => s
            .range()
            .values()
            .into_iter()
            .map(|v| apply_axis(&cfg.params, s.axis, v).map(|q| (v, q)))
            .collect::<Result<_, _>>()?,
        None => vec![(0.0, cfg.params)],
    };
    let rows: Result<Vec<Vec<Cell>>, Error> = points
        .par_iter()
        .map(|(v, q)| {
            let sys = build_system(q, n)?;
            let e = open_spectrum(&sys, cfg.units)?;
            let mut row: Vec<Cell> = Vec::with_capacity(2 * n + 3);
            row.push((*v).into());
            row.extend(e.iter().map(|&x| Cell::from(x)));
            row.push((e[n - 1].abs() < MIDGAP_THRESHOLD).into());
            row.push((e[n].abs() < MIDGAP_THRESHOLD).into());
            row.push(midgap_count(&e, MIDGAP_THRESHOLD).into());
            Ok(row)
        })
        .collect();
    let mut headers = vec!["sweep_value".to_string()];
    headers.extend((0..2 * n).map(|i| format!("e_{i}")));
    headers.extend([
        "midgap_lo".into(),
        "midgap_hi".into(),
        "midgap_count".into(),
    ]);
    let mut table = Table::new(headers);
    table.rows = rows?;
    Ok(Rendered::plain(render(&table, cfg.format)))
}

fn edge_modes(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let (q, n) = (&cfg.params, cfg.n_sites);
    let edge = edge_states(q, n)?;
    let sys = build_system(q, n)?;
    let (bar, plain) = canonical_zero_modes(q, n)?;
    let residual = bar.residual(&sys).max(plain.residual(&sys));
    let overlap = kernel_overlap(q, n)?;

    let mut table = Table::new(["j", "psi_left", "psi_right"]);
    for j in 0..n {
        table.push(vec![
            (j + 1).into(),
            edge.amplitudes_left[j].into(),
            edge.amplitudes_right[j].into(),
        ]);
    }
    let summary = [
        ("omega", Cell::from(edge.omega)),
        ("omega_prime", Cell::from(edge.omega_prime)),
        ("residual", Cell::from(residual)),
        ("kernel_overlap", Cell::from(overlap)),
    ];
    Ok(match cfg.format {
        Format::Csv => Rendered {
            main: table.to_csv(),
            sidecar: Some(object(summary) + "\n"),
            unconverged: false,
        },
        Format::Json => {
            let mut fields: Vec<(&str, String)> =
                summary.iter().map(|(k, v)| (*k, v.json())).collect();
            fields.push(("rows", table.to_json().trim_end().to_string()));
            Rendered::plain(raw_object(fields) + "\n")
        }
    })
}

fn boundaries(cfg: &RunConfig) -> Result<Rendered, Failure> {
    let mut table = Table::new(["surface_id", "delta_a", "delta_b", "mu"]);
    for s in boundary_surfaces(cfg.resolution)? {
        table.push(vec![
            Cell::Int(s.surface.id() as i64),
            s.delta_a.into(),
            s.delta_b.into(),
            s.mu.into(),
        ]);
    }
    Ok(Rendered::plain(render(&table, cfg.format)))
}
