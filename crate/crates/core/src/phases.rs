//! Phase classification, the broken-symmetry criterion, exceptional points
//! and boundary surfaces of the phase diagram.

use std::f64::consts::{PI, TAU};
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{build_bloch, dispersion, momentum_grid, radicand, ModelParams};
use crate::numerics::{c, singular_values_2x2, C64};

/// Absolute tolerance (in units of t) for the equalities that define phase boundaries.
pub const BOUNDARY_TOL: f64 = 1e-12;
/// sigma_2 / sigma_1 below this marks a rank-one 2×2 matrix.
pub const RANK_RATIO_TOL: f64 = 1e-10;
/// Entrywise bound for a vanishing core matrix.
pub const ZERO_MATRIX_TOL: f64 = 1e-12;
/// Bound on |radicand| / scale² for a momentum to count as a zero of the dispersion.
pub const CRITICAL_RADICAND_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PhaseKind {
    GappedTopoNeg,
    GappedTopoPos,
    GappedTrivial,
    GaplessBoundary,
    DegeneracyLine,
    Coalescing,
}

impl PhaseKind {
    pub fn is_gapped(self) -> bool {
        matches!(
            self,
            PhaseKind::GappedTopoNeg | PhaseKind::GappedTopoPos | PhaseKind::GappedTrivial
        )
    }

    pub fn is_topological(self) -> bool {
        matches!(self, PhaseKind::GappedTopoNeg | PhaseKind::GappedTopoPos)
    }

    pub fn zak_value(self) -> Option<f64> {
        match self {
            PhaseKind::GappedTopoNeg => Some(-PI),
            PhaseKind::GappedTopoPos => Some(PI),
            PhaseKind::GappedTrivial => Some(0.0),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PhaseKind::GappedTopoNeg => "GappedTopoNeg",
            PhaseKind::GappedTopoPos => "GappedTopoPos",
            PhaseKind::GappedTrivial => "GappedTrivial",
            PhaseKind::GaplessBoundary => "GaplessBoundary",
            PhaseKind::DegeneracyLine => "DegeneracyLine",
            PhaseKind::Coalescing => "Coalescing",
        }
    }
}

impl fmt::Display for PhaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseLabel {
    pub kind: PhaseKind,
    pub zak_value: Option<f64>,
}

impl From<PhaseKind> for PhaseLabel {
    fn from(kind: PhaseKind) -> Self {
        Self {
            kind,
            zak_value: kind.zak_value(),
        }
    }
}

pub fn classify(params: &ModelParams) -> PhaseLabel {
    let t = params.t();
    let m = params.mu() / t;
    let a = params.delta_a() / t;
    let b = params.delta_b() / t;
    let prod = a * b;
    let am = m.abs();

    let kind = if (am - 1.0).abs() <= BOUNDARY_TOL && prod > 0.0 {
        PhaseKind::GaplessBoundary
    } else if a > 0.0 && b > 0.0 && am < 1.0 - BOUNDARY_TOL {
        PhaseKind::GappedTopoNeg
    } else if a < 0.0 && b < 0.0 && am < 1.0 - BOUNDARY_TOL {
        PhaseKind::GappedTopoPos
    } else if am > 1.0 + BOUNDARY_TOL && m * m + prod - 1.0 > BOUNDARY_TOL {
        PhaseKind::GappedTrivial
    } else if a == 0.0 && b == 0.0 && am <= 1.0 + BOUNDARY_TOL {
        PhaseKind::DegeneracyLine
    } else {
        PhaseKind::Coalescing
    };
    kind.into()
}

/// Whether some real momentum carries an imaginary level. Minimises
/// f(x) = (t² - P)x² - 2 mu t x + mu² + P over x = cos k in [-1, 1].
pub fn broken_symmetry_test(params: &ModelParams) -> bool {
    let (t, mu, p) = (params.t(), params.mu(), params.pairing_product());
    let quad = t * t - p;
    let f = |x: f64| quad * x * x - 2.0 * mu * t * x + mu * mu + p;
    let mut min = f(-1.0).min(f(1.0));
    if quad > 0.0 {
        let vertex = mu * t / quad;
        if vertex.abs() <= 1.0 {
            let at_vertex = p * (t * t - mu * mu - p) / quad;
            min = min.min(at_vertex);
        }
    }
    min < 0.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpCharacter {
    JordanBlock,
    DiagonalZero,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CriticalMomenta {
    pub values: Vec<f64>,
    pub characters: Vec<EpCharacter>,
}

impl CriticalMomenta {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, EpCharacter)> + '_ {
        self.values
            .iter()
            .copied()
            .zip(self.characters.iter().copied())
    }
}

fn push_angle_pair(out: &mut Vec<f64>, x: f64) {
    let x = x.clamp(-1.0, 1.0);
    let k = x.acos();
    out.push(k);
    if k > 0.0 && k < PI {
        out.push(TAU - k);
    }
}

/// All k in [0, 2pi) where the dispersion vanishes.
pub fn critical_momenta(params: &ModelParams) -> CriticalMomenta {
    let (t, mu, p) = (params.t(), params.mu(), params.pairing_product());
    let mut ks = Vec::new();

    if params.delta_a() == 0.0 && params.delta_b() == 0.0 {
        let x = mu / t;
        if x.abs() <= 1.0 + BOUNDARY_TOL {
            push_angle_pair(&mut ks, x);
        }
    } else {
        let disc = p * (mu * mu + p - t * t);
        let quad = t * t - p;
        let mut xs = Vec::new();
        if quad.abs() <= BOUNDARY_TOL * t * t {
            if mu != 0.0 {
                xs.push((mu * mu + p) / (2.0 * mu * t));
            }
        } else if disc >= 0.0 {
            let root = disc.sqrt();
            xs.push((mu * t + root) / quad);
            if root > 0.0 {
                xs.push((mu * t - root) / quad);
            }
        }
        for x in xs {
            if x.abs() <= 1.0 + BOUNDARY_TOL {
                push_angle_pair(&mut ks, x);
            }
        }
    }

    ks.sort_by(f64::total_cmp);
    ks.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);

    let mut out = CriticalMomenta::default();
    for k in ks {
        if let Ok(ch) = ep_character(params, k) {
            out.values.push(k);
            out.characters.push(ch);
        }
    }
    out
}

/// Structure of h at a zero of the dispersion: a nonzero nilpotent matrix or
/// the zero matrix.
pub fn ep_character(params: &ModelParams, kc: f64) -> Result<EpCharacter> {
    let scale = params.energy_scale();
    let rad = radicand(params, kc);
    if rad.abs() > CRITICAL_RADICAND_TOL * scale * scale {
        return Err(Error::NotCritical {
            k: kc,
            radicand: rad,
        });
    }
    let h = build_bloch(params, kc);
    let max = h
        .entries
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if max <= ZERO_MATRIX_TOL * scale {
        return Ok(EpCharacter::DiagonalZero);
    }
    let [s1, s2] = singular_values_2x2(h.entries);
    if s2 / s1 < RANK_RATIO_TOL {
        Ok(EpCharacter::JordanBlock)
    } else {
        Err(Error::NotCritical {
            k: kc,
            radicand: rad,
        })
    }
}

/// Similarity s with s h s^{-1} = [[0, 1], [0, 0]] for a nilpotent core matrix
/// h = [[a, b], [c, -a]]: s = [[1, 0], [a, b]], or [[0, 1], [c, -a]] if b = 0.
pub fn jordan_similarity(params: &ModelParams, kc: f64) -> Option<[[C64; 2]; 2]> {
    let h = build_bloch(params, kc).entries;
    let (a, b, cc) = (h[0][0], h[0][1], h[1][0]);
    let zero = c(0.0, 0.0);
    if b != zero {
        Some([[c(1.0, 0.0), zero], [a, b]])
    } else if cc != zero {
        Some([[zero, c(1.0, 0.0)], [cc, -a]])
    } else {
        None
    }
}

/// max |s h s^{-1} - J| for the matrix returned by [`jordan_similarity`].
pub fn jordan_residual(params: &ModelParams, kc: f64) -> Option<f64> {
    let s = jordan_similarity(params, kc)?;
    let h = build_bloch(params, kc).entries;
    let det = s[0][0] * s[1][1] - s[0][1] * s[1][0];
    let inv = [
        [s[1][1] / det, -s[0][1] / det],
        [-s[1][0] / det, s[0][0] / det],
    ];
    let mul = |x: [[C64; 2]; 2], y: [[C64; 2]; 2]| {
        let mut r = [[c(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
            }
        }
        r
    };
    let out = mul(mul(s, h), inv);
    let target = [[c(0.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]];
    Some(
        out.iter()
            .flatten()
            .zip(target.iter().flatten())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapScan {
    /// Minimum |eps_k| over grid points with a real level (infinity if none).
    pub min_real_gap: f64,
    pub any_imaginary: bool,
}

pub fn min_gap(params: &ModelParams, nk: usize) -> Result<GapScan> {
    if nk < 16 {
        return Err(Error::InvalidArgument(format!(
            "nk must be at least 16, got {nk}"
        )));
    }
    let mut scan = GapScan {
        min_real_gap: f64::INFINITY,
        any_imaginary: false,
    };
    for k in momentum_grid(nk) {
        let e = dispersion(params, k);
        if e.is_real {
            scan.min_real_gap = scan.min_real_gap.min(e.epsilon.norm());
        } else {
            scan.any_imaginary = true;
        }
    }
    Ok(scan)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Surface {
    /// mu/t = 1 with a positive pairing product.
    GaplessPlane = 1,
    /// mu² + delta_a delta_b = t² with mu/t > 1.
    CoalescingEdge = 2,
    /// delta_a = 0 or delta_b = 0 with mu/t < 1.
    ZeroPairing = 3,
}

impl Surface {
    pub fn id(self) -> u8 {
        self as u8
    }
}

/// A point on a boundary surface (in units of t) with the label `classify`
/// assigns there and the two phases it separates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSample {
    pub surface: Surface,
    pub delta_a: f64,
    pub delta_b: f64,
    pub mu: f64,
    pub label: PhaseKind,
    pub separates: (PhaseKind, PhaseKind),
}

impl SurfaceSample {
    /// Unit normal of the surface at this point, in (delta_a, delta_b, mu) order.
    pub fn normal(&self) -> [f64; 3] {
        let g = match self.surface {
            Surface::GaplessPlane => [0.0, 0.0, 1.0],
            Surface::CoalescingEdge => [self.delta_b, self.delta_a, 2.0 * self.mu],
            Surface::ZeroPairing if self.delta_a == 0.0 => [1.0, 0.0, 0.0],
            Surface::ZeroPairing => [0.0, 1.0, 0.0],
        };
        let n = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
        g.map(|x| x / n)
    }

    pub fn params(&self) -> ModelParams {
        ModelParams::new(1.0, self.mu, self.delta_a, self.delta_b).expect("finite sample")
    }
}

/// Point samples of the three boundary families over delta/t in [-2, 2] and
/// mu/t in [0, 2], with `resolution` intervals per axis.
pub fn boundary_surfaces(resolution: usize) -> Result<Vec<SurfaceSample>> {
    if resolution < 8 {
        return Err(Error::InvalidArgument(format!(
            "resolution must be at least 8, got {resolution}"
        )));
    }
    let n = resolution;
    let delta: Vec<f64> = (0..=n).map(|i| -2.0 + 4.0 * i as f64 / n as f64).collect();
    let mus: Vec<f64> = (0..=n).map(|i| 2.0 * i as f64 / n as f64).collect();
    let label = |da: f64, db: f64, mu: f64| {
        classify(&ModelParams::new(1.0, mu, da, db).expect("finite sample")).kind
    };
    let mut out = Vec::new();

    for &da in &delta {
        for &db in &delta {
            if da * db > 0.0 {
                let topo = if da > 0.0 {
                    PhaseKind::GappedTopoNeg
                } else {
                    PhaseKind::GappedTopoPos
                };
                out.push(SurfaceSample {
                    surface: Surface::GaplessPlane,
                    delta_a: da,
                    delta_b: db,
                    mu: 1.0,
                    label: label(da, db, 1.0),
                    separates: (topo, PhaseKind::GappedTrivial),
                });
            }
        }
    }

    for &mu in mus.iter().filter(|&&m| m > 1.0) {
        for &da in delta.iter().filter(|&&d| d != 0.0) {
            let db = (1.0 - mu * mu) / da;
            if db.abs() <= 2.0 {
                out.push(SurfaceSample {
                    surface: Surface::CoalescingEdge,
                    delta_a: da,
                    delta_b: db,
                    mu,
                    label: label(da, db, mu),
                    separates: (PhaseKind::GappedTrivial, PhaseKind::Coalescing),
                });
            }
        }
    }

    for &mu in mus.iter().filter(|&&m| m < 1.0) {
        for &other in delta.iter().filter(|&&d| d != 0.0) {
            let topo = if other > 0.0 {
                PhaseKind::GappedTopoNeg
            } else {
                PhaseKind::GappedTopoPos
            };
            for (da, db) in [(0.0, other), (other, 0.0)] {
                out.push(SurfaceSample {
                    surface: Surface::ZeroPairing,
                    delta_a: da,
                    delta_b: db,
                    mu,
                    label: label(da, db, mu),
                    separates: (topo, PhaseKind::Coalescing),
                });
            }
        }
    }
    Ok(out)
}
