//! Biorthogonal eigenvectors of the core matrix, their (r, theta, phi)
//! parametrization and the extended Zak phase.
//!
//! The vectors are written in the polar form of the rotated frame
//! W h W = d_z sigma_x - d_y sigma_y + d_x sigma_z, W = (sigma_x + sigma_z)/sqrt 2,
//! whose polar axis carries d_x = r cos theta. In that frame the right
//! vectors are (cos(theta/2), e^{-i phi} sin(theta/2)) and
//! (sin(theta/2), -e^{-i phi} cos(theta/2)), and the left rows are their
//! partners with e^{+i phi}. For real k in a gapped phase r and phi are real
//! and the gauge is smooth around the Brillouin zone.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::model::{d_vector, half_energy, momentum_grid, ModelParams};
use crate::numerics::{c, C64};
use crate::phases::{classify, CRITICAL_RADICAND_TOL};

/// Momenta with |eps_k| below this times the coupling scale are rejected.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Step of the central difference in [`berry_connection`].
pub const FD_STEP: f64 = 1e-6;
/// Doubling nk must change the Wilson loop by less than this.
pub const ZAK_CONVERGENCE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Band {
    Plus,
    Minus,
}

impl Band {
    pub fn as_str(self) -> &'static str {
        match self {
            Band::Plus => "plus",
            Band::Minus => "minus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angles {
    pub r: C64,
    pub theta: C64,
    pub phi: C64,
}

impl Angles {
    /// r (cos theta, sin theta sin phi, sin theta cos phi).
    pub fn reconstruct(&self) -> [C64; 3] {
        let (st, ct) = (self.theta.sin(), self.theta.cos());
        [
            self.r * ct,
            self.r * st * self.phi.sin(),
            self.r * st * self.phi.cos(),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiorthoEigensystem {
    /// Eigenvalue of `psi_plus`; `psi_minus` has the negative.
    pub energy: C64,
    pub psi_plus: [C64; 2],
    pub psi_minus: [C64; 2],
    pub eta_plus: [C64; 2],
    pub eta_minus: [C64; 2],
}

impl BiorthoEigensystem {
    pub fn psi(&self, band: Band) -> [C64; 2] {
        match band {
            Band::Plus => self.psi_plus,
            Band::Minus => self.psi_minus,
        }
    }

    pub fn eta(&self, band: Band) -> [C64; 2] {
        match band {
            Band::Plus => self.eta_plus,
            Band::Minus => self.eta_minus,
        }
    }
}

/// <eta|psi> with the left vector conjugated.
pub fn braket(eta: [C64; 2], psi: [C64; 2]) -> C64 {
    eta[0].conj() * psi[0] + eta[1].conj() * psi[1]
}

fn rotate(v: [C64; 2]) -> [C64; 2] {
    [(v[0] + v[1]) * FRAC_1_SQRT_2, (v[0] - v[1]) * FRAC_1_SQRT_2]
}

/// Rejects momenta that are zeros of the dispersion, either by magnitude or
/// by the radicand test that [`crate::phases::ep_character`] accepts.
fn check_gap(params: &ModelParams, k: f64) -> Result<C64> {
    let r = half_energy(params, k);
    let scale = params.energy_scale();
    if 2.0 * r.norm() < DEGENERACY_TOL * scale
        || r.norm_sqr() <= CRITICAL_RADICAND_TOL * scale * scale
    {
        return Err(Error::DegenerateMomentum {
            k,
            magnitude: 2.0 * r.norm(),
        });
    }
    Ok(r)
}

/// e^{i phi}, falling back to 1 on the polar axis.
fn phase_factor(r: C64, theta: C64, dy: C64, dz: C64) -> C64 {
    let denom = r * theta.sin();
    if denom.norm() <= f64::EPSILON * r.norm() {
        c(1.0, 0.0)
    } else {
        (dz + c(0.0, 1.0) * dy) / denom
    }
}

pub fn angles(params: &ModelParams, k: f64) -> Result<Angles> {
    let r = half_energy(params, k);
    if r.norm() == 0.0 {
        return Err(Error::DegenerateMomentum { k, magnitude: 0.0 });
    }
    let d = d_vector(params, k);
    let theta = (d.dx / r).acos();
    let e = phase_factor(r, theta, d.dy, d.dz);
    let phi = -c(0.0, 1.0) * e.ln();
    Ok(Angles { r, theta, phi })
}

/// Right vectors and left partners built from (theta, e^{i phi}).
pub fn vectors_from_angles(energy: C64, theta: C64, e_phi: C64) -> BiorthoEigensystem {
    let (cs, sn) = ((theta * 0.5).cos(), (theta * 0.5).sin());
    let e_minus = e_phi.inv();
    let right_plus = [cs, e_minus * sn];
    let right_minus = [sn, -e_minus * cs];
    let left_plus = [cs, e_phi * sn];
    let left_minus = [sn, -e_phi * cs];
    let conj = |v: [C64; 2]| [v[0].conj(), v[1].conj()];
    BiorthoEigensystem {
        energy,
        psi_plus: rotate(right_plus),
        psi_minus: rotate(right_minus),
        eta_plus: rotate(conj(left_plus)),
        eta_minus: rotate(conj(left_minus)),
    }
}

pub fn eigensystem(params: &ModelParams, k: f64) -> Result<BiorthoEigensystem> {
    let r = check_gap(params, k)?;
    let d = d_vector(params, k);
    let theta = (d.dx / r).acos();
    let e_phi = phase_factor(r, theta, d.dy, d.dz);
    Ok(vectors_from_angles(r, theta, e_phi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZakResult {
    pub band: Band,
    pub value: f64,
    pub nk: usize,
    pub converged: bool,
}

/// Folds an angle into (-pi, pi].
pub fn fold_angle(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Sum over m of -Im log <eta_m|psi_{m+1}>, each step folded into (-pi, pi],
/// with the loop closed back onto the first point.
pub fn wilson_loop(psi: &[[C64; 2]], eta: &[[C64; 2]]) -> f64 {
    let n = psi.len();
    assert_eq!(n, eta.len(), "psi and eta grids differ in length");
    (0..n)
        .map(|m| fold_angle(-braket(eta[m], psi[(m + 1) % n]).arg()))
        .sum()
}

fn loop_value(params: &ModelParams, band: Band, nk: usize) -> Result<f64> {
    let mut psi = Vec::with_capacity(nk);
    let mut eta = Vec::with_capacity(nk);
    for k in momentum_grid(nk) {
        let e = eigensystem(params, k)?;
        psi.push(e.psi(band));
        eta.push(e.eta(band));
    }
    Ok(wilson_loop(&psi, &eta))
}

pub fn zak_phase(params: &ModelParams, band: Band, nk: usize) -> Result<ZakResult> {
    let kind = classify(params).kind;
    if !kind.is_gapped() {
        return Err(Error::NotGapped(kind));
    }
    if nk < 64 {
        return Err(Error::InvalidArgument(format!(
            "nk must be at least 64, got {nk}"
        )));
    }
    let value = loop_value(params, band, nk)?;
    let doubled = loop_value(params, band, 2 * nk)?;
    Ok(ZakResult {
        band,
        value,
        nk,
        converged: (doubled - value).abs() < ZAK_CONVERGENCE_TOL,
    })
}

/// <eta(k)| d/dk |psi(k)> by central difference in the gauge of [`eigensystem`].
pub fn berry_connection(params: &ModelParams, band: Band, k: f64) -> Result<C64> {
    let here = eigensystem(params, k)?;
    let ahead = eigensystem(params, k + FD_STEP)?.psi(band);
    let behind = eigensystem(params, k - FD_STEP)?.psi(band);
    let deriv = [
        (ahead[0] - behind[0]) / (2.0 * FD_STEP),
        (ahead[1] - behind[1]) / (2.0 * FD_STEP),
    ];
    Ok(braket(here.eta(band), deriv))
}

/// Riemann sum of Re(i A_k) dk over the grid k_m = 2 pi m / nk.
pub fn berry_phase_integral(params: &ModelParams, band: Band, nk: usize) -> Result<f64> {
    let dk = 2.0 * PI / nk as f64;
    let mut total = 0.0;
    for k in momentum_grid(nk) {
        total += (c(0.0, 1.0) * berry_connection(params, band, k)?).re * dk;
    }
    Ok(total)
}
