//! Complex Bogoliubov coefficients and the closed-chain ground-state energy.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{dispersion, half_energy, momentum_grid, radicand, ModelParams, REALITY_TOL};
use crate::numerics::{c, csqrt, principal_sqrt, C64};
use crate::phases::CRITICAL_RADICAND_TOL;

/// |sin k| at or below this counts as k in {0, pi}.
pub const SIN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovCoefficients {
    pub xi: C64,
    pub eta: C64,
    pub k: f64,
    pub level_real: bool,
}

impl BogoliubovCoefficients {
    pub fn closure(&self) -> C64 {
        self.xi * self.xi + self.eta * self.eta
    }

    /// Both coefficients real within 1e-10.
    pub fn coefficients_real(&self) -> bool {
        let real = |z: C64| z.im.abs() <= REALITY_TOL * z.norm().max(1.0);
        real(self.xi) && real(self.eta)
    }
}

/// xi = sgn(sin k) sqrt((z + r) / 2r), eta = |sin k| sqrt(P) / sqrt(2r (r + z))
/// with z = mu - t cos k and r = eps_k / 2.
pub fn coefficients(params: &ModelParams, k: f64) -> Result<BogoliubovCoefficients> {
    let (s, co) = k.sin_cos();
    if s.abs() <= SIN_TOL {
        return Err(Error::InvalidArgument(format!(
            "k = {k} has no pairing partner; the mode is a bare fermion"
        )));
    }
    let p = params.pairing_product();
    if p == 0.0 {
        return Err(Error::InvalidArgument("pairing product vanishes".into()));
    }
    let scale = params.energy_scale();
    let rad = radicand(params, k);
    if rad.abs() <= CRITICAL_RADICAND_TOL * scale * scale {
        return Err(Error::DegenerateMomentum {
            k,
            magnitude: 2.0 * rad.abs().sqrt(),
        });
    }
    let r = half_energy(params, k);
    let z = c(params.mu() - params.t() * co, 0.0);
    // (r + z)(r - z) = P sin² k; take whichever factor avoids cancellation
    let (plus, minus) = (r + z, r - z);
    let r_plus_z = if plus.norm() >= minus.norm() {
        plus
    } else {
        c(p * s * s, 0.0) / minus
    };
    let xi = csqrt(r_plus_z / (r * 2.0)) * s.signum();
    let eta = principal_sqrt(p) * s.abs() / csqrt(r * 2.0 * r_plus_z);
    Ok(BogoliubovCoefficients {
        xi,
        eta,
        k,
        level_real: dispersion(params, k).is_real,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelSymmetry {
    RealLevel,
    ImaginaryLevel,
}

/// sqrt(delta_b / delta_a) xi conj(eta): real exactly when the level is real,
/// for either sign of the pairing product. For a positive product it is real
/// precisely when xi and eta are.
pub fn reality_witness(params: &ModelParams, coeffs: &BogoliubovCoefficients) -> C64 {
    let ratio = csqrt(c(params.delta_b() / params.delta_a(), 0.0));
    ratio * coeffs.xi * coeffs.eta.conj()
}

pub fn symmetry_indicator(params: &ModelParams, k: f64) -> Result<LevelSymmetry> {
    let coeffs = coefficients(params, k)?;
    let w = reality_witness(params, &coeffs);
    Ok(if w.im.abs() <= REALITY_TOL * w.norm().max(1.0) {
        LevelSymmetry::RealLevel
    } else {
        LevelSymmetry::ImaginaryLevel
    })
}

/// |conj(xi) - sgn(z) sgn(sin k) eta| with z = mu - t cos k. At an imaginary
/// level eta² = conj(xi²); on principal branches the remaining sign is sgn(z).
pub fn broken_relation_residual(params: &ModelParams, k: f64) -> Result<f64> {
    let co = coefficients(params, k)?;
    let z = params.mu() - params.t() * k.cos();
    Ok((co.xi.conj() - co.eta * k.sin().signum() * z.signum()).norm())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateEnergy {
    pub value: C64,
    pub n_sites: usize,
    /// Grid momenta at which the dispersion vanishes with a coalescing pair.
    pub ep_momenta: Vec<f64>,
}

/// -(1/2) sum_m eps_{k_m} on k_m = 2 pi m / n. At k = 0, pi the bare mode
/// contributes -|mu - t cos k|, its lower occupation.
pub fn ground_state_energy(params: &ModelParams, n_sites: usize) -> Result<GroundStateEnergy> {
    if n_sites < 2 {
        return Err(Error::InvalidArgument(format!(
            "n_sites must be at least 2, got {n_sites}"
        )));
    }
    let scale = params.energy_scale();
    let mut value = c(0.0, 0.0);
    let mut ep_momenta = Vec::new();
    for k in momentum_grid(n_sites) {
        value -= dispersion(params, k).epsilon * 0.5;
        let rad = radicand(params, k);
        let bare = k.sin().abs() <= SIN_TOL;
        if !bare
            && rad.abs() <= CRITICAL_RADICAND_TOL * scale * scale
            && params.pairing_product() != 0.0
        {
            ep_momenta.push(k);
        }
    }
    Ok(GroundStateEnergy {
        value,
        n_sites,
        ep_momenta,
    })
}

/// -(1/4 pi) times the integral of eps_k over the zone, by the trapezoid rule on
/// `nk` points (exact to spectral accuracy for a gapped, periodic integrand).
pub fn ground_energy_density(params: &ModelParams, nk: usize) -> C64 {
    let sum: C64 = momentum_grid(nk)
        .map(|k| dispersion(params, k).epsilon)
        .sum();
    -sum * (2.0 * PI / nk as f64) / (4.0 * PI)
}
