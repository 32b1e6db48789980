//! Model parameters and the momentum-space objects of the chain: the Nambu
//! core matrix h_k, its Pauli decomposition d(k), the quasiparticle
//! dispersion and the Hermitian counterpart obtained by a diagonal
//! similarity.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::numerics::{c, eig2_complex, principal_sqrt, C64};

/// A level counts as real when |Im eps| <= REALITY_TOL * max(1, |eps|).
pub const REALITY_TOL: f64 = 1e-10;

/// Couplings of the chain: hopping `t`, chemical potential `mu`, pair
/// creation `delta_a` and pair annihilation `delta_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    t: f64,
    mu: f64,
    delta_a: f64,
    delta_b: f64,
}

impl ModelParams {
    pub fn new(t: f64, mu: f64, delta_a: f64, delta_b: f64) -> Result<Self> {
        if ![t, mu, delta_a, delta_b].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "all couplings must be finite (t={t}, mu={mu}, delta_a={delta_a}, delta_b={delta_b})"
            )));
        }
        if t == 0.0 {
            return Err(Error::InvalidParams("hopping t must be nonzero".into()));
        }
        Ok(Self {
            t,
            mu,
            delta_a,
            delta_b,
        })
    }

    /// Balanced (Hermitian) pairing `delta_a = delta_b = delta`.
    pub fn balanced(t: f64, mu: f64, delta: f64) -> Result<Self> {
        Self::new(t, mu, delta, delta)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn delta_a(&self) -> f64 {
        self.delta_a
    }

    pub fn delta_b(&self) -> f64 {
        self.delta_b
    }

    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Self::new(self.t, mu, self.delta_a, self.delta_b)
    }

    pub fn with_pairing(&self, delta_a: f64, delta_b: f64) -> Result<Self> {
        Self::new(self.t, self.mu, delta_a, delta_b)
    }

    pub fn pairing_product(&self) -> f64 {
        self.delta_a * self.delta_b
    }

    pub fn is_balanced(&self) -> bool {
        self.delta_a == self.delta_b
    }

    /// sgn(delta_a) * sqrt(delta_a * delta_b): the pairing amplitude of the
    /// Hermitian counterpart. `None` unless the product is positive.
    pub fn counterpart_pairing(&self) -> Option<f64> {
        let p = self.pairing_product();
        (p > 0.0).then(|| p.sqrt().copysign(self.delta_a))
    }

    /// Largest coupling magnitude; sets the scale of absolute tolerances.
    pub fn energy_scale(&self) -> f64 {
        [self.t, self.mu, self.delta_a, self.delta_b]
            .iter()
            .fold(0.0_f64, |m, x| m.max(x.abs()))
    }
}

/// The 2×2 core matrix in the Nambu basis (c_k, c†_{-k}).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochMatrix {
    pub entries: [[C64; 2]; 2],
}

impl BlochMatrix {
    pub fn adjoint(&self) -> Self {
        let e = self.entries;
        Self {
            entries: [
                [e[0][0].conj(), e[1][0].conj()],
                [e[0][1].conj(), e[1][1].conj()],
            ],
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let e = self.entries;
        [
            e[0][0] * v[0] + e[0][1] * v[1],
            e[1][0] * v[0] + e[1][1] * v[1],
        ]
    }

    /// Eigenvalues from the closed-form quadratic.
    pub fn eigenvalues(&self) -> [C64; 2] {
        eig2_complex(self.entries).values
    }
}

/// Complex vector d(k) with h_k = d · sigma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DVector3 {
    pub dx: C64,
    pub dy: C64,
    pub dz: C64,
}

impl DVector3 {
    /// d_x sigma_x + d_y sigma_y + d_z sigma_z.
    pub fn to_bloch(&self) -> BlochMatrix {
        let i = c(0.0, 1.0);
        BlochMatrix {
            entries: [
                [self.dz, self.dx - i * self.dy],
                [self.dx + i * self.dy, -self.dz],
            ],
        }
    }

    /// Bilinear square d·d (no conjugation).
    pub fn square(&self) -> C64 {
        self.dx * self.dx + self.dy * self.dy + self.dz * self.dz
    }
}

/// Quasiparticle energy eps_k on the principal branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion {
    pub epsilon: C64,
    pub is_real: bool,
}

pub fn build_bloch(params: &ModelParams, k: f64) -> BlochMatrix {
    let (s, co) = k.sin_cos();
    let z = params.mu - params.t * co;
    BlochMatrix {
        entries: [
            [c(z, 0.0), c(0.0, -params.delta_a * s)],
            [c(0.0, params.delta_b * s), c(-z, 0.0)],
        ],
    }
}

pub fn d_vector(params: &ModelParams, k: f64) -> DVector3 {
    let (s, co) = k.sin_cos();
    DVector3 {
        dx: c(0.0, -0.5 * (params.delta_a - params.delta_b) * s),
        dy: c(0.5 * (params.delta_a + params.delta_b) * s, 0.0),
        dz: c(params.mu - params.t * co, 0.0),
    }
}

/// (mu - t cos k)^2 + delta_a delta_b sin^2 k, i.e. (eps_k / 2)^2.
pub fn radicand(params: &ModelParams, k: f64) -> f64 {
    let (s, co) = k.sin_cos();
    let z = params.mu - params.t * co;
    z * z + params.pairing_product() * s * s
}

/// eps_k / 2, the eigenvalue magnitude of h_k.
pub fn half_energy(params: &ModelParams, k: f64) -> C64 {
    principal_sqrt(radicand(params, k))
}

pub fn dispersion(params: &ModelParams, k: f64) -> Dispersion {
    let epsilon = half_energy(params, k) * 2.0;
    Dispersion {
        epsilon,
        is_real: epsilon.im.abs() <= REALITY_TOL * epsilon.norm().max(1.0),
    }
}

/// Hermitian matrix isospectral to h_k, defined for a positive pairing
/// product. The off-diagonal amplitude carries the sign of delta_a so that it
/// is exactly the image of h_k under [`similarity_transform`].
pub fn hermitian_counterpart_bloch(params: &ModelParams, k: f64) -> Result<BlochMatrix> {
    let g = params
        .counterpart_pairing()
        .ok_or(Error::NonPositivePairing(params.pairing_product()))?;
    let (s, co) = k.sin_cos();
    let z = params.mu - params.t * co;
    Ok(BlochMatrix {
        entries: [[c(z, 0.0), c(0.0, -g * s)], [c(0.0, g * s), c(-z, 0.0)]],
    })
}

/// Diagonal similarity U with U h_k U^{-1} equal to the Hermitian counterpart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalSimilarity {
    pub diag: [C64; 2],
}

impl DiagonalSimilarity {
    pub fn conjugate(&self, h: &BlochMatrix) -> BlochMatrix {
        let [u0, u1] = self.diag;
        let e = h.entries;
        BlochMatrix {
            entries: [[e[0][0], e[0][1] * u0 / u1], [e[1][0] * u1 / u0, e[1][1]]],
        }
    }

    pub fn matrix(&self) -> [[C64; 2]; 2] {
        [[self.diag[0], c(0.0, 0.0)], [c(0.0, 0.0), self.diag[1]]]
    }
}

/// U = diag((delta_b/delta_a)^(1/4), (delta_a/delta_b)^(1/4)).
pub fn similarity_transform(params: &ModelParams) -> Result<DiagonalSimilarity> {
    let p = params.pairing_product();
    if p <= 0.0 {
        return Err(Error::NonPositivePairing(p));
    }
    let ratio = params.delta_b / params.delta_a;
    Ok(DiagonalSimilarity {
        diag: [c(ratio.powf(0.25), 0.0), c(ratio.powf(-0.25), 0.0)],
    })
}

/// Momenta k_m = 2 pi m / nk, m = 0..nk.
pub fn momentum_grid(nk: usize) -> impl Iterator<Item = f64> + Clone {
    (0..nk).map(move |m| TAU * m as f64 / nk as f64)
}
