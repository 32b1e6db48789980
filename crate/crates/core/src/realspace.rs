//! Open chain: single-particle (adjoint-action) matrices, Majorana ladder,
//! analytic zero modes and edge-state profiles.
//!
//! A linear operator O = sum_j u_j c†_j + v_j c_j is stored as the vector
//! (u_1..u_N, v_1..v_N); a matrix X represents [H, O] = sum (X (u, v))·(c†, c).
//! In the Majorana basis (a_1, b_1, .., a_N, b_N), a_j = c†_j + c_j and
//! b_j = -i(c†_j - c_j). Kernel vectors are zero modes.

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::numerics::{c, eigh, eigvalsh, CMatrix, DenseHermitian, C64};

/// Relative tolerance for |sqrt(delta_a delta_b)| = |t| in the analytic case.
pub const ANALYTIC_TOL: f64 = 1e-12;
/// |E| below this counts as a midgap level.
pub const MIDGAP_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnergyUnit {
    /// Eigenvalues of the ladder with couplings t ± g and 2 mu.
    #[default]
    Quarter,
    /// Quarter-unit values divided by four.
    Coefficient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpenChainSystem {
    pub n_sites: usize,
    pub params: ModelParams,
    /// Adjoint action of the chain Hamiltonian on (c†, c) coefficients.
    pub h_nonhermitian: CMatrix,
    /// Adjoint action of the Hermitian counterpart on (c†, c) coefficients.
    pub h_counterpart: CMatrix,
    /// Adjoint action of the counterpart on (a_1, b_1, .., a_N, b_N) coefficients.
    pub m_majorana: CMatrix,
}

fn a_idx(j: usize) -> usize {
    2 * j
}

fn b_idx(j: usize) -> usize {
    2 * j + 1
}

fn require_positive_product(params: &ModelParams) -> Result<f64> {
    params
        .counterpart_pairing()
        .ok_or(Error::NonPositivePairing(params.pairing_product()))
}

/// (delta_b / delta_a)^(1/4), the c† weight of the similarity S.
fn similarity_weight(params: &ModelParams) -> f64 {
    (params.delta_b() / params.delta_a()).powf(0.25)
}

/// [[A, x K], [-y K, D]] with A = 2 mu - t T, D = -A, K_{j,j+1} = -1, K_{j+1,j} = 1.
fn coefficient_matrix(params: &ModelParams, n: usize, x: f64, y: f64) -> CMatrix {
    let (t, mu) = (params.t(), params.mu());
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        m[(j, j)] = c(2.0 * mu, 0.0);
        m[(n + j, n + j)] = c(-2.0 * mu, 0.0);
    }
    for j in 0..n - 1 {
        m[(j, j + 1)] = c(-t, 0.0);
        m[(j + 1, j)] = c(-t, 0.0);
        m[(n + j, n + j + 1)] = c(t, 0.0);
        m[(n + j + 1, n + j)] = c(t, 0.0);
        m[(j, n + j + 1)] = c(-x, 0.0);
        m[(j + 1, n + j)] = c(x, 0.0);
        m[(n + j, j + 1)] = c(y, 0.0);
        m[(n + j + 1, j)] = c(-y, 0.0);
    }
    m
}

fn majorana_matrix(params: &ModelParams, g: f64, n: usize) -> CMatrix {
    let (t, mu) = (params.t(), params.mu());
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        m[(a_idx(j), b_idx(j))] = c(0.0, -2.0 * mu);
        m[(b_idx(j), a_idx(j))] = c(0.0, 2.0 * mu);
    }
    for j in 0..n - 1 {
        m[(b_idx(j), a_idx(j + 1))] = c(0.0, -(t + g));
        m[(a_idx(j + 1), b_idx(j))] = c(0.0, t + g);
        m[(b_idx(j + 1), a_idx(j))] = c(0.0, -(t - g));
        m[(a_idx(j), b_idx(j + 1))] = c(0.0, t - g);
    }
    m
}

pub fn build_system(params: &ModelParams, n_sites: usize) -> Result<OpenChainSystem> {
    let g = require_positive_product(params)?;
    if n_sites < 2 {
        return Err(Error::InvalidArgument(format!(
            "open chain needs at least 2 sites, got {n_sites}"
        )));
    }
    if 2 * n_sites > crate::numerics::MAX_EIGH_DIM {
        return Err(Error::InvalidArgument(format!(
            "n_sites = {n_sites} exceeds the eigensolver limit of {}",
            crate::numerics::MAX_EIGH_DIM / 2
        )));
    }
    Ok(OpenChainSystem {
        n_sites,
        params: *params,
        h_nonhermitian: coefficient_matrix(params, n_sites, params.delta_a(), params.delta_b()),
        h_counterpart: coefficient_matrix(params, n_sites, g, g),
        m_majorana: majorana_matrix(params, g, n_sites),
    })
}

impl OpenChainSystem {
    /// Diagonal of S with S h_nonhermitian S^{-1} = h_counterpart.
    pub fn similarity_diagonal(&self) -> Vec<f64> {
        let w = similarity_weight(&self.params);
        let n = self.n_sites;
        (0..2 * n)
            .map(|i| if i < n { w } else { 1.0 / w })
            .collect()
    }
}

/// Sorted eigenvalues of the Majorana ladder.
pub fn open_spectrum(system: &OpenChainSystem, unit: EnergyUnit) -> Result<Vec<f64>> {
    let mut values = eigvalsh(&DenseHermitian::new(system.m_majorana.clone())?)?;
    if unit == EnergyUnit::Coefficient {
        values.iter_mut().for_each(|v| *v *= 0.25);
    }
    Ok(values)
}

pub fn midgap_count(spectrum: &[f64], threshold: f64) -> usize {
    spectrum.iter().filter(|e| e.abs() < threshold).count()
}

pub fn isospectral_check(params: &ModelParams, n_sites: usize) -> Result<f64> {
    let sys = build_system(params, n_sites)?;
    let s = sys.similarity_diagonal();
    let dim = 2 * n_sites;
    let mut worst = 0.0_f64;
    for i in 0..dim {
        for j in 0..dim {
            let conj = sys.h_nonhermitian[(i, j)] * (s[i] / s[j]);
            worst = worst.max((conj - sys.h_counterpart[(i, j)]).norm());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// (a_1, b_1, .., a_N, b_N)
    Majorana,
    /// (c†_1 .. c†_N, c_1 .. c_N)
    Fermion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroModeKind {
    MajoranaPlus,
    MajoranaMinus,
    Fermionic,
    CanonicalBar,
    Canonical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroModeVector {
    pub coefficients: Vec<C64>,
    pub basis: Basis,
    /// Sum of squared geometric amplitudes, (r^{2N} - 1) / (r² - 1) with r = mu/t.
    pub normalization: f64,
    pub kind: ZeroModeKind,
}

impl ZeroModeVector {
    /// ‖X v‖₂ with X the matrix under which this mode should be a zero mode:
    /// the ladder for f_±, the counterpart for f_N and the chain Hamiltonian for
    /// the canonical pair.
    pub fn residual(&self, system: &OpenChainSystem) -> f64 {
        let m = match self.kind {
            ZeroModeKind::MajoranaPlus | ZeroModeKind::MajoranaMinus => &system.m_majorana,
            ZeroModeKind::Fermionic => &system.h_counterpart,
            ZeroModeKind::CanonicalBar | ZeroModeKind::Canonical => &system.h_nonhermitian,
        };
        crate::numerics::vec_norm(&m.mul_vec(&self.coefficients))
    }

    pub fn to_majorana(&self) -> Vec<C64> {
        match self.basis {
            Basis::Majorana => self.coefficients.clone(),
            Basis::Fermion => fermion_to_majorana(&self.coefficients),
        }
    }

    pub fn to_fermion(&self) -> Vec<C64> {
        match self.basis {
            Basis::Fermion => self.coefficients.clone(),
            Basis::Majorana => majorana_to_fermion(&self.coefficients),
        }
    }
}

/// (w_a, w_b) per site -> u = w_a - i w_b, v = w_a + i w_b.
pub fn majorana_to_fermion(w: &[C64]) -> Vec<C64> {
    let n = w.len() / 2;
    let i = c(0.0, 1.0);
    let mut out = vec![c(0.0, 0.0); 2 * n];
    for j in 0..n {
        out[j] = w[a_idx(j)] - i * w[b_idx(j)];
        out[n + j] = w[a_idx(j)] + i * w[b_idx(j)];
    }
    out
}

pub fn fermion_to_majorana(uv: &[C64]) -> Vec<C64> {
    let n = uv.len() / 2;
    let i = c(0.0, 1.0);
    let mut out = vec![c(0.0, 0.0); 2 * n];
    for j in 0..n {
        out[a_idx(j)] = (uv[j] + uv[n + j]) * 0.5;
        out[b_idx(j)] = (uv[n + j] - uv[j]) * (0.5 / i);
    }
    out
}

/// {O1, O2} for operators in the (c†, c) basis.
pub fn bracket(x: &[C64], y: &[C64]) -> C64 {
    let n = x.len() / 2;
    (0..n).map(|j| x[j] * y[n + j] + x[n + j] * y[j]).sum()
}

/// {O1, O2} for operators in the Majorana basis.
pub fn majorana_bracket(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a * b * 2.0).sum()
}

/// (r^N - 1)/(r - 1), the constant printed with the edge profiles.
pub fn omega(r: f64, n: usize) -> f64 {
    if r == 1.0 {
        n as f64
    } else {
        (r.powi(n as i32) - 1.0) / (r - 1.0)
    }
}

/// (r^{2N} - 1)/(r² - 1), the squared norm of the geometric profile.
pub fn omega_prime(r: f64, n: usize) -> f64 {
    if r * r == 1.0 {
        n as f64
    } else {
        (r.powi(2 * n as i32) - 1.0) / (r * r - 1.0)
    }
}

struct AnalyticProfile {
    /// a-site amplitudes of f_+ (unnormalized).
    alpha: Vec<f64>,
    /// b-site amplitudes of f_- (unnormalized).
    beta: Vec<f64>,
    norm2: f64,
}

/// The case |sqrt(delta_a delta_b)| = |t| with |mu/t| < 1, where the ladder
/// splits into decoupled SSH chains.
fn analytic_profile(params: &ModelParams, n: usize) -> Result<AnalyticProfile> {
    let g = require_positive_product(params)?;
    let t = params.t();
    if (g.abs() - t.abs()).abs() > ANALYTIC_TOL * t.abs() {
        return Err(Error::NotAnalytic(format!(
            "requires sqrt(delta_a delta_b) = |t|, got {} vs {}",
            g.abs(),
            t.abs()
        )));
    }
    let r = params.mu() / t;
    if r.abs() >= 1.0 {
        return Err(Error::NotAnalytic(format!(
            "no zero mode for |mu/t| >= 1 (mu/t = {r})"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "open chain needs at least 2 sites, got {n}"
        )));
    }
    let mut geometric = vec![1.0; n];
    for j in 1..n {
        geometric[j] = geometric[j - 1] * r;
    }
    let reversed: Vec<f64> = geometric.iter().rev().copied().collect();
    let norm2 = geometric.iter().map(|x| x * x).sum();
    let (alpha, beta) = if g.signum() == t.signum() {
        (geometric, reversed)
    } else {
        (reversed, geometric)
    };
    Ok(AnalyticProfile { alpha, beta, norm2 })
}

/// f_+ (a sites), f_- (b sites) and f_N = (f_+ - i f_-)/2 in the (c†, c) basis.
pub fn zero_mode_f(
    params: &ModelParams,
    n_sites: usize,
) -> Result<(ZeroModeVector, ZeroModeVector, ZeroModeVector)> {
    let prof = analytic_profile(params, n_sites)?;
    let scale = 1.0 / prof.norm2.sqrt();
    let n = n_sites;
    let mut plus = vec![c(0.0, 0.0); 2 * n];
    let mut minus = vec![c(0.0, 0.0); 2 * n];
    for j in 0..n {
        plus[a_idx(j)] = c(prof.alpha[j] * scale, 0.0);
        minus[b_idx(j)] = c(prof.beta[j] * scale, 0.0);
    }
    let mut fn_uv = vec![c(0.0, 0.0); 2 * n];
    for j in 0..n {
        let (a, b) = (prof.alpha[j] * scale, prof.beta[j] * scale);
        fn_uv[j] = c(0.5 * (a - b), 0.0);
        fn_uv[n + j] = c(0.5 * (a + b), 0.0);
    }
    let mk = |coefficients, basis, kind| ZeroModeVector {
        coefficients,
        basis,
        normalization: prof.norm2,
        kind,
    };
    Ok((
        mk(plus, Basis::Majorana, ZeroModeKind::MajoranaPlus),
        mk(minus, Basis::Majorana, ZeroModeKind::MajoranaMinus),
        mk(fn_uv, Basis::Fermion, ZeroModeKind::Fermionic),
    ))
}

/// The pair (bar F_N, F_N) for the chain Hamiltonian: f_N^† and f_N with c†
/// coefficients weighted by (delta_a/delta_b)^(1/4) and c coefficients by
/// (delta_b/delta_a)^(1/4).
pub fn canonical_zero_modes(
    params: &ModelParams,
    n_sites: usize,
) -> Result<(ZeroModeVector, ZeroModeVector)> {
    let prof = analytic_profile(params, n_sites)?;
    let scale = 1.0 / prof.norm2.sqrt();
    let w = similarity_weight(params);
    let n = n_sites;
    let mut bar = vec![c(0.0, 0.0); 2 * n];
    let mut plain = vec![c(0.0, 0.0); 2 * n];
    for j in 0..n {
        let (a, b) = (prof.alpha[j] * scale, prof.beta[j] * scale);
        bar[j] = c(0.5 * (a + b) / w, 0.0);
        bar[n + j] = c(0.5 * (a - b) * w, 0.0);
        plain[j] = c(0.5 * (a - b) / w, 0.0);
        plain[n + j] = c(0.5 * (a + b) * w, 0.0);
    }
    let mk = |coefficients, kind| ZeroModeVector {
        coefficients,
        basis: Basis::Fermion,
        normalization: prof.norm2,
        kind,
    };
    Ok((
        mk(bar, ZeroModeKind::CanonicalBar),
        mk(plain, ZeroModeKind::Canonical),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeProfile {
    pub amplitudes_left: Vec<f64>,
    pub amplitudes_right: Vec<f64>,
    /// mu / t
    pub decay_ratio: f64,
    /// (r^N - 1)/(r - 1)
    pub omega: f64,
    /// (r^{2N} - 1)/(r² - 1)
    pub omega_prime: f64,
}

/// psi_L = sqrt(delta_b / (2 Omega delta_a)) sum_j r^{j-1} |j>, psi_R its reflection.
pub fn edge_states(params: &ModelParams, n_sites: usize) -> Result<EdgeProfile> {
    analytic_profile(params, n_sites)?;
    let r = params.mu() / params.t();
    let om = omega(r, n_sites);
    let pref = (params.delta_b() / (2.0 * om * params.delta_a())).sqrt();
    let mut left = vec![pref; n_sites];
    for j in 1..n_sites {
        left[j] = left[j - 1] * r;
    }
    let right = left.iter().rev().copied().collect();
    Ok(EdgeProfile {
        amplitudes_left: left,
        amplitudes_right: right,
        decay_ratio: r,
        omega: om,
        omega_prime: omega_prime(r, n_sites),
    })
}

fn orthonormal_pair(x: &[C64], y: &[C64]) -> (Vec<C64>, Vec<C64>) {
    use crate::numerics::{inner, vec_norm};
    let nx = vec_norm(x);
    let e1: Vec<C64> = x.iter().map(|v| v / nx).collect();
    let proj = inner(&e1, y);
    let rest: Vec<C64> = y.iter().zip(&e1).map(|(v, e)| v - proj * e).collect();
    let nr = vec_norm(&rest);
    let e2 = rest.iter().map(|v| v / nr).collect();
    (e1, e2)
}

/// Smallest squared principal-angle cosine between span{psi_L, psi_R} and the
/// c† components of the two counterpart eigenvectors closest to zero energy.
pub fn kernel_overlap(params: &ModelParams, n_sites: usize) -> Result<f64> {
    use crate::numerics::{inner, singular_values_2x2};
    let edge = edge_states(params, n_sites)?;
    let sys = build_system(params, n_sites)?;
    let dec = eigh(&DenseHermitian::new(sys.h_counterpart.clone())?)?;
    let mut order: Vec<usize> = (0..dec.values.len()).collect();
    order.sort_by(|&i, &j| dec.values[i].abs().total_cmp(&dec.values[j].abs()));
    let head = |j: usize| dec.vector(order[j])[..n_sites].to_vec();
    let (k1, k2) = orthonormal_pair(&head(0), &head(1));
    let to_c = |v: &[f64]| v.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>();
    let (e1, e2) = orthonormal_pair(&to_c(&edge.amplitudes_left), &to_c(&edge.amplitudes_right));
    let q = [
        [inner(&k1, &e1), inner(&k1, &e2)],
        [inner(&k2, &e1), inner(&k2, &e2)],
    ];
    let [_, smin] = singular_values_2x2(q);
    Ok(smin * smin)
}
