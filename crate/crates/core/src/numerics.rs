//! Small dense complex linear algebra.
//!
//! Everything the physics modules need and nothing more: a row-major complex
//! matrix, a Hermitian eigensolver (Householder reduction to a real symmetric
//! tridiagonal matrix followed by implicit-shift QL), the closed-form 2×2
//! eigenproblem, 2×2 singular values and a principal square root with a fixed
//! branch for negative reals.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest dimension accepted by [`eigh`].
pub const MAX_EIGH_DIM: usize = 1024;

/// Relative off-diagonal size below which the QL sweep deflates.
const DEFLATION_TOL: f64 = 1e-14;

/// Eigenvector pairs closer than this angle are reported as defective.
const DEFECTIVE_ANGLE: f64 = 1e-8;

pub const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Square root of a real number on the principal branch: non-negative reals
/// map to the non-negative real axis, negative reals to the positive
/// imaginary axis.
pub fn principal_sqrt(x: f64) -> C64 {
    if x >= 0.0 {
        c(x.sqrt(), 0.0)
    } else {
        c(0.0, (-x).sqrt())
    }
}

/// Principal complex square root. A signed zero imaginary part is treated as
/// +0 so that negative reals always land on the positive imaginary axis.
pub fn csqrt(z: C64) -> C64 {
    if z.im == 0.0 {
        principal_sqrt(z.re)
    } else {
        z.sqrt()
    }
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(
            self.cols,
            v.len(),
            "dimension mismatch in matrix-vector product"
        );
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest |A - A^H| entry.
    pub fn hermitian_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Sesquilinear inner product <a|b> (conjugates `a`).
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// A Hermitian matrix. Construction symmetrizes the input and keeps the
/// size of the asymmetry that was removed.
#[derive(Debug, Clone)]
pub struct DenseHermitian {
    entries: CMatrix,
    asymmetry_defect: f64,
}

impl DenseHermitian {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidArgument(format!(
                "Hermitian matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if matrix.rows() == 0 || matrix.rows() > MAX_EIGH_DIM {
            return Err(Error::InvalidArgument(format!(
                "dimension {} outside 1..={MAX_EIGH_DIM}",
                matrix.rows()
            )));
        }
        let asymmetry_defect = matrix.hermitian_defect();
        let n = matrix.rows();
        let entries = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                c(matrix[(i, i)].re, 0.0)
            } else {
                (matrix[(i, j)] + matrix[(j, i)].conj()) * 0.5
            }
        });
        Ok(Self {
            entries,
            asymmetry_defect,
        })
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn asymmetry_defect(&self) -> f64 {
        self.asymmetry_defect
    }
}

/// Eigenvalues in ascending order with orthonormal eigenvectors stored as the
/// columns of `vectors`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, j: usize) -> Vec<C64> {
        self.vectors.column(j)
    }
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// Each eigenvector is rotated so that its largest-modulus component (the
/// first one on ties) is real and positive.
pub fn eigh(matrix: &DenseHermitian) -> Result<EigenDecomposition> {
    let n = matrix.dim();
    let mut a = matrix.entries().clone();
    let mut q = CMatrix::identity(n);

    householder_tridiagonalize(&mut a, &mut q);

    // Absorb the phases of the complex subdiagonal into the transform so the
    // tridiagonal matrix becomes real symmetric.
    let mut diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut off = vec![0.0; n];
    let mut phase = c(1.0, 0.0);
    let mut phases = vec![phase; n];
    for k in 0..n.saturating_sub(1) {
        let e = a[(k + 1, k)];
        let m = e.norm();
        off[k] = m;
        if m > 0.0 {
            phase *= e / m;
        }
        phases[k + 1] = phase;
    }
    for r in 0..n {
        for (j, p) in phases.iter().enumerate() {
            q[(r, j)] *= p;
        }
    }

    tridiagonal_ql(&mut diag, &mut off, &mut q)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = q.column(src);
        fix_phase(&mut col);
        for (r, z) in col.into_iter().enumerate() {
            vectors[(r, dst)] = z;
        }
    }
    Ok(EigenDecomposition { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(matrix: &DenseHermitian) -> Result<Vec<f64>> {
    eigh(matrix).map(|d| d.values)
}

fn fix_phase(v: &mut [C64]) {
    let mut best = 0;
    let mut best_norm = -1.0;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_norm {
            best = i;
            best_norm = m;
        }
    }
    if best_norm > 0.0 {
        let rot = v[best].conj() / best_norm;
        for z in v.iter_mut() {
            *z *= rot;
        }
        v[best] = c(v[best].re, 0.0);
    }
}

/// Reduces `a` in place to Hermitian tridiagonal form, accumulating the
/// unitary transform into `q` (so that a_in = q a_out q^H).
fn householder_tridiagonalize(a: &mut CMatrix, q: &mut CMatrix) {
    let n = a.rows();
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let norm = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            c(1.0, 0.0)
        };
        let alpha = -phase * norm;
        let mut v: Vec<C64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;

        // Two-sided update of the trailing block: A <- A - v w^H - w v^H.
        let p: Vec<C64> = (0..m)
            .map(|i| {
                let s: C64 = (0..m).map(|j| a[(k + 1 + i, k + 1 + j)] * v[j]).sum();
                s * tau
            })
            .collect();
        let vhp: f64 = v.iter().zip(&p).map(|(x, y)| (x.conj() * y).re).sum();
        let half = 0.5 * tau * vhp;
        let w: Vec<C64> = p.iter().zip(&v).map(|(pi, vi)| pi - vi * half).collect();
        for i in 0..m {
            for j in 0..m {
                a[(k + 1 + i, k + 1 + j)] -= v[i] * w[j].conj() + w[i] * v[j].conj();
            }
        }
        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha.conj();
        for i in k + 2..n {
            a[(i, k)] = c(0.0, 0.0);
            a[(k, i)] = c(0.0, 0.0);
        }

        for r in 0..q.rows() {
            let s: C64 = (0..m).map(|j| q[(r, k + 1 + j)] * v[j]).sum::<C64>() * tau;
            for j in 0..m {
                q[(r, k + 1 + j)] -= s * v[j].conj();
            }
        }
    }
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix (`d` diagonal,
/// `e[i]` coupling i and i+1). Rotations are applied to the columns of `z`.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut CMatrix) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let budget = 30 * n;
    let mut iterations = 0;
    for l in 0..n {
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= DEFLATION_TOL * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > budget {
                return Err(Error::NoConvergence(budget));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut cs, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = cs * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                cs = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * cs * b;
                p = s * r;
                d[i + 1] = g + p;
                g = cs * r - b;
                for k in 0..z.rows() {
                    let zf = z[(k, i + 1)];
                    let zi = z[(k, i)];
                    z[(k, i + 1)] = zi * s + zf * cs;
                    z[(k, i)] = zi * cs - zf * s;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Closed-form eigensystem of a general complex 2×2 matrix.
#[derive(Debug, Clone, Copy)]
pub struct Eig2 {
    pub values: [C64; 2],
    /// Unit-norm right eigenvectors, `vectors[i]` belongs to `values[i]`.
    pub vectors: [[C64; 2]; 2],
    /// Set when the two eigenvectors are (numerically) parallel.
    pub defective: bool,
}

pub fn eig2_complex(m: [[C64; 2]; 2]) -> Eig2 {
    let [[a, b], [cc, d]] = m;
    let zero = c(0.0, 0.0);
    if b == zero && cc == zero {
        return Eig2 {
            values: [a, d],
            vectors: [[c(1.0, 0.0), zero], [zero, c(1.0, 0.0)]],
            defective: false,
        };
    }
    let mean = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let disc = csqrt(half_diff * half_diff + b * cc);
    let values = [mean + disc, mean - disc];
    let vectors = values.map(|lam| {
        let v = if b.norm() >= cc.norm() {
            [b, lam - a]
        } else {
            [lam - d, cc]
        };
        let n = vec_norm(&v);
        [v[0] / n, v[1] / n]
    });
    let det = vectors[0][0] * vectors[1][1] - vectors[0][1] * vectors[1][0];
    Eig2 {
        values,
        vectors,
        defective: det.norm() < DEFECTIVE_ANGLE,
    }
}

/// Singular values (descending) of a complex 2×2 matrix.
pub fn singular_values_2x2(m: [[C64; 2]; 2]) -> [f64; 2] {
    let frob2: f64 = m.iter().flatten().map(|z| z.norm_sqr()).sum();
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).norm();
    let root = (frob2 * frob2 - 4.0 * det * det).max(0.0).sqrt();
    let s1 = ((frob2 + root) * 0.5).sqrt();
    let s2 = if s1 > 0.0 { det / s1 } else { 0.0 };
    [s1, s2]
}
