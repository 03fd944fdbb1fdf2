//! Fixed-size real and complex matrix kernels.
//!
//! Everything here is sized for a two-mode phase space: 2×2 blocks, 4×4
//! covariance matrices and the 8×8 real embedding of a 4×4 Hermitian
//! matrix. A single cyclic Jacobi kernel handles every symmetric
//! eigenproblem.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Off-diagonal convergence threshold for the Jacobi kernel, relative to the
/// Frobenius norm of the input.
pub const JACOBI_TOL: f64 = 1e-14;

/// Default relative tolerance for positive-semidefiniteness decisions.
pub const PSD_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

/// The symplectic form on one mode.
pub const J: Mat2 = Mat2([[0.0, 1.0], [-1.0, 0.0]]);

/// A general real 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);
    pub const ZERO: Mat2 = Mat2([[0.0; 2]; 2]);

    pub fn new(m00: f64, m01: f64, m10: f64, m11: f64) -> Self {
        Mat2([[m00, m01], [m10, m11]])
    }

    pub fn diag(x: f64, y: f64) -> Self {
        Mat2([[x, 0.0], [0.0, y]])
    }

    /// Proper rotation `[[cos θ, sin θ], [-sin θ, cos θ]]`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Mat2([[c, s], [-s, c]])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn det(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }

    pub fn add(&self, rhs: &Mat2) -> Mat2 {
        self.zip(rhs, |x, y| x + y)
    }

    pub fn sub(&self, rhs: &Mat2) -> Mat2 {
        self.zip(rhs, |x, y| x - y)
    }

    pub fn scale(&self, s: f64) -> Mat2 {
        let m = &self.0;
        Mat2([[s * m[0][0], s * m[0][1]], [s * m[1][0], s * m[1][1]]])
    }

    /// `M · v`.
    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    /// `S · M · Tᵀ`.
    pub fn congruence(&self, s: &Mat2, t: &Mat2) -> Mat2 {
        s.mul(self).mul(&t.transpose())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    pub fn max_abs_diff(&self, rhs: &Mat2) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(rhs.0.iter().flatten())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    fn zip(&self, rhs: &Mat2, f: impl Fn(f64, f64) -> f64) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [f(a[0][0], b[0][0]), f(a[0][1], b[0][1])],
            [f(a[1][0], b[1][0]), f(a[1][1], b[1][1])],
        ])
    }
}

/// Real symmetric 2×2 matrix. Only the upper triangle is stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymMat2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl SymMat2 {
    pub fn new(xx: f64, xy: f64, yy: f64) -> Self {
        SymMat2 { xx, xy, yy }
    }

    pub fn to_mat2(&self) -> Mat2 {
        Mat2([[self.xx, self.xy], [self.xy, self.yy]])
    }

    /// Symmetric part of a general 2×2 matrix.
    pub fn from_mat2(m: &Mat2) -> Self {
        SymMat2::new(m.0[0][0], 0.5 * (m.0[0][1] + m.0[1][0]), m.0[1][1])
    }

    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn trace(&self) -> f64 {
        self.xx + self.yy
    }

    /// `S · M · Sᵀ`, symmetric again by construction.
    pub fn congruence(&self, s: &Mat2) -> SymMat2 {
        SymMat2::from_mat2(&self.to_mat2().congruence(s, s))
    }

    /// Quadratic form `vᵀ M v`.
    pub fn quad(&self, v: [f64; 2]) -> f64 {
        self.xx * v[0] * v[0] + 2.0 * self.xy * v[0] * v[1] + self.yy * v[1] * v[1]
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let mean = 0.5 * (self.xx + self.yy);
        let half_diff = 0.5 * (self.xx - self.yy);
        let r = half_diff.hypot(self.xy);
        [mean - r, mean + r]
    }
}

/// Real symmetric 4×4 matrix, stored in full with exact mirror symmetry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymMat4([[f64; 4]; 4]);

impl SymMat4 {
    pub const ZERO: SymMat4 = SymMat4([[0.0; 4]; 4]);

    pub fn identity() -> Self {
        Self::diag([1.0; 4])
    }

    pub fn diag(d: [f64; 4]) -> Self {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            m[i][i] = d[i];
        }
        SymMat4(m)
    }

    /// Builds from the upper triangle of `rows`; the lower triangle is ignored.
    pub fn from_upper(rows: [[f64; 4]; 4]) -> Self {
        let mut m = rows;
        for i in 0..4 {
            for j in 0..i {
                m[i][j] = m[j][i];
            }
        }
        SymMat4(m)
    }

    /// Builds from a full matrix, replacing it by `(M + Mᵀ)/2`.
    pub fn symmetrize(rows: [[f64; 4]; 4]) -> Self {
        let mut m = rows;
        for i in 0..4 {
            for j in 0..i {
                let avg = 0.5 * (rows[i][j] + rows[j][i]);
                m[i][j] = avg;
                m[j][i] = avg;
            }
        }
        SymMat4(m)
    }

    /// Largest `|M_ij - M_ji|` of a raw 4×4 array.
    pub fn asymmetry(rows: &[[f64; 4]; 4]) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..4 {
            for j in 0..i {
                worst = worst.max((rows[i][j] - rows[j][i]).abs());
            }
        }
        worst
    }

    /// Assembles `[[A, C], [Cᵀ, B]]`.
    pub fn from_blocks(a: &SymMat2, b: &SymMat2, c: &Mat2) -> Self {
        let (a, b, c) = (a.to_mat2().0, b.to_mat2().0, c.0);
        let mut m = [[0.0; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][j];
                m[i + 2][j + 2] = b[i][j];
                m[i][j + 2] = c[i][j];
                m[j + 2][i] = c[i][j];
            }
        }
        SymMat4(m)
    }

    pub fn rows(&self) -> &[[f64; 4]; 4] {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn block_a(&self) -> SymMat2 {
        SymMat2::new(self.0[0][0], self.0[0][1], self.0[1][1])
    }

    pub fn block_b(&self) -> SymMat2 {
        SymMat2::new(self.0[2][2], self.0[2][3], self.0[3][3])
    }

    pub fn block_c(&self) -> Mat2 {
        Mat2([[self.0[0][2], self.0[0][3]], [self.0[1][2], self.0[1][3]]])
    }

    pub fn add(&self, rhs: &SymMat4) -> SymMat4 {
        self.zip(rhs, |x, y| x + y)
    }

    pub fn sub(&self, rhs: &SymMat4) -> SymMat4 {
        self.zip(rhs, |x, y| x - y)
    }

    pub fn scale(&self, s: f64) -> SymMat4 {
        self.zip(self, |x, _| s * x)
    }

    /// `M + s·I`.
    pub fn shift(&self, s: f64) -> SymMat4 {
        let mut m = self.0;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += s;
        }
        SymMat4(m)
    }

    /// Quadratic form `vᵀ M v`.
    pub fn quad(&self, v: [f64; 4]) -> f64 {
        let mut acc = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                acc += v[i] * self.0[i][j] * v[j];
            }
        }
        acc
    }

    pub fn apply(&self, v: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|j| self.0[i][j] * v[j]).sum();
        }
        out
    }

    /// Maximum absolute row sum; cheap upper bound on the spectral norm.
    pub fn norm_inf(&self) -> f64 {
        self.0
            .iter()
            .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn norm_fro(&self) -> f64 {
        self.0.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, rhs: &SymMat4) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(rhs.0.iter().flatten())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    /// Determinant by cofactor expansion along 2×2 minors.
    pub fn det(&self) -> f64 {
        let m = &self.0;
        let s0 = m[0][0] * m[1][1] - m[1][0] * m[0][1];
        let s1 = m[0][0] * m[1][2] - m[1][0] * m[0][2];
        let s2 = m[0][0] * m[1][3] - m[1][0] * m[0][3];
        let s3 = m[0][1] * m[1][2] - m[1][1] * m[0][2];
        let s4 = m[0][1] * m[1][3] - m[1][1] * m[0][3];
        let s5 = m[0][2] * m[1][3] - m[1][2] * m[0][3];
        let c5 = m[2][2] * m[3][3] - m[3][2] * m[2][3];
        let c4 = m[2][1] * m[3][3] - m[3][1] * m[2][3];
        let c3 = m[2][1] * m[3][2] - m[3][1] * m[2][2];
        let c2 = m[2][0] * m[3][3] - m[3][0] * m[2][3];
        let c1 = m[2][0] * m[3][2] - m[3][0] * m[2][2];
        let c0 = m[2][0] * m[3][1] - m[3][0] * m[2][1];
        s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0
    }

    fn zip(&self, rhs: &SymMat4, f: impl Fn(f64, f64) -> f64) -> SymMat4 {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = f(self.0[i][j], rhs.0[i][j]);
            }
        }
        SymMat4(m)
    }
}

/// Hermitian 4×4 matrix `X + iY` with `X` symmetric and `Y` antisymmetric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermMat4 {
    re: SymMat4,
    im: [[f64; 4]; 4],
}

impl HermMat4 {
    /// Uses the strict upper triangle of `im` and mirrors it with a sign flip;
    /// the diagonal of the imaginary part is forced to zero.
    pub fn new(re: SymMat4, im: [[f64; 4]; 4]) -> Self {
        let mut y = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in (i + 1)..4 {
                y[i][j] = im[i][j];
                y[j][i] = -im[i][j];
            }
        }
        HermMat4 { re, im: y }
    }

    /// `X + (i/2)·diag(J, σJ)`.
    pub fn with_symplectic(re: SymMat4, sigma: f64) -> Self {
        let mut im = [[0.0; 4]; 4];
        im[0][1] = 0.5;
        im[2][3] = 0.5 * sigma;
        HermMat4::new(re, im)
    }

    pub fn re(&self) -> &SymMat4 {
        &self.re
    }

    pub fn im(&self) -> &[[f64; 4]; 4] {
        &self.im
    }

    /// The real symmetric embedding `[[X, -Y], [Y, X]]`.
    pub fn real_embedding(&self) -> [[f64; 8]; 8] {
        let mut m = [[0.0; 8]; 8];
        for i in 0..4 {
            for j in 0..4 {
                let x = self.re.get(i, j);
                let y = self.im[i][j];
                m[i][j] = x;
                m[i + 4][j + 4] = x;
                m[i][j + 4] = -y;
                m[i + 4][j] = y;
            }
        }
        m
    }

    /// `vᴴ M v`, real for Hermitian `M`.
    pub fn quad(&self, v: &[Complex64; 4]) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                let mij = Complex64::new(self.re.get(i, j), self.im[i][j]);
                acc += v[i].conj() * mij * v[j];
            }
        }
        acc.re
    }

    pub fn norm_inf(&self) -> f64 {
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| self.re.get(i, j).hypot(self.im[i][j]))
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

/// Spectral decomposition of a real symmetric `N×N` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult<const N: usize> {
    /// Ascending.
    pub values: [f64; N],
    /// `vectors[k]` is the unit eigenvector paired with `values[k]`.
    pub vectors: [[f64; N]; N],
}

impl<const N: usize> EigenResult<N> {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[N - 1]
    }

    /// `Σ f(λₖ) vₖ vₖᵀ`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> [[f64; N]; N] {
        let mut out = [[0.0; N]; N];
        for (lam, v) in self.values.iter().zip(self.vectors.iter()) {
            let w = f(*lam);
            for i in 0..N {
                for j in 0..N {
                    out[i][j] += w * v[i] * v[j];
                }
            }
        }
        out
    }
}

/// Cyclic Jacobi eigensolver for a symmetric `N×N` array.
///
/// Sweeps until the off-diagonal Frobenius norm drops below
/// `tol · ‖M‖_F`. Only the upper triangle of `m` is read.
pub fn jacobi_eigen<const N: usize>(m: &[[f64; N]; N], tol: f64) -> Result<EigenResult<N>> {
    if m.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let mut a = *m;
    for i in 0..N {
        for j in 0..i {
            a[i][j] = a[j][i];
        }
    }
    let mut v = [[0.0; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = tol * scale;

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..N)
            .flat_map(|i| (0..N).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= threshold || off == 0.0 {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values = std::array::from_fn(|k| a[order[k]][order[k]]);
    let vectors = std::array::from_fn(|k| std::array::from_fn(|i| v[i][order[k]]));
    Ok(EigenResult { values, vectors })
}

/// Full spectral decomposition of a symmetric 4×4 matrix.
pub fn eig_sym(m: &SymMat4, tol: f64) -> Result<EigenResult<4>> {
    jacobi_eigen(m.rows(), tol)
}

fn psd_threshold(norm: f64, tol: f64) -> f64 {
    -tol * norm.max(1.0)
}

/// True iff the smallest eigenvalue is at least `-tol·max(1, ‖M‖∞)`.
pub fn is_psd_sym(m: &SymMat4, tol: f64) -> bool {
    match eig_sym(m, JACOBI_TOL) {
        Ok(eig) => eig.min() >= psd_threshold(m.norm_inf(), tol),
        Err(_) => false,
    }
}

/// Outcome of a Hermitian positive-semidefiniteness test.
#[derive(Debug, Clone, PartialEq)]
pub struct HermPsd {
    pub psd: bool,
    pub min_eigenvalue: f64,
    /// Unit eigenvector of the smallest eigenvalue.
    pub witness: [Complex64; 4],
    /// Hermitian spectrum, ascending (one entry per duplicated pair of the
    /// real embedding).
    pub spectrum: [f64; 4],
}

/// Hermitian PSD test through the 8×8 real symmetric embedding.
pub fn is_psd_herm(m: &HermMat4, tol: f64) -> Result<HermPsd> {
    let eig = jacobi_eigen(&m.real_embedding(), JACOBI_TOL)?;
    let v = &eig.vectors[0];
    let witness: [Complex64; 4] = std::array::from_fn(|i| Complex64::new(v[i], v[i + 4]));
    let norm = witness.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let witness = witness.map(|z| z / norm);
    // The embedding spectrum comes in duplicated pairs.
    let spectrum = std::array::from_fn(|k| 0.5 * (eig.values[2 * k] + eig.values[2 * k + 1]));
    let min_eigenvalue = eig.min();
    Ok(HermPsd {
        psd: min_eigenvalue >= psd_threshold(m.norm_inf(), tol),
        min_eigenvalue,
        witness,
        spectrum,
    })
}

/// Rotational singular value decomposition of a 2×2 matrix.
///
/// Returns proper rotations `R1`, `R2` and `(c1, c2)` with
/// `R1 · C · R2ᵀ = diag(c1, c2)`, `c1 ≥ |c2|`, and `c1·c2 = det C`.
pub fn svd2_special(c: &Mat2) -> (Mat2, Mat2, f64, f64) {
    let m = &c.0;
    if m[0][1] == 0.0 && m[1][0] == 0.0 && m[0][0] >= m[1][1].abs() {
        return (Mat2::IDENTITY, Mat2::IDENTITY, m[0][0], m[1][1]);
    }
    let e = 0.5 * (m[0][0] + m[1][1]);
    let f = 0.5 * (m[0][0] - m[1][1]);
    let g = 0.5 * (m[1][0] + m[0][1]);
    let h = 0.5 * (m[1][0] - m[0][1]);
    let q = e.hypot(h);
    let r = f.hypot(g);
    let c1 = q + r;
    let c2 = q - r;
    let a1 = g.atan2(f);
    let a2 = h.atan2(e);
    let theta = 0.5 * (a2 - a1);
    let phi = 0.5 * (a2 + a1);
    // C = Rot(φ) · diag(c1, c2) · Rot(θ) with Rot(x) = [[cos, -sin], [sin, cos]],
    // and Rot(x) = Mat2::rotation(-x).
    let r1 = Mat2::rotation(phi);
    let r2 = Mat2::rotation(-theta);
    (r1, r2, c1, c2)
}

/// Inverse of a 4×4 matrix by Gauss-Jordan elimination with partial pivoting.
pub fn inverse4(m: &[[f64; 4]; 4]) -> Result<[[f64; 4]; 4]> {
    let mut a = *m;
    let mut inv = [[0.0; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale = m.iter().flatten().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if a[pivot][col].abs() <= 1e-300_f64.max(1e-15 * scale) {
            return Err(Error::InvalidInput("matrix is singular".into()));
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for k in 0..4 {
            a[col][k] /= p;
            inv[col][k] /= p;
        }
        for row in 0..4 {
            if row != col {
                let factor = a[row][col];
                for k in 0..4 {
                    a[row][k] -= factor * a[col][k];
                    inv[row][k] -= factor * inv[col][k];
                }
            }
        }
    }
    Ok(inv)
}
