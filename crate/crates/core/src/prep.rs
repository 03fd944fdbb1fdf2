//! Gaussian P-functions.
//!
//! For `V - I/2 > 0` the P-function is a normalized Gaussian weight over
//! phase-space points `(α₁, α₂, β₁, β₂)` with quadratic-form matrix
//! `P = (V - I/2)⁻¹`, normalization `√det P / (4π²)`, and second moments
//! `P⁻¹ = V - I/2`.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::covariance::CovMat4;
use crate::error::{Error, Result};
use crate::matkit::{self, SymMat4, JACOBI_TOL};

/// A point `(α₁, α₂, β₁, β₂)` in the two-mode phase space.
pub type PhasePoint = [f64; 4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PWeight {
    pmat: SymMat4,
    normalization: f64,
    /// `P⁻¹` as a symmetric square root, used for sampling.
    sqrt_cov: [[f64; 4]; 4],
}

impl PWeight {
    pub fn pmat(&self) -> &SymMat4 {
        &self.pmat
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// `P⁻¹` through Gauss-Jordan elimination of `P`, independent of the
    /// spectral inverse that produced `P`.
    pub fn covariance(&self) -> Result<SymMat4> {
        Ok(SymMat4::symmetrize(matkit::inverse4(self.pmat.rows())?))
    }
}

/// Characteristic function `exp(-½ λᵀVλ)` of a zero-mean Gaussian state.
pub fn char_fn(v: &CovMat4, lambda: [f64; 4]) -> f64 {
    (-0.5 * v.matrix().quad(lambda)).exp()
}

/// Builds the P-function weight, requiring `V - I/2` positive definite.
///
/// Errors with `NotPRepresentable` when `V - I/2` has an eigenvalue below
/// `-tol·scale`, and with `BoundaryPRep` when its smallest eigenvalue is
/// within `tol·scale` of zero.
pub fn p_weight(v: &CovMat4, tol: f64) -> Result<PWeight> {
    let shifted = v.matrix().shift(-0.5);
    let eig = matkit::eig_sym(&shifted, JACOBI_TOL)?;
    let scale = tol * shifted.norm_inf().max(1.0);
    let min = eig.min();
    if min < -scale {
        return Err(Error::NotPRepresentable { min_eigenvalue: min });
    }
    if min <= scale {
        return Err(Error::BoundaryPRep { min_eigenvalue: min });
    }
    let pmat = SymMat4::symmetrize(eig.reconstruct_with(|l| 1.0 / l));
    let det_p: f64 = eig.values.iter().map(|l| 1.0 / l).product();
    let sqrt_cov = eig.reconstruct_with(f64::sqrt);
    Ok(PWeight {
        pmat,
        normalization: det_p.sqrt() / (4.0 * std::f64::consts::PI.powi(2)),
        sqrt_cov,
    })
}

/// `normalization · exp(-½ zᵀPz)`.
pub fn p_density(w: &PWeight, z: &PhasePoint) -> f64 {
    w.normalization * (-0.5 * w.pmat.quad(*z)).exp()
}

/// `‖P⁻¹ - (V - I/2)‖∞` with `P⁻¹` obtained by direct inversion of `P`.
pub fn p_moments_identity(v: &CovMat4, tol: f64) -> Result<f64> {
    let w = p_weight(v, tol)?;
    Ok(w.covariance()?.max_abs_diff(&v.matrix().shift(-0.5)))
}

/// The characteristic function rebuilt from the P-function: the Fourier
/// transform of the weight, `exp(-½ λᵀP⁻¹λ)`, times the coherent-state
/// factor `exp(-¼ λᵀλ)`.
pub fn char_fn_from_weight(w: &PWeight, lambda: [f64; 4]) -> Result<f64> {
    let cov = w.covariance()?;
    let ll: f64 = lambda.iter().map(|x| x * x).sum();
    Ok((-0.5 * cov.quad(lambda) - 0.25 * ll).exp())
}

/// Draws `n` independent points from the weight.
///
/// Uses ChaCha12 seeded from `seed` and the symmetric square root of `P⁻¹`
/// applied to standard normal draws. Identical `(seed, n)` give identical
/// output.
pub fn p_sample(w: &PWeight, n: usize, seed: u64) -> Vec<PhasePoint> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let xi: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
            std::array::from_fn(|i| (0..4).map(|j| w.sqrt_cov[i][j] * xi[j]).sum())
        })
        .collect()
}

/// Sample second moments about zero.
pub fn sample_covariance(points: &[PhasePoint]) -> SymMat4 {
    let mut m = [[0.0; 4]; 4];
    for z in points {
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] += z[i] * z[j];
            }
        }
    }
    let n = points.len().max(1) as f64;
    SymMat4::symmetrize(m.map(|row| row.map(|x| x / n)))
}
