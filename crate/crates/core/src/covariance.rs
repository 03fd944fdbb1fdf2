//! Two-mode covariance matrices and their local symplectic structure.
//!
//! Quadratures are ordered `(q₁, p₁, q₂, p₂)` and the vacuum is `I/2`.
//! First moments are taken to be zero throughout.

use std::fmt;

use crate::error::{Error, Result};
use crate::matkit::{self, HermMat4, Mat2, SymMat2, SymMat4, JACOBI_TOL};

/// Determinant floor below which a diagonal block cannot be rescaled.
pub const DEGENERATE_DET: f64 = 1e-12;

const SYMPLECTIC_TOL: f64 = 1e-12;

/// Covariance matrix `V = [[A, C], [Cᵀ, B]]` of a two-mode state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovMat4(SymMat4);

impl CovMat4 {
    pub fn new(m: SymMat4) -> Self {
        CovMat4(m)
    }

    pub fn vacuum() -> Self {
        CovMat4(SymMat4::identity().scale(0.5))
    }

    pub fn from_blocks(a: &SymMat2, b: &SymMat2, c: &Mat2) -> Self {
        CovMat4(SymMat4::from_blocks(a, b, c))
    }

    /// The standard-form layout with `A = a·I`, `B = b·I`, `C = diag(c1, c2)`.
    pub fn standard(a: f64, b: f64, c1: f64, c2: f64) -> Self {
        CovMat4::from_blocks(
            &SymMat2::new(a, 0.0, a),
            &SymMat2::new(b, 0.0, b),
            &Mat2::diag(c1, c2),
        )
    }

    pub fn matrix(&self) -> &SymMat4 {
        &self.0
    }

    pub fn a(&self) -> SymMat2 {
        self.0.block_a()
    }

    pub fn b(&self) -> SymMat2 {
        self.0.block_b()
    }

    pub fn c(&self) -> Mat2 {
        self.0.block_c()
    }

    pub fn det(&self) -> f64 {
        self.0.det()
    }

    pub fn max_abs_diff(&self, rhs: &CovMat4) -> f64 {
        self.0.max_abs_diff(&rhs.0)
    }
}

/// Ensemble second-moment matrix `Ṽ = Σₖ Pₖ ⟨Δξ⟩ₖ⟨Δξ⟩ₖᵀ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TildeMat(SymMat4);

impl TildeMat {
    pub fn zero() -> Self {
        TildeMat(SymMat4::ZERO)
    }

    /// Wraps `m` after checking it is positive semidefinite within `tol`.
    pub fn new(m: SymMat4, tol: f64) -> Result<Self> {
        let eig = matkit::eig_sym(&m, JACOBI_TOL)?;
        if !matkit::is_psd_sym(&m, tol) {
            return Err(Error::InvalidTilde {
                min_eigenvalue: eig.min(),
            });
        }
        Ok(TildeMat(m))
    }

    pub fn matrix(&self) -> &SymMat4 {
        &self.0
    }

    /// Transforms the way `V` does under a local symplectic pair.
    pub fn apply_symp(&self, s1: &Symp2, s2: &Symp2) -> TildeMat {
        TildeMat(local_congruence(&self.0, s1.matrix(), s2.matrix()))
    }
}

/// A 2×2 real symplectic matrix, `S J Sᵀ = J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Symp2(Mat2);

impl Symp2 {
    pub fn identity() -> Self {
        Symp2(Mat2::IDENTITY)
    }

    /// `[[cos θ, sin θ], [-sin θ, cos θ]]`.
    pub fn rotation(theta: f64) -> Self {
        Symp2(Mat2::rotation(theta))
    }

    /// `diag(x, 1/x)`.
    pub fn squeeze(x: f64) -> Result<Self> {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::InvalidTransform { det: f64::NAN });
        }
        Ok(Symp2(Mat2::diag(x, 1.0 / x)))
    }

    /// Checks `det S = 1` within 1e-12, which is equivalent to `S J Sᵀ = J`
    /// for 2×2 matrices.
    pub fn new(m: Mat2) -> Result<Self> {
        let det = m.det();
        if !m.is_finite() || (det - 1.0).abs() > SYMPLECTIC_TOL {
            return Err(Error::InvalidTransform { det });
        }
        Ok(Symp2(m))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    /// `self · rhs`.
    pub fn then_after(&self, rhs: &Symp2) -> Symp2 {
        Symp2(self.0.mul(&rhs.0))
    }

    pub fn inverse(&self) -> Symp2 {
        let m = &self.0 .0;
        Symp2(Mat2::new(m[1][1], -m[0][1], -m[1][0], m[0][0]))
    }
}

impl fmt::Display for Symp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0 .0;
        write!(
            f,
            "[[{:.12}, {:.12}], [{:.12}, {:.12}]]",
            m[0][0], m[0][1], m[1][0], m[1][1]
        )
    }
}

/// Standard-form parameters together with the local transform reaching them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardForm {
    pub a: f64,
    pub b: f64,
    pub c1: f64,
    pub c2: f64,
    /// `apply_symp(V, s1, s2)` gives [`StandardForm::covariance`].
    pub s1: Symp2,
    pub s2: Symp2,
}

impl StandardForm {
    /// A bare quadruple with the identity as its recorded transform.
    pub fn from_params(a: f64, b: f64, c1: f64, c2: f64) -> Self {
        StandardForm {
            a,
            b,
            c1,
            c2,
            s1: Symp2::identity(),
            s2: Symp2::identity(),
        }
    }

    pub fn covariance(&self) -> CovMat4 {
        CovMat4::standard(self.a, self.b, self.c1, self.c2)
    }

    /// `|c2| / |c1|`, or 0 when both vanish.
    pub fn ratio(&self) -> f64 {
        if self.c1 == 0.0 {
            0.0
        } else {
            (self.c2 / self.c1).abs()
        }
    }
}

/// Weighted list of mean deviations making up a decomposition of the state.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    components: Vec<(f64, [f64; 4])>,
}

impl EnsembleSpec {
    pub fn new(components: Vec<(f64, [f64; 4])>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidEnsemble("no components".into()));
        }
        if components
            .iter()
            .any(|(w, d)| !w.is_finite() || d.iter().any(|x| !x.is_finite()))
        {
            return Err(Error::InvalidEnsemble("non-finite component".into()));
        }
        if let Some((w, _)) = components.iter().find(|(w, _)| *w < 0.0) {
            return Err(Error::InvalidEnsemble(format!("negative weight {w}")));
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidEnsemble(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        Ok(EnsembleSpec { components })
    }

    pub fn components(&self) -> &[(f64, [f64; 4])] {
        &self.components
    }
}

fn local_congruence(m: &SymMat4, s1: &Mat2, s2: &Mat2) -> SymMat4 {
    SymMat4::from_blocks(
        &m.block_a().congruence(s1),
        &m.block_b().congruence(s2),
        &m.block_c().congruence(s1, s2),
    )
}

/// Local symplectic action `A → S₁AS₁ᵀ`, `B → S₂BS₂ᵀ`, `C → S₁CS₂ᵀ`.
pub fn apply_symp(v: &CovMat4, s1: &Symp2, s2: &Symp2) -> CovMat4 {
    CovMat4(local_congruence(&v.0, s1.matrix(), s2.matrix()))
}

/// Same action on raw 2×2 matrices; rejects non-symplectic input.
pub fn apply_local(v: &CovMat4, s1: &Mat2, s2: &Mat2) -> Result<CovMat4> {
    let s1 = Symp2::new(*s1)?;
    let s2 = Symp2::new(*s2)?;
    Ok(apply_symp(v, &s1, &s2))
}

/// Momentum sign flip on the second mode: `B → S₃BS₃ᵀ`, `C → C·S₃` with
/// `S₃ = diag(1, -1)`.
pub fn flip_sign(v: &CovMat4) -> CovMat4 {
    let s3 = Mat2::diag(1.0, -1.0);
    CovMat4(local_congruence(&v.0, &Mat2::IDENTITY, &s3))
}

/// Rotation then rescaling bringing a positive definite 2×2 block to
/// `√det · I`.
fn normalize_block(m: &SymMat2, name: char) -> Result<Symp2> {
    let det = m.det();
    if !(det >= DEGENERATE_DET && m.xx > 0.0) {
        return Err(Error::DegenerateBlock { block: name, det });
    }
    let rot = Symp2::rotation(0.5 * (2.0 * m.xy).atan2(m.xx - m.yy));
    let d = m.congruence(rot.matrix());
    let x = (d.yy / d.xx).powf(0.25);
    Ok(Symp2::squeeze(x)?.then_after(&rot))
}

/// Reduces `V` to `(a, b, c1, c2)` with `A = a·I`, `B = b·I`,
/// `C = diag(c1, c2)`, `c1 ≥ |c2|`.
pub fn to_standard_form(v: &CovMat4) -> Result<StandardForm> {
    let t1 = normalize_block(&v.a(), 'A')?;
    let t2 = normalize_block(&v.b(), 'B')?;
    let partial = apply_symp(v, &t1, &t2);
    let (r1, r2, c1, c2) = matkit::svd2_special(&partial.c());
    let s1 = Symp2(r1).then_after(&t1);
    let s2 = Symp2(r2).then_after(&t2);
    Ok(StandardForm {
        a: v.a().det().sqrt(),
        b: v.b().det().sqrt(),
        c1,
        c2,
        s1,
        s2,
    })
}

/// Bona fide test: `V + (i/2)·diag(J, J) ≥ 0` within `tol`.
///
/// Returns the verdict and the smallest eigenvalue of the Hermitian matrix.
pub fn is_physical(v: &CovMat4, tol: f64) -> (bool, f64) {
    match matkit::is_psd_herm(&HermMat4::with_symplectic(v.0, 1.0), tol) {
        Ok(r) => (r.psd, r.min_eigenvalue),
        Err(_) => (false, f64::NAN),
    }
}

pub fn tilde_from_ensemble(e: &EnsembleSpec) -> TildeMat {
    let mut m = [[0.0; 4]; 4];
    for (w, d) in e.components() {
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] += w * d[i] * d[j];
            }
        }
    }
    TildeMat(SymMat4::symmetrize(m))
}

/// `Ṽ = V - I/2`, defined when that difference is positive semidefinite.
pub fn tilde_from_prep(v: &CovMat4, tol: f64) -> Result<TildeMat> {
    let m = v.0.shift(-0.5);
    let eig = matkit::eig_sym(&m, JACOBI_TOL)?;
    if !matkit::is_psd_sym(&m, tol) {
        return Err(Error::NotPRepresentable {
            min_eigenvalue: eig.min(),
        });
    }
    Ok(TildeMat(m))
}
