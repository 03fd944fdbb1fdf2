//! Separability criteria on the covariance matrix.
//!
//! Every universally quantified parameter condition is decided through its
//! Hermitian matrix form. Both relative signs `σ = ±1` of the second-mode
//! symplectic term are checked, which covers the momentum sign flip on the
//! second party. When a matrix criterion fails, the eigenvector of its most
//! negative eigenvalue is turned back into a parameter set `(d, f, g, h)`
//! that violates the corresponding scalar inequality.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::covariance::{self, CovMat4, StandardForm, TildeMat};
use crate::error::{Error, Result};
use crate::matkit::{self, HermMat4, SymMat2, SymMat4, J, JACOBI_TOL};
use crate::squeezing;

/// Coefficients of the two quadrature combinations
/// `X(d, f) = d₁q₁ + d₂p₁ + f₁q₂ + f₂p₂` and `X(g, h)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSet {
    pub d: [f64; 2],
    pub f: [f64; 2],
    pub g: [f64; 2],
    pub h: [f64; 2],
}

impl ParamSet {
    /// Splits `v = (d + ig, f + ih)`.
    pub fn from_complex(v: &[Complex64; 4]) -> Self {
        ParamSet {
            d: [v[0].re, v[1].re],
            f: [v[2].re, v[3].re],
            g: [v[0].im, v[1].im],
            h: [v[2].im, v[3].im],
        }
    }

    /// Subsidiary choice `g = Jᵀd`, `h = σJᵀf` from a real 4-vector `(d, f)`.
    pub fn subsidiary(x: [f64; 4], sigma: f64) -> Self {
        let jt = J.transpose();
        let d = [x[0], x[1]];
        let f = [x[2], x[3]];
        let h = jt.apply(f);
        ParamSet {
            d,
            f,
            g: jt.apply(d),
            h: [sigma * h[0], sigma * h[1]],
        }
    }
}

impl fmt::Display for ParamSet {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            fm,
            "d=({:.6}, {:.6}) f=({:.6}, {:.6}) g=({:.6}, {:.6}) h=({:.6}, {:.6})",
            self.d[0], self.d[1], self.f[0], self.f[1], self.g[0], self.g[1], self.h[0], self.h[1]
        )
    }
}

/// Which `σ` branch produced the reported margin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Branch {
    Plus,
    Minus,
    Both,
}

impl Branch {
    pub fn sigma(&self) -> f64 {
        match self {
            Branch::Minus => -1.0,
            _ => 1.0,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
            Branch::Both => "both",
        })
    }
}

/// Evidence that a matrix criterion fails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub params: ParamSet,
    /// The eigenvector, complex for Hermitian forms and real otherwise.
    pub vector: [Complex64; 4],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionReport {
    pub satisfied: bool,
    /// Smallest eigenvalue over both branches, or the smallest scalar gap
    /// for the algebraic forms.
    pub margin: f64,
    /// Present iff a matrix-form criterion is violated.
    pub witness: Option<Witness>,
    pub branch: Branch,
}

/// `xᵀ M x` over `x = (d, f)` for the blocks of `M`.
fn pair_quad(m: &SymMat4, d: [f64; 2], f: [f64; 2]) -> f64 {
    m.quad([d[0], d[1], f[0], f[1]])
}

fn symplectic_product(x: [f64; 2], y: [f64; 2]) -> f64 {
    let jy = J.apply(y);
    x[0] * jy[0] + x[1] * jy[1]
}

fn quad_terms(v: &CovMat4, t: &TildeMat, p: &ParamSet) -> f64 {
    let diff = v.matrix().sub(t.matrix());
    pair_quad(&diff, p.d, p.f) + pair_quad(&diff, p.g, p.h)
}

/// Uncertainty relation valid for every state, as left side minus right
/// side: the `V - Ṽ` quadratic forms minus `|dᵀJg + fᵀJh|`.
pub fn gap_general(v: &CovMat4, t: &TildeMat, p: &ParamSet) -> f64 {
    quad_terms(v, t, p) - (symplectic_product(p.d, p.g) + symplectic_product(p.f, p.h)).abs()
}

/// Relation valid for separable states, as left side minus right side: the
/// `V - Ṽ` quadratic forms minus `|dᵀJg| + |fᵀJh|`.
pub fn gap_separable(v: &CovMat4, t: &TildeMat, p: &ParamSet) -> f64 {
    quad_terms(v, t, p) - symplectic_product(p.d, p.g).abs() - symplectic_product(p.f, p.h).abs()
}

fn pick_branch(plus: f64, minus: f64, tol: f64) -> Branch {
    if (plus - minus).abs() <= tol {
        Branch::Both
    } else if plus < minus {
        Branch::Plus
    } else {
        Branch::Minus
    }
}

/// `M + (i/2)·diag(J, σJ) ≥ 0` for both `σ`.
fn hermitian_pair(m: &SymMat4, tol: f64) -> Result<CriterionReport> {
    let plus = matkit::is_psd_herm(&HermMat4::with_symplectic(*m, 1.0), tol)?;
    let minus = matkit::is_psd_herm(&HermMat4::with_symplectic(*m, -1.0), tol)?;
    let branch = pick_branch(plus.min_eigenvalue, minus.min_eigenvalue, tol);
    let worst = if minus.min_eigenvalue < plus.min_eigenvalue {
        &minus
    } else {
        &plus
    };
    let satisfied = plus.psd && minus.psd;
    Ok(CriterionReport {
        satisfied,
        margin: worst.min_eigenvalue,
        witness: (!satisfied).then(|| Witness {
            params: ParamSet::from_complex(&worst.witness),
            vector: worst.witness,
        }),
        branch,
    })
}

/// Separability condition with the ensemble matrix subtracted:
/// `(V - Ṽ) + (i/2)·diag(J, σJ) ≥ 0` for `σ = ±1`.
pub fn stringent_criterion(v: &CovMat4, t: &TildeMat, tol: f64) -> Result<CriterionReport> {
    if !matkit::is_psd_sym(t.matrix(), tol) {
        let eig = matkit::eig_sym(t.matrix(), JACOBI_TOL)?;
        return Err(Error::InvalidTilde {
            min_eigenvalue: eig.min(),
        });
    }
    hermitian_pair(&v.matrix().sub(t.matrix()), tol)
}

/// Simon's condition `V + (i/2)·diag(J, ±J) ≥ 0`.
///
/// The `+` branch is physicality, the `-` branch the partial transpose.
pub fn simon_criterion(v: &CovMat4, tol: f64) -> Result<CriterionReport> {
    hermitian_pair(v.matrix(), tol)
}

/// Physicality alone, `V + (i/2)·diag(J, J) ≥ 0`; witnesses violate
/// [`gap_general`].
pub fn physicality(v: &CovMat4, tol: f64) -> Result<CriterionReport> {
    let r = matkit::is_psd_herm(&HermMat4::with_symplectic(*v.matrix(), 1.0), tol)?;
    Ok(CriterionReport {
        satisfied: r.psd,
        margin: r.min_eigenvalue,
        witness: (!r.psd).then(|| Witness {
            params: ParamSet::from_complex(&r.witness),
            vector: r.witness,
        }),
        branch: Branch::Plus,
    })
}

/// Simon's condition on a standard form:
/// `4(ab - c₁²)(ab - c₂²) ≥ a² + b² + 2|c₁c₂| - ¼`,
/// `√((2a-1)(2b-1)) ≥ |c₁| + |c₂|`, `a ≥ ½`, `b ≥ ½`.
///
/// The margin is the smallest of the four gaps. No witness is produced.
pub fn simon_algebraic(sf: &StandardForm, tol: f64) -> CriterionReport {
    let (a, b) = (sf.a, sf.b);
    let (c1, c2) = (sf.c1.abs(), sf.c2.abs());
    let quartic = 4.0 * (a * b - c1 * c1) * (a * b - c2 * c2)
        - (a * a + b * b + 2.0 * c1 * c2 - 0.25);
    let radicand = (2.0 * a - 1.0) * (2.0 * b - 1.0);
    let linear = if a >= 0.5 && b >= 0.5 {
        radicand.sqrt() - (c1 + c2)
    } else {
        f64::NEG_INFINITY
    };
    let margin = quartic.min(linear).min(a - 0.5).min(b - 0.5);
    CriterionReport {
        satisfied: margin >= -tol,
        margin,
        witness: None,
        branch: Branch::Both,
    }
}

/// Largest `|c₁|` allowed by [`simon_algebraic`] when `|c₂| = t|c₁|`.
///
/// With `u = c₁²` the first condition is the quadratic
/// `4t²u² - (4ab(1+t²) + 2t)u + (4a²-1)(4b²-1)/4 ≥ 0`, whose smaller root is
/// the bound; the larger root is excluded by the second condition.
pub fn simon_c1_bound(a: f64, b: f64, t: f64) -> Result<f64> {
    if !(a >= 0.5 && b >= 0.5 && a.is_finite() && b.is_finite()) {
        return Err(Error::OutOfDomain(format!("a, b must be >= 1/2, got {a}, {b}")));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfDomain(format!("t must lie in [0, 1], got {t}")));
    }
    let qa = 4.0 * t * t;
    let qb = 4.0 * a * b * (1.0 + t * t) + 2.0 * t;
    let qc = 0.25 * (4.0 * a * a - 1.0) * (4.0 * b * b - 1.0);
    let disc = (qb * qb - 4.0 * qa * qc).max(0.0);
    // Citardauq form of the smaller root; finite at t = 0.
    let u = 2.0 * qc / (qb + disc.sqrt());
    let linear = ((2.0 * a - 1.0) * (2.0 * b - 1.0)).sqrt() / (1.0 + t);
    Ok(u.sqrt().min(linear))
}

/// The Duan-type block matrix `[[A + JAJᵀ, C + σJCJᵀ], [·, B + JBJᵀ]]`.
fn duan_blocks(m: &SymMat4, sigma: f64) -> SymMat4 {
    let jt = J.transpose();
    let a = m.block_a().to_mat2();
    let b = m.block_b().to_mat2();
    let c = m.block_c();
    let aa = a.add(&a.congruence(&J, &J));
    let bb = b.add(&b.congruence(&J, &J));
    let cc = c.add(&J.mul(&c).mul(&jt).scale(sigma));
    SymMat4::from_blocks(&SymMat2::from_mat2(&aa), &SymMat2::from_mat2(&bb), &cc)
}

fn real_branch(m: &SymMat4, sigma: f64) -> Result<(f64, [f64; 4])> {
    let block = duan_blocks(m, sigma).shift(-1.0);
    let eig = matkit::eig_sym(&block, JACOBI_TOL)?;
    Ok((eig.min(), eig.vectors[0]))
}

fn real_report(m: &SymMat4, only: Option<f64>, tol: f64) -> Result<CriterionReport> {
    let norm = duan_blocks(m, 1.0).shift(-1.0).norm_inf().max(1.0);
    let threshold = -tol * norm;
    let plus = if only == Some(-1.0) { None } else { Some(real_branch(m, 1.0)?) };
    let minus = if only == Some(1.0) { None } else { Some(real_branch(m, -1.0)?) };
    let (branch, (margin, vec)) = match (plus, minus) {
        (Some(p), Some(q)) => {
            let br = pick_branch(p.0, q.0, tol);
            (br, if q.0 < p.0 { q } else { p })
        }
        (Some(p), None) => (Branch::Plus, p),
        (None, Some(q)) => (Branch::Minus, q),
        (None, None) => unreachable!(),
    };
    let sigma = match branch {
        Branch::Minus => -1.0,
        Branch::Plus => 1.0,
        Branch::Both => {
            if only == Some(-1.0) {
                -1.0
            } else {
                1.0
            }
        }
    };
    let satisfied = margin >= threshold;
    Ok(CriterionReport {
        satisfied,
        margin,
        witness: (!satisfied).then(|| Witness {
            params: ParamSet::subsidiary(vec, sigma),
            vector: vec.map(|x| Complex64::new(x, 0.0)),
        }),
        branch,
    })
}

/// Duan-type condition `[[A + JAJᵀ, C ± JCJᵀ], [·, B + JBJᵀ]] ≥ I`.
pub fn duan_criterion(v: &CovMat4, tol: f64) -> Result<CriterionReport> {
    real_report(v.matrix(), None, tol)
}

/// Subsidiary-condition form with the ensemble matrix:
/// `blocks_σ(V) ≥ blocks_σ(Ṽ) + I` for the single branch `sign`.
pub fn weak_gap(v: &CovMat4, t: &TildeMat, sign: f64, tol: f64) -> Result<CriterionReport> {
    if sign != 1.0 && sign != -1.0 {
        return Err(Error::InvalidInput(format!("sign must be +1 or -1, got {sign}")));
    }
    if !matkit::is_psd_sym(t.matrix(), tol) {
        let eig = matkit::eig_sym(t.matrix(), JACOBI_TOL)?;
        return Err(Error::InvalidTilde {
            min_eigenvalue: eig.min(),
        });
    }
    real_report(&v.matrix().sub(t.matrix()), Some(sign), tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Classification {
    Nonphysical,
    Entangled,
    Separable,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Nonphysical => "Nonphysical",
            Classification::Entangled => "Entangled",
            Classification::Separable => "Separable",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CriterionKind {
    Physicality,
    Simon,
    SimonAlgebraic,
    Duan,
    PrepBoundary,
}

impl fmt::Display for CriterionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CriterionKind::Physicality => "physicality",
            CriterionKind::Simon => "simon",
            CriterionKind::SimonAlgebraic => "simon-algebraic",
            CriterionKind::Duan => "duan",
            CriterionKind::PrepBoundary => "p-representation",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub class: Classification,
    pub reports: BTreeMap<CriterionKind, CriterionReport>,
    pub standard_form: Option<StandardForm>,
    /// Optimal squeezing used for the P-representation decision.
    pub squeeze: Option<squeezing::SqueezeSolution>,
    /// Whether Simon's matrix criterion agrees with the P-representation
    /// decision (always true for physical states up to tolerance).
    pub consistent: bool,
}

impl Verdict {
    pub fn report(&self, kind: CriterionKind) -> Option<&CriterionReport> {
        self.reports.get(&kind)
    }
}

/// Classifies a covariance matrix.
///
/// Nonphysical states fail the bona fide test. Otherwise the state is reduced
/// to standard form and declared separable iff `|c₁|` lies within the
/// P-representation bound at optimal squeezing. Simon's condition is
/// evaluated alongside and compared.
pub fn classify(v: &CovMat4, tol: f64) -> Result<Verdict> {
    let mut reports = BTreeMap::new();
    let phys = physicality(v, tol)?;
    reports.insert(CriterionKind::Physicality, phys);
    let simon = simon_criterion(v, tol)?;
    reports.insert(CriterionKind::Simon, simon);
    reports.insert(CriterionKind::Duan, duan_criterion(v, tol)?);

    if !phys.satisfied {
        return Ok(Verdict {
            class: Classification::Nonphysical,
            reports,
            standard_form: None,
            squeeze: None,
            consistent: true,
        });
    }

    let sf = covariance::to_standard_form(v)?;
    reports.insert(CriterionKind::SimonAlgebraic, simon_algebraic(&sf, tol));

    // Physical states have a, b ≥ 1/2; rounding may dip just below.
    let a = sf.a.max(0.5);
    let b = sf.b.max(0.5);
    let sol = squeezing::optimal_squeeze(a, b, sf.ratio())?;
    let slack = tol * sol.c1_bound.max(1.0);
    let margin = sol.c1_bound - sf.c1.abs();
    let separable = margin >= -slack;
    reports.insert(
        CriterionKind::PrepBoundary,
        CriterionReport {
            satisfied: separable,
            margin,
            witness: None,
            branch: Branch::Both,
        },
    );
    let class = if separable {
        Classification::Separable
    } else {
        Classification::Entangled
    };
    Ok(Verdict {
        class,
        reports,
        standard_form: Some(sf),
        squeeze: Some(sol),
        consistent: simon.satisfied == separable,
    })
}

/// Outcomes of the four nested conditions on one state.
///
/// The ensemble matrix for the stringent test is the positive part of
/// `V - I/2`, which equals `V - I/2` whenever the state is P-representable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hierarchy {
    pub prep: bool,
    pub stringent: bool,
    pub simon: bool,
    pub duan: bool,
}

impl Hierarchy {
    /// Names of the implications that fail, in chain order.
    pub fn violations(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.prep && !self.stringent {
            out.push("p-representation => stringent");
        }
        if self.stringent && !self.simon {
            out.push("stringent => simon");
        }
        if self.simon && !self.duan {
            out.push("simon => duan");
        }
        out
    }
}

pub fn hierarchy(v: &CovMat4, tol: f64) -> Result<Hierarchy> {
    let shifted = v.matrix().shift(-0.5);
    let eig = matkit::eig_sym(&shifted, JACOBI_TOL)?;
    let prep = matkit::is_psd_sym(&shifted, tol);
    let tilde = TildeMat::new(SymMat4::symmetrize(eig.reconstruct_with(|l| l.max(0.0))), tol)?;
    Ok(Hierarchy {
        prep,
        stringent: stringent_criterion(v, &tilde, tol)?.satisfied,
        simon: simon_criterion(v, tol)?.satisfied,
        duan: duan_criterion(v, tol)?.satisfied,
    })
}

/// Convenience: `Mat2` symplectic product `xᵀJy`, exposed for tests.
pub fn jproduct(x: [f64; 2], y: [f64; 2]) -> f64 {
    symplectic_product(x, y)
}

#[doc(hidden)]
pub fn duan_matrix(v: &CovMat4, sigma: f64) -> SymMat4 {
    duan_blocks(v.matrix(), sigma)
}
