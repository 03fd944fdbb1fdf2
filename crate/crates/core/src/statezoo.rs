//! Covariance-matrix generators for tests, audits and examples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::covariance::{apply_symp, CovMat4, Symp2};
use crate::error::{Error, Result};
use crate::matkit::SymMat4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    Vacuum,
    /// Thermal product state `diag(n₁, n₁, n₂, n₂)`, `n ≥ ½`.
    Thermal(f64, f64),
    /// Two-mode squeezed vacuum with squeezing `r ≥ 0`.
    TwoModeSqueezed(f64),
    /// Standard-form layout `(a, b, c₁, c₂)`.
    StandardFormSpec(f64, f64, f64, f64),
    RandomPhysical(u64),
    RandomSeparable(u64),
}

/// Builds the covariance matrix for `spec`.
pub fn make(spec: &StateSpec) -> Result<CovMat4> {
    match *spec {
        StateSpec::Vacuum => Ok(CovMat4::vacuum()),
        StateSpec::Thermal(n1, n2) => {
            if !(n1 >= 0.5 && n2 >= 0.5 && n1.is_finite() && n2.is_finite()) {
                return Err(Error::InvalidSpec(format!(
                    "thermal occupations must be >= 1/2, got ({n1}, {n2})"
                )));
            }
            Ok(CovMat4::new(SymMat4::diag([n1, n1, n2, n2])))
        }
        StateSpec::TwoModeSqueezed(r) => {
            if !(r >= 0.0 && r.is_finite()) {
                return Err(Error::InvalidSpec(format!("squeezing must be >= 0, got {r}")));
            }
            let (ch, sh) = ((2.0 * r).cosh() / 2.0, (2.0 * r).sinh() / 2.0);
            Ok(CovMat4::standard(ch, ch, sh, -sh))
        }
        StateSpec::StandardFormSpec(a, b, c1, c2) => {
            if ![a, b, c1, c2].iter().all(|x| x.is_finite()) {
                return Err(Error::InvalidSpec("standard form entries must be finite".into()));
            }
            Ok(CovMat4::standard(a, b, c1, c2))
        }
        StateSpec::RandomPhysical(seed) => Ok(random_physical(&mut ChaCha12Rng::seed_from_u64(seed))),
        StateSpec::RandomSeparable(seed) => Ok(random_separable(&mut ChaCha12Rng::seed_from_u64(seed))),
    }
}

/// The `index`-th state of the audit stream for `seed`: random physical
/// states at even indices and random separable ones at odd indices. Each
/// index draws from its own ChaCha stream, so samples can be produced in any
/// order.
pub fn audit_state(seed: u64, index: u64) -> CovMat4 {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    if index.is_multiple_of(2) {
        random_physical(&mut rng)
    } else {
        random_separable(&mut rng)
    }
}

/// Rotation, squeeze with `ln x ∈ [-1, 1]`, rotation.
pub fn random_symp2<R: Rng + ?Sized>(rng: &mut R) -> Symp2 {
    let tau = std::f64::consts::TAU;
    let x = rng.random_range(-1.0..=1.0_f64).exp();
    Symp2::rotation(rng.random_range(0.0..tau))
        .then_after(&Symp2::squeeze(x).expect("x > 0"))
        .then_after(&Symp2::rotation(rng.random_range(0.0..tau)))
}

fn mat4_congruence(s: &[[f64; 4]; 4], m: &SymMat4) -> SymMat4 {
    let mut sm = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            sm[i][j] = (0..4).map(|k| s[i][k] * m.get(k, j)).sum();
        }
    }
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| sm[i][k] * s[j][k]).sum();
        }
    }
    SymMat4::symmetrize(out)
}

/// Two-mode squeezer `[[cosh r·I, sinh r·Z], [sinh r·Z, cosh r·I]]`,
/// `Z = diag(1, -1)`.
fn two_mode_squeezer(r: f64) -> [[f64; 4]; 4] {
    let (c, s) = (r.cosh(), r.sinh());
    [
        [c, 0.0, s, 0.0],
        [0.0, c, 0.0, -s],
        [s, 0.0, c, 0.0],
        [0.0, -s, 0.0, c],
    ]
}

fn beam_splitter(theta: f64) -> [[f64; 4]; 4] {
    let (s, c) = theta.sin_cos();
    [
        [c, 0.0, s, 0.0],
        [0.0, c, 0.0, s],
        [-s, 0.0, c, 0.0],
        [0.0, -s, 0.0, c],
    ]
}

/// Thermal state with symplectic eigenvalues in `[½, 3]`, mixed by a
/// two-mode squeezer (`r ∈ [0, 1]`) and a beam splitter, then dressed with
/// random local transforms. Physical by construction; may be entangled.
pub fn random_physical<R: Rng + ?Sized>(rng: &mut R) -> CovMat4 {
    let n1 = rng.random_range(0.5..=3.0);
    let n2 = rng.random_range(0.5..=3.0);
    let thermal = SymMat4::diag([n1, n1, n2, n2]);
    let r = rng.random_range(0.0..=1.0);
    let theta = rng.random_range(0.0..std::f64::consts::PI);
    let mixed = mat4_congruence(&beam_splitter(theta), &mat4_congruence(&two_mode_squeezer(r), &thermal));
    let s1 = random_symp2(rng);
    let s2 = random_symp2(rng);
    apply_symp(&CovMat4::new(mixed), &s1, &s2)
}

/// Random positive semidefinite 4×4 matrix `G Gᵀ` with entries of `G` in
/// `[-scale, scale]`.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> SymMat4 {
    let g: [[f64; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(-scale..=scale)));
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = (0..4).map(|k| g[i][k] * g[j][k]).sum();
        }
    }
    SymMat4::symmetrize(m)
}

/// `Ṽ + I/2` with a random positive semidefinite `Ṽ`.
pub fn random_separable<R: Rng + ?Sized>(rng: &mut R) -> CovMat4 {
    CovMat4::new(random_psd(rng, 0.8).shift(0.5))
}
