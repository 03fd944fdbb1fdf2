//! Local squeezing of a standard-form state and the boundary of the
//! P-representation.
//!
//! A standard form `(a, b, c1, c2)` is squeezed by `diag(√r₁, 1/√r₁)` on the
//! first mode and `diag(√r₂, 1/√r₂)` on the second. The optimal pair
//! `(r₁, r₂)` maximizes the `|c₁|` admitted by `V - I/2 ≥ 0`; at that pair the
//! P-representation bound, Simon's bound and the Duan-type bound coincide.
//! Throughout, `t = |c₂|/|c₁| ∈ [0, 1]`.

use crate::covariance::{apply_symp, CovMat4, StandardForm, Symp2};
use crate::error::{Error, Result};

/// Slack when deciding that a denominator of the extremality ratio vanishes.
const ENDPOINT_EPS: f64 = 1e-12;

/// Slack for radicands that are zero in exact arithmetic.
const RADICAND_EPS: f64 = 1e-12;

/// Per-mode squeezing factors, both at least 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams {
    pub r1: f64,
    pub r2: f64,
}

impl SqueezeParams {
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        if !(r1.is_finite() && r2.is_finite() && r1 >= 1.0 && r2 >= 1.0) {
            return Err(Error::OutOfDomain(format!(
                "squeezing factors must be finite and >= 1, got ({r1}, {r2})"
            )));
        }
        Ok(SqueezeParams { r1, r2 })
    }

    pub fn identity() -> Self {
        SqueezeParams { r1: 1.0, r2: 1.0 }
    }

    /// The local symplectic pair `(diag(√r₁, 1/√r₁), diag(√r₂, 1/√r₂))`.
    pub fn transform(&self) -> (Symp2, Symp2) {
        // r ≥ 1 so both factors are positive and finite.
        (
            Symp2::squeeze(self.r1.sqrt()).expect("r1 >= 1"),
            Symp2::squeeze(self.r2.sqrt()).expect("r2 >= 1"),
        )
    }
}

/// Optimal squeezing and the `|c₁|`, `|c₂|` bounds it produces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeSolution {
    pub params: SqueezeParams,
    /// `a²b²(1-t²)² + t(a+bt)(at+b)`; the formulas use `√D`.
    pub d: f64,
    pub c1_bound: f64,
    pub c2_bound: f64,
    pub t: f64,
}

/// Squeezed covariance: diagonal `(a·r₁, a/r₁, b·r₂, b/r₂)`, correlations
/// `c₁√(r₁r₂)` and `c₂/√(r₁r₂)`.
pub fn apply_squeeze(sf: &StandardForm, p: &SqueezeParams) -> CovMat4 {
    let s = (p.r1 * p.r2).sqrt();
    let mut rows = [[0.0; 4]; 4];
    rows[0][0] = sf.a * p.r1;
    rows[1][1] = sf.a / p.r1;
    rows[2][2] = sf.b * p.r2;
    rows[3][3] = sf.b / p.r2;
    rows[0][2] = sf.c1 * s;
    rows[1][3] = sf.c2 / s;
    CovMat4::new(crate::matkit::SymMat4::from_upper(rows))
}

/// The same squeezed matrix obtained through the generic local action.
pub fn apply_squeeze_symp(sf: &StandardForm, p: &SqueezeParams) -> CovMat4 {
    let (s1, s2) = p.transform();
    apply_symp(&sf.covariance(), &s1, &s2)
}

/// The four scalar conditions equivalent to `V(r₁, r₂) - I/2 ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrepConditions {
    /// `(a - 1/(2r₁))(b - 1/(2r₂)) ≥ c₁²`
    pub position_det: bool,
    /// `(a - r₁/2)(b - r₂/2) ≥ c₂²`
    pub momentum_det: bool,
    /// `(a - 1/(2r₁)) + (b - 1/(2r₂)) ≥ 0`
    pub position_trace: bool,
    /// `(a - r₁/2) + (b - r₂/2) ≥ 0`
    pub momentum_trace: bool,
}

impl PrepConditions {
    pub fn all(&self) -> bool {
        self.position_det && self.momentum_det && self.position_trace && self.momentum_trace
    }
}

/// Evaluates the P-representation conditions for the squeezed standard form,
/// each with absolute slack `tol`.
pub fn prep_conditions(sf: &StandardForm, p: &SqueezeParams, tol: f64) -> PrepConditions {
    let (a, b) = (sf.a, sf.b);
    let xq = a - 0.5 / p.r1;
    let yq = b - 0.5 / p.r2;
    let xp = a - 0.5 * p.r1;
    let yp = b - 0.5 * p.r2;
    PrepConditions {
        position_det: xq * yq - sf.c1 * sf.c1 >= -tol,
        momentum_det: xp * yp - sf.c2 * sf.c2 >= -tol,
        position_trace: xq + yq >= -tol,
        momentum_trace: xp + yp >= -tol,
    }
}

fn check_ab(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a >= 0.5 && b >= 0.5) {
        return Err(Error::OutOfDomain(format!(
            "a and b must be >= 1/2, got a = {a}, b = {b}"
        )));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfDomain(format!("t must lie in [0, 1], got {t}")));
    }
    Ok(())
}

fn aux_d(a: f64, b: f64, t: f64) -> f64 {
    let u = a * b * (1.0 - t * t);
    u * u + t * (a + b * t) * (a * t + b)
}

/// Optimal squeezing for `(a, b, t)` and the resulting bounds.
///
/// `r₁ = [ab(1-t²) + √D]/(at + b)` and `r₂ = [ab(1-t²) + √D]/(a + bt)`.
/// Both are clamped into `[1, 2a]` and `[1, 2b]`, which they satisfy in
/// exact arithmetic. The `|c₁|` bound is
/// `√((a·r₁ - 1/2)(b·r₂ - 1/2)/(r₁r₂))`; see [`c1_bound_closed_form`] for the
/// equivalent expression in `D` alone.
pub fn optimal_squeeze(a: f64, b: f64, t: f64) -> Result<SqueezeSolution> {
    check_ab(a, b)?;
    check_t(t)?;
    let d = aux_d(a, b, t);
    let num = a * b * (1.0 - t * t) + d.sqrt();
    let r1 = (num / (a * t + b)).clamp(1.0, 2.0 * a);
    let r2 = (num / (a + b * t)).clamp(1.0, 2.0 * b);
    let radicand = ((a * r1 - 0.5) * (b * r2 - 0.5)).max(0.0);
    let c1_bound = (radicand / (r1 * r2)).sqrt();
    Ok(SqueezeSolution {
        params: SqueezeParams { r1, r2 },
        d,
        c1_bound,
        c2_bound: t * c1_bound,
        t,
    })
}

/// `(1/2t)·√(2ab(1+t²) + t - 2√D)`, the `|c₁|` bound written in `D` only.
///
/// Undefined at `t = 0`. The difference under the root cancels badly for
/// small `t`; [`optimal_squeeze`] avoids this form for that reason.
pub fn c1_bound_closed_form(a: f64, b: f64, t: f64) -> Result<f64> {
    check_ab(a, b)?;
    check_t(t)?;
    if t == 0.0 {
        return Err(Error::OutOfDomain("closed form is singular at t = 0".into()));
    }
    let inner = 2.0 * a * b * (1.0 + t * t) + t - 2.0 * aux_d(a, b, t).sqrt();
    Ok(inner.max(0.0).sqrt() / (2.0 * t))
}

/// The extremality constraint evaluated at a squeezing pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extremality {
    /// `(a·r₁ - 1/2)/(a/r₁ - 1/2) - (b·r₂ - 1/2)/(b/r₂ - 1/2)`.
    Residual(f64),
    /// `r₁ = 2a` and `r₂ = 2b`: both denominators vanish. The constraint
    /// holds there as the limit of the solution curve `r₂(r₁)`.
    Endpoint,
}

impl Extremality {
    /// The residual, with the endpoint counted as 0.
    pub fn value(&self) -> f64 {
        match self {
            Extremality::Residual(r) => *r,
            Extremality::Endpoint => 0.0,
        }
    }
}

pub fn extremality_residual(a: f64, b: f64, p: &SqueezeParams) -> Extremality {
    let den1 = a / p.r1 - 0.5;
    let den2 = b / p.r2 - 0.5;
    if den1.abs() <= ENDPOINT_EPS * a.max(1.0) && den2.abs() <= ENDPOINT_EPS * b.max(1.0) {
        return Extremality::Endpoint;
    }
    Extremality::Residual((a * p.r1 - 0.5) / den1 - (b * p.r2 - 0.5) / den2)
}

/// Solves the extremality constraint for `r₂` given `r₁ ∈ [1, 2a]`.
///
/// `r₂ = 4b / [√((1-X)² + 16b²X) + (1-X)]` with
/// `X = (2a/r₁ - 1)/(2a·r₁ - 1)`, so `r₂(1) = 1` and `r₂(2a) = 2b`.
pub fn r2_of_r1(a: f64, b: f64, r1: f64) -> Result<f64> {
    check_ab(a, b)?;
    if !(r1 >= 1.0 && r1 <= 2.0 * a) {
        return Err(Error::OutOfDomain(format!(
            "r1 must lie in [1, 2a] = [1, {}], got {r1}",
            2.0 * a
        )));
    }
    let den = 2.0 * a * r1 - 1.0;
    if den == 0.0 {
        return Err(Error::OutOfDomain(
            "a = 1/2: the constraint leaves r2 undetermined".into(),
        ));
    }
    let x = (2.0 * a / r1 - 1.0) / den;
    let one_minus = 1.0 - x;
    Ok(4.0 * b / ((one_minus * one_minus + 16.0 * b * b * x).sqrt() + one_minus))
}

fn checked_sqrt(v: f64, what: &str) -> Result<f64> {
    if v < -RADICAND_EPS || v.is_nan() {
        return Err(Error::OutOfDomain(format!("{what} radicand is negative ({v:e})")));
    }
    Ok(v.max(0.0).sqrt())
}

/// `|c₁|` bound from the Duan-type condition written along the extremal
/// curve:
/// `[√((a·r₁-1/2)(b·r₂-1/2)) + √((a/r₁-1/2)(b/r₂-1/2))] / [√(r₁r₂) + t/√(r₁r₂)]`.
///
/// Off that curve the numerator understates the true Duan bound; use
/// [`duan_bound_squeezed`] there.
pub fn duan_bound_at(a: f64, b: f64, t: f64, p: &SqueezeParams) -> Result<f64> {
    let s = (p.r1 * p.r2).sqrt();
    let first = checked_sqrt((a * p.r1 - 0.5) * (b * p.r2 - 0.5), "position")?;
    let second = checked_sqrt((a / p.r1 - 0.5) * (b / p.r2 - 0.5), "momentum")?;
    Ok((first + second) / (s + t / s))
}

/// `|c₁|` bound that the Duan-type block condition imposes on the squeezed
/// covariance at an arbitrary pair `(r₁, r₂)`:
/// `√((a·r₁ + a/r₁ - 1)(b·r₂ + b/r₂ - 1)) / [√(r₁r₂) + t/√(r₁r₂)]`.
pub fn duan_bound_squeezed(a: f64, b: f64, t: f64, p: &SqueezeParams) -> Result<f64> {
    let s = (p.r1 * p.r2).sqrt();
    let lhs = checked_sqrt(
        (a * p.r1 + a / p.r1 - 1.0) * (b * p.r2 + b / p.r2 - 1.0),
        "block",
    )?;
    Ok(lhs / (s + t / s))
}

/// Result of the concavity inequality
/// `√((n₁+n₂-1)(m₁+m₂-1)) ≥ √((n₁-½)(m₁-½)) + √((n₂-½)(m₂-½))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcavityGap {
    /// Left side minus right side; non-negative.
    pub gap: f64,
    /// Whether `(n₂-½)/(n₁-½) = (m₂-½)/(m₁-½)` holds (cross-multiplied,
    /// within 1e-9), the case where the inequality is tight.
    pub equality_condition_met: bool,
}

pub fn concavity_gap(n1: f64, n2: f64, m1: f64, m2: f64) -> Result<ConcavityGap> {
    if [n1, n2, m1, m2].iter().any(|x| !(x.is_finite() && *x >= 0.5)) {
        return Err(Error::OutOfDomain(format!(
            "all arguments must be >= 1/2, got ({n1}, {n2}, {m1}, {m2})"
        )));
    }
    let lhs = ((n1 + n2 - 1.0) * (m1 + m2 - 1.0)).sqrt();
    let rhs = ((n1 - 0.5) * (m1 - 0.5)).sqrt() + ((n2 - 0.5) * (m2 - 0.5)).sqrt();
    let cross = (n2 - 0.5) * (m1 - 0.5) - (n1 - 0.5) * (m2 - 0.5);
    Ok(ConcavityGap {
        gap: lhs - rhs,
        equality_condition_met: cross.abs() <= 1e-9,
    })
}

/// `f(x) = √((n₁ + x(n₂-n₁) - ½)(m₁ + x(m₂-m₁) - ½))` on the chord `x ∈ [0, 1]`.
pub fn concavity_chord(n1: f64, n2: f64, m1: f64, m2: f64, x: f64) -> f64 {
    ((n1 + x * (n2 - n1) - 0.5) * (m1 + x * (m2 - m1) - 0.5)).sqrt()
}

/// Closed-form second derivative of [`concavity_chord`]; never positive.
pub fn concavity_chord_curvature(n1: f64, n2: f64, m1: f64, m2: f64, x: f64) -> f64 {
    let det = (n1 - 0.5) * (m2 - 0.5) - (n2 - 0.5) * (m1 - 0.5);
    let u = n1 + x * (n2 - n1) - 0.5;
    let w = m1 + x * (m2 - m1) - 0.5;
    -0.25 * det * det * u.powf(-1.5) * w.powf(-1.5)
}

/// `√((a·r₁ + a/r₁ - 1)(b·r₂ + b/r₂ - 1)) - √((a·r₁-½)(b·r₂-½)) - √((a/r₁-½)(b/r₂-½))`.
///
/// Zero exactly when the extremality constraint holds, positive otherwise.
pub fn split_identity_gap(a: f64, b: f64, p: &SqueezeParams) -> f64 {
    let lhs = ((a * p.r1 + a / p.r1 - 1.0) * (b * p.r2 + b / p.r2 - 1.0)).sqrt();
    let first = ((a * p.r1 - 0.5) * (b * p.r2 - 0.5)).max(0.0).sqrt();
    let second = ((a / p.r1 - 0.5) * (b / p.r2 - 0.5)).max(0.0).sqrt();
    lhs - first - second
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkit::{is_psd_sym, PSD_TOL};
    use approx::assert_abs_diff_eq;

    fn sq(r1: f64, r2: f64) -> SqueezeParams {
        SqueezeParams::new(r1, r2).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(SqueezeParams::new(0.9, 1.0).is_err());
        assert!(SqueezeParams::new(1.0, f64::INFINITY).is_err());
        assert!(SqueezeParams::new(1.0, 3.0).is_ok());
    }

    #[test]
    fn apply_squeeze_examples() {
        let sf = StandardForm::from_params(1.0, 1.0, 0.5, -0.3);
        assert_eq!(apply_squeeze(&sf, &SqueezeParams::identity()), sf.covariance());

        let sf = StandardForm::from_params(1.0, 1.0, 0.75, 0.0);
        let v = apply_squeeze(&sf, &sq(2.0, 2.0));
        let m = v.matrix();
        assert_eq!(
            [m.get(0, 0), m.get(1, 1), m.get(2, 2), m.get(3, 3)],
            [2.0, 0.5, 2.0, 0.5]
        );
        assert_abs_diff_eq!(m.get(0, 2), 1.5, epsilon = 1e-15);

        let sf = StandardForm::from_params(1.3, 0.9, 0.4, -0.2);
        let p = sq(1.7, 1.2);
        assert!(apply_squeeze(&sf, &p).max_abs_diff(&apply_squeeze_symp(&sf, &p)) < 1e-14);
    }

    #[test]
    fn prep_conditions_examples() {
        let vac = StandardForm::from_params(0.5, 0.5, 0.0, 0.0);
        assert!(prep_conditions(&vac, &SqueezeParams::identity(), 0.0).all());

        // (1 - 1/4)² = 9/16 = c1², and the momentum product is 0.
        let edge = StandardForm::from_params(1.0, 1.0, 0.75, 0.0);
        assert!(prep_conditions(&edge, &sq(2.0, 2.0), 0.0).all());

        let out = StandardForm::from_params(1.0, 1.0, 0.8, 0.0);
        let c = prep_conditions(&out, &sq(2.0, 2.0), 1e-12);
        assert!(!c.position_det);
        assert!(c.momentum_det && c.position_trace && c.momentum_trace);
    }

    #[test]
    fn prep_conditions_match_matrix_psd() {
        let cases = [
            (1.0, 0.8, 0.3, 0.1, 1.4, 1.1),
            (2.0, 1.5, 1.2, -0.4, 2.0, 1.8),
            (0.7, 0.9, 0.05, 0.02, 1.0, 1.0),
            (1.2, 1.2, 0.9, 0.0, 2.4, 2.4),
        ];
        for (a, b, c1, c2, r1, r2) in cases {
            let sf = StandardForm::from_params(a, b, c1, c2);
            let p = sq(r1, r2);
            let by_matrix = is_psd_sym(&apply_squeeze(&sf, &p).matrix().shift(-0.5), 1e-13);
            assert_eq!(prep_conditions(&sf, &p, 1e-13).all(), by_matrix, "{a} {b} {c1} {c2}");
        }
    }

    #[test]
    fn optimal_squeeze_exact_points() {
        let s = optimal_squeeze(1.0, 1.0, 0.0).unwrap();
        assert_eq!((s.params.r1, s.params.r2), (2.0, 2.0));
        assert_abs_diff_eq!(s.c1_bound, 0.75, epsilon = 1e-15);
        assert_eq!(s.c2_bound, 0.0);

        let s = optimal_squeeze(1.0, 1.0, 1.0).unwrap();
        assert_eq!(s.d, 4.0);
        assert_eq!((s.params.r1, s.params.r2), (1.0, 1.0));
        assert_abs_diff_eq!(s.c1_bound, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.c2_bound, 0.5, epsilon = 1e-15);

        for t in [0.0, 0.3, 1.0] {
            let s = optimal_squeeze(0.5, 0.5, t).unwrap();
            assert_eq!(s.c1_bound, 0.0);
        }
    }

    #[test]
    fn optimal_squeeze_domain() {
        assert!(optimal_squeeze(0.4, 1.0, 0.0).is_err());
        assert!(optimal_squeeze(1.0, 0.49, 0.0).is_err());
        assert!(optimal_squeeze(1.0, 1.0, 1.01).is_err());
        assert!(optimal_squeeze(1.0, 1.0, -0.1).is_err());
    }

    /// `D` enters the formulas through its square root. Reading the printed
    /// auxiliary quantity as already being the root breaks both the
    /// symmetric no-squeezing point and the t = 0 endpoint.
    #[test]
    fn aux_quantity_is_the_radicand() {
        let (a, b) = (1.0_f64, 1.0_f64);
        let t = 1.0;
        let rad = aux_d(a, b, t);
        let r1 = |root_d: f64| (a * b * (1.0 - t * t) + root_d) / (a * t + b);
        assert_eq!(r1(rad.sqrt()), 1.0);
        assert!((r1(rad.sqrt().sqrt()) - 1.0).abs() > 0.1);

        let (a, b, t) = (1.5_f64, 0.8_f64, 0.0_f64);
        let rad = aux_d(a, b, t);
        let r1 = |root_d: f64| (a * b * (1.0 - t * t) + root_d) / (a * t + b);
        assert_abs_diff_eq!(r1(rad.sqrt()), 2.0 * a, epsilon = 1e-15);
        assert!((r1(rad.sqrt().sqrt()) - 2.0 * a).abs() > 0.1);
    }

    #[test]
    fn closed_form_agrees_and_is_continuous() {
        for &(a, b) in &[(1.0, 1.0), (1.5, 0.8), (5.0, 0.75), (0.6, 2.0)] {
            for k in 1..=10 {
                let t = f64::from(k) / 10.0;
                let s = optimal_squeeze(a, b, t).unwrap();
                let closed = c1_bound_closed_form(a, b, t).unwrap();
                assert!((s.c1_bound - closed).abs() <= 1e-12 * closed.max(1.0), "{a} {b} {t}");
            }
            let at0 = optimal_squeeze(a, b, 0.0).unwrap().c1_bound;
            let near = optimal_squeeze(a, b, 1e-7).unwrap().c1_bound;
            assert!((at0 - near).abs() < 1e-6);
            let closed_near = c1_bound_closed_form(a, b, 1e-3).unwrap();
            assert!((at0 - closed_near).abs() < 1e-2);
        }
        assert!(c1_bound_closed_form(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn extremality_examples() {
        assert_eq!(extremality_residual(1.3, 1.3, &sq(1.4, 1.4)).value(), 0.0);

        let s = optimal_squeeze(1.5, 0.8, 0.4).unwrap();
        assert!(extremality_residual(1.5, 0.8, &s.params).value().abs() < 1e-9);

        // (1.5 - 0.5)/(1/1.5 - 0.5) = 6 versus (1.2 - 0.5)/(1/1.2 - 0.5) = 2.1.
        let r = extremality_residual(1.0, 1.0, &sq(1.5, 1.2)).value();
        assert_abs_diff_eq!(r, 3.9, epsilon = 1e-12);

        let s = optimal_squeeze(1.0, 2.0, 0.0).unwrap();
        assert_eq!(extremality_residual(1.0, 2.0, &s.params), Extremality::Endpoint);
    }

    #[test]
    fn r2_of_r1_examples() {
        assert_eq!(r2_of_r1(1.5, 0.8, 1.0).unwrap(), 1.0);
        assert_abs_diff_eq!(r2_of_r1(1.5, 0.8, 3.0).unwrap(), 1.6, epsilon = 1e-15);
        let s = optimal_squeeze(1.5, 0.8, 0.4).unwrap();
        let r2 = r2_of_r1(1.5, 0.8, s.params.r1).unwrap();
        assert_abs_diff_eq!(r2, s.params.r2, epsilon = 1e-9);
        assert!(r2_of_r1(1.5, 0.8, 0.99).is_err());
        assert!(r2_of_r1(1.5, 0.8, 3.01).is_err());
        assert!(r2_of_r1(0.5, 0.8, 1.0).is_err());
    }

    #[test]
    fn duan_bound_examples() {
        assert_abs_diff_eq!(duan_bound_at(1.0, 1.0, 0.0, &sq(2.0, 2.0)).unwrap(), 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(duan_bound_at(1.0, 1.0, 1.0, &sq(1.0, 1.0)).unwrap(), 0.5, epsilon = 1e-15);
        assert_eq!(duan_bound_at(0.5, 0.5, 0.0, &SqueezeParams::identity()).unwrap(), 0.0);
        // r1 > 2a makes the momentum factors negative.
        assert!(duan_bound_at(1.0, 1.0, 0.5, &sq(3.0, 1.0)).is_err());

        assert_abs_diff_eq!(duan_bound_squeezed(1.0, 1.0, 0.0, &sq(2.0, 2.0)).unwrap(), 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(duan_bound_squeezed(1.0, 1.0, 1.0, &sq(1.0, 1.0)).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn concavity_examples() {
        let g = concavity_gap(2.0, 1.0, 2.0, 1.0).unwrap();
        assert_abs_diff_eq!(g.gap, 0.0, epsilon = 1e-15);
        assert!(g.equality_condition_met);

        let g = concavity_gap(2.0, 1.0, 1.0, 2.0).unwrap();
        assert_abs_diff_eq!(g.gap, 2.0 - 2.0 * 0.75_f64.sqrt(), epsilon = 1e-15);
        assert!(!g.equality_condition_met);

        let g = concavity_gap(0.5, 0.5, 1.7, 3.2).unwrap();
        assert_eq!(g.gap, 0.0);
        assert!(g.equality_condition_met);

        assert!(concavity_gap(0.4, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn chord_curvature_matches_finite_differences() {
        let (n1, n2, m1, m2) = (2.0, 0.9, 1.3, 3.1);
        let h = 1e-4;
        for x in [0.2, 0.5, 0.8] {
            let fd = (concavity_chord(n1, n2, m1, m2, x + h) - 2.0 * concavity_chord(n1, n2, m1, m2, x)
                + concavity_chord(n1, n2, m1, m2, x - h))
                / (h * h);
            let exact = concavity_chord_curvature(n1, n2, m1, m2, x);
            assert!(exact < 0.0);
            assert!((fd - exact).abs() < 1e-5 * exact.abs().max(1.0), "{fd} {exact}");
        }
    }

    #[test]
    fn split_identity_gap_examples() {
        assert_abs_diff_eq!(split_identity_gap(1.0, 1.0, &sq(2.0, 2.0)), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(split_identity_gap(1.0, 1.0, &sq(1.0, 1.0)), 0.0, epsilon = 1e-15);
        let off = split_identity_gap(1.0, 1.0, &sq(1.5, 1.2));
        let via_gap = concavity_gap(1.5, 1.0 / 1.5, 1.2, 1.0 / 1.2).unwrap().gap;
        assert!(off > 0.0);
        assert_abs_diff_eq!(off, via_gap, epsilon = 1e-15);
    }

    #[test]
    fn boundary_state_is_on_the_edge() {
        let (a, b, t) = (1.5, 0.8, 0.4);
        let s = optimal_squeeze(a, b, t).unwrap();
        let inside = StandardForm::from_params(a, b, s.c1_bound * (1.0 - 1e-12), s.c2_bound * (1.0 - 1e-12));
        assert!(is_psd_sym(&apply_squeeze(&inside, &s.params).matrix().shift(-0.5), PSD_TOL));
        let outside = StandardForm::from_params(a, b, s.c1_bound * (1.0 + 1e-6), s.c2_bound * (1.0 + 1e-6));
        assert!(!is_psd_sym(&apply_squeeze(&outside, &s.params).matrix().shift(-0.5), PSD_TOL));
    }
}
