//! Input documents.
//!
//! Schema version 1, TOML:
//!
//! ```toml
//! version = 1          # optional; must be 1 when present
//! tol = 1e-10          # optional tolerance override
//!
//! # exactly one of
//! matrix = [[0.5, 0, 0, 0], [0, 0.5, 0, 0], [0, 0, 0.5, 0], [0, 0, 0, 0.5]]
//! # (a flat list of 16 numbers is also accepted, row-major)
//!
//! [standard_form]
//! a = 1.0
//! b = 1.0
//! c1 = 0.5
//! c2 = -0.5
//! ```

use cvsep::matkit::SymMat4;
use cvsep::CovMat4;
use serde::Deserialize;

pub const SCHEMA_VERSION: i64 = 1;

/// Largest asymmetry `|Vᵢⱼ - Vⱼᵢ|`, relative to `max(1, max|Vᵢⱼ|)`, that is
/// repaired on load.
pub const SYMMETRY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    Matrix(CovMat4),
    StandardForm { a: f64, b: f64, c1: f64, c2: f64 },
}

impl Representation {
    pub fn covariance(&self) -> CovMat4 {
        match self {
            Representation::Matrix(v) => *v,
            Representation::StandardForm { a, b, c1, c2 } => CovMat4::standard(*a, *b, *c1, *c2),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputDocument {
    pub representation: Representation,
    pub tol: Option<f64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct ParseError(pub String);

#[derive(Deserialize)]
#[serde(untagged)]
enum RawMatrix {
    Flat(Vec<f64>),
    Nested(Vec<Vec<f64>>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStandardForm {
    a: f64,
    b: f64,
    c1: f64,
    c2: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    version: Option<i64>,
    tol: Option<f64>,
    matrix: Option<RawMatrix>,
    standard_form: Option<RawStandardForm>,
}

fn err<T>(msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError(msg.into()))
}

fn matrix_rows(raw: RawMatrix) -> Result<[[f64; 4]; 4], ParseError> {
    let flat: Vec<f64> = match raw {
        RawMatrix::Flat(v) => v,
        RawMatrix::Nested(rows) => {
            if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
                return err("matrix must have 4 rows of 4 numbers");
            }
            rows.into_iter().flatten().collect()
        }
    };
    if flat.len() != 16 {
        return err(format!("matrix must have 16 entries, got {}", flat.len()));
    }
    Ok(std::array::from_fn(|i| std::array::from_fn(|j| flat[4 * i + j])))
}

pub fn parse_document(text: &str) -> Result<InputDocument, ParseError> {
    let raw: RawDocument = toml::from_str(text).map_err(|e| ParseError(e.to_string()))?;
    if let Some(v) = raw.version {
        if v != SCHEMA_VERSION {
            return err(format!("unsupported schema version {v}, expected {SCHEMA_VERSION}"));
        }
    }
    if let Some(t) = raw.tol {
        if !(t.is_finite() && t > 0.0) {
            return err(format!("tol must be a positive finite number, got {t}"));
        }
    }
    let mut warnings = Vec::new();
    let representation = match (raw.matrix, raw.standard_form) {
        (Some(_), Some(_)) => return err("give either `matrix` or `[standard_form]`, not both"),
        (None, None) => return err("missing `matrix` or `[standard_form]`"),
        (Some(m), None) => {
            let rows = matrix_rows(m)?;
            if rows.iter().flatten().any(|x| !x.is_finite()) {
                return err("matrix entries must be finite");
            }
            let scale = rows.iter().flatten().fold(1.0_f64, |acc, x| acc.max(x.abs()));
            let asym = SymMat4::asymmetry(&rows);
            if asym > SYMMETRY_TOL * scale {
                return err(format!("matrix is not symmetric (max |Vij - Vji| = {asym:e})"));
            }
            if asym > 0.0 {
                warnings.push(format!("matrix symmetrized (max |Vij - Vji| = {asym:e})"));
            }
            Representation::Matrix(CovMat4::new(SymMat4::symmetrize(rows)))
        }
        (None, Some(sf)) => {
            if ![sf.a, sf.b, sf.c1, sf.c2].iter().all(|x| x.is_finite()) {
                return err("standard form entries must be finite");
            }
            Representation::StandardForm {
                a: sf.a,
                b: sf.b,
                c1: sf.c1,
                c2: sf.c2,
            }
        }
    };
    Ok(InputDocument {
        representation,
        tol: raw.tol,
        warnings,
    })
}
