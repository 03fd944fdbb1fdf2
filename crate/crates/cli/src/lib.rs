//! Command implementations behind the `cvsep` binary.
//!
//! Each command writes its data to `out`, warnings to `warn`, and returns the
//! process exit code.

pub mod document;
pub mod range;

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use cvsep::covariance::to_standard_form;
use cvsep::criteria::{self, simon_c1_bound, Classification, CriterionKind};
use cvsep::squeezing::{self, duan_bound_at, extremality_residual, Extremality};
use cvsep::statezoo::audit_state;
use cvsep::CovMat4;

use crate::document::{parse_document, InputDocument};

pub const DEFAULT_TOL: f64 = 1e-10;

pub const EXIT_SEPARABLE: u8 = 0;
pub const EXIT_ENTANGLED: u8 = 1;
pub const EXIT_NONPHYSICAL: u8 = 2;
pub const EXIT_AUDIT_FAILED: u8 = 3;
pub const EXIT_PARSE: u8 = 64;
pub const EXIT_DEGENERATE: u8 = 65;
pub const EXIT_DOMAIN: u8 = 66;
pub const EXIT_INTERNAL: u8 = 70;
pub const EXIT_UNWRITABLE: u8 = 73;
pub const EXIT_UNREADABLE: u8 = 74;

pub const CSV_HEADER: [&str; 9] = [
    "a",
    "b",
    "t",
    "c1_prep",
    "c1_simon",
    "c1_duan",
    "r1",
    "r2",
    "max_rel_disagreement",
];

pub const DEFAULT_AB: [f64; 6] = [0.5, 0.75, 1.0, 1.5, 2.0, 5.0];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cannot read input: {0}")]
    Unreadable(String),
    #[error("{0}")]
    Degenerate(String),
    #[error("{0}")]
    OutOfDomain(String),
    #[error("cannot write output: {0}")]
    Unwritable(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Unreadable(_) => EXIT_UNREADABLE,
            CliError::Degenerate(_) => EXIT_DEGENERATE,
            CliError::OutOfDomain(_) => EXIT_DOMAIN,
            CliError::Unwritable(_) => EXIT_UNWRITABLE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<cvsep::Error> for CliError {
    fn from(e: cvsep::Error) -> Self {
        match e {
            cvsep::Error::DegenerateBlock { .. } => CliError::Degenerate(e.to_string()),
            cvsep::Error::OutOfDomain(_) => CliError::OutOfDomain(e.to_string()),
            cvsep::Error::InvalidInput(_) | cvsep::Error::Parse(_) | cvsep::Error::InvalidSpec(_) => {
                CliError::Parse(e.to_string())
            }
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<document::ParseError> for CliError {
    fn from(e: document::ParseError) -> Self {
        CliError::Parse(e.0)
    }
}

fn io_err(e: io::Error) -> CliError {
    CliError::Unwritable(e.to_string())
}

pub type CliResult = Result<u8, CliError>;

pub fn exit_code(class: Classification) -> u8 {
    match class {
        Classification::Separable => EXIT_SEPARABLE,
        Classification::Entangled => EXIT_ENTANGLED,
        Classification::Nonphysical => EXIT_NONPHYSICAL,
    }
}

pub fn load(path: &Path, warn: &mut dyn Write) -> Result<InputDocument, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Unreadable(format!("{}: {e}", path.display())))?;
    let doc = parse_document(&text)?;
    for w in &doc.warnings {
        let _ = writeln!(warn, "warning: {w}");
    }
    Ok(doc)
}

fn resolve_tol(flag: Option<f64>, doc: &InputDocument) -> Result<f64, CliError> {
    let tol = flag.or(doc.tol).unwrap_or(DEFAULT_TOL);
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Parse(format!("tolerance must be positive, got {tol}")));
    }
    Ok(tol)
}

pub fn cmd_classify(path: &Path, tol: Option<f64>, out: &mut dyn Write, warn: &mut dyn Write) -> CliResult {
    let doc = load(path, warn)?;
    let tol = resolve_tol(tol, &doc)?;
    let v = doc.representation.covariance();
    let verdict = criteria::classify(&v, tol)?;
    writeln!(out, "classification: {}", verdict.class).map_err(io_err)?;
    writeln!(out, "tol: {tol:e}").map_err(io_err)?;
    for (kind, r) in &verdict.reports {
        writeln!(
            out,
            "{kind}: satisfied={} margin={:e} branch={}",
            r.satisfied, r.margin, r.branch
        )
        .map_err(io_err)?;
        if let Some(w) = &r.witness {
            writeln!(out, "  witness: {}", w.params).map_err(io_err)?;
        }
    }
    if let Some(sf) = &verdict.standard_form {
        writeln!(out, "standard_form: a={:e} b={:e} c1={:e} c2={:e}", sf.a, sf.b, sf.c1, sf.c2).map_err(io_err)?;
    }
    if let Some(sq) = &verdict.squeeze {
        writeln!(
            out,
            "optimal_squeeze: r1={:e} r2={:e} c1_bound={:e}",
            sq.params.r1, sq.params.r2, sq.c1_bound
        )
        .map_err(io_err)?;
    }
    writeln!(out, "consistent: {}", verdict.consistent).map_err(io_err)?;
    if !verdict.consistent {
        let _ = writeln!(
            warn,
            "warning: matrix Simon test and P-representation bound disagree; the state is within tolerance of the boundary"
        );
    }
    Ok(exit_code(verdict.class))
}

fn invariants(v: &CovMat4) -> [f64; 4] {
    [v.a().det(), v.b().det(), v.c().det(), v.det()]
}

pub fn cmd_standard_form(path: &Path, out: &mut dyn Write, warn: &mut dyn Write) -> CliResult {
    let doc = load(path, warn)?;
    let v = doc.representation.covariance();
    let sf = to_standard_form(&v)?;
    let before = invariants(&v);
    let after = invariants(&sf.covariance());
    writeln!(out, "a: {:e}", sf.a).map_err(io_err)?;
    writeln!(out, "b: {:e}", sf.b).map_err(io_err)?;
    writeln!(out, "c1: {:e}", sf.c1).map_err(io_err)?;
    writeln!(out, "c2: {:e}", sf.c2).map_err(io_err)?;
    writeln!(out, "s1: {}", sf.s1).map_err(io_err)?;
    writeln!(out, "s2: {}", sf.s2).map_err(io_err)?;
    for (name, (x, y)) in ["det_a", "det_b", "det_c", "det_v"].iter().zip(before.iter().zip(after)) {
        writeln!(out, "{name}: before={x:e} after={y:e}").map_err(io_err)?;
    }
    Ok(0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub a: f64,
    pub b: f64,
    pub t: f64,
    pub c1_prep: f64,
    pub c1_simon: f64,
    pub c1_duan: f64,
    pub r1: f64,
    pub r2: f64,
    pub max_rel_disagreement: f64,
}

fn rel_diff(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}

impl ScanRow {
    pub fn compute(a: f64, b: f64, t: f64) -> Result<ScanRow, CliError> {
        let sol = squeezing::optimal_squeeze(a, b, t)?;
        let c1_simon = simon_c1_bound(a, b, t)?;
        let c1_duan = duan_bound_at(a, b, t, &sol.params)?;
        let c1_prep = sol.c1_bound;
        let max_rel_disagreement = rel_diff(c1_prep, c1_simon)
            .max(rel_diff(c1_prep, c1_duan))
            .max(rel_diff(c1_simon, c1_duan));
        Ok(ScanRow {
            a,
            b,
            t,
            c1_prep,
            c1_simon,
            c1_duan,
            r1: sol.params.r1,
            r2: sol.params.r2,
            max_rel_disagreement,
        })
    }

    pub fn fields(&self) -> [f64; 9] {
        [
            self.a,
            self.b,
            self.t,
            self.c1_prep,
            self.c1_simon,
            self.c1_duan,
            self.r1,
            self.r2,
            self.max_rel_disagreement,
        ]
    }
}

/// Rows in `a`-major, then `b`, then `t` order.
pub fn scan_rows(a: &[f64], b: &[f64], t: &[f64]) -> Result<Vec<ScanRow>, CliError> {
    let mut rows = Vec::with_capacity(a.len() * b.len() * t.len());
    for &x in a {
        for &y in b {
            for &z in t {
                rows.push(ScanRow::compute(x, y, z)?);
            }
        }
    }
    Ok(rows)
}

/// 17 significant digits, so every value round-trips.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv(rows: &[ScanRow], out: &mut dyn Write) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.fields().map(format_number))?;
    }
    w.flush()
}

pub fn cmd_scan(a: &[f64], b: &[f64], t: &[f64], out_path: Option<&Path>, stdout: &mut dyn Write) -> CliResult {
    let rows = scan_rows(a, b, t)?;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).map_err(io_err)?;
    match out_path {
        Some(p) => fs::write(p, &buf).map_err(|e| CliError::Unwritable(format!("{}: {e}", p.display())))?,
        None => stdout.write_all(&buf).map_err(io_err)?,
    }
    Ok(0)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AuditReport {
    pub samples: u64,
    pub seed: u64,
    pub prep: u64,
    pub stringent: u64,
    pub simon: u64,
    pub duan: u64,
    /// Simon holds but the state itself is not P-representable.
    pub simon_not_prep: u64,
    /// Duan holds but Simon fails.
    pub duan_not_simon: u64,
    /// `classify` and the matrix Simon test disagree.
    pub verdict_disagreements: u64,
    pub counterexamples: Vec<(u64, &'static str)>,
}

pub fn run_audit(samples: u64, seed: u64, tol: f64) -> Result<AuditReport, CliError> {
    let mut rep = AuditReport {
        samples,
        seed,
        ..AuditReport::default()
    };
    for i in 0..samples {
        let v = audit_state(seed, i);
        let h = criteria::hierarchy(&v, tol)?;
        rep.prep += u64::from(h.prep);
        rep.stringent += u64::from(h.stringent);
        rep.simon += u64::from(h.simon);
        rep.duan += u64::from(h.duan);
        rep.simon_not_prep += u64::from(h.simon && !h.prep);
        rep.duan_not_simon += u64::from(h.duan && !h.simon);
        rep.counterexamples.extend(h.violations().into_iter().map(|name| (i, name)));
        let verdict = criteria::classify(&v, tol)?;
        let simon = verdict.report(CriterionKind::Simon).is_some_and(|r| r.satisfied);
        rep.verdict_disagreements += u64::from(simon != (verdict.class == Classification::Separable));
    }
    Ok(rep)
}

fn rate(n: u64, d: u64) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

pub fn write_audit(rep: &AuditReport, tol: f64, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "samples: {}", rep.samples)?;
    writeln!(out, "seed: {}", rep.seed)?;
    writeln!(out, "tol: {tol:e}")?;
    writeln!(out, "p_representable: {}", rep.prep)?;
    writeln!(out, "stringent: {}", rep.stringent)?;
    writeln!(out, "simon: {}", rep.simon)?;
    writeln!(out, "duan: {}", rep.duan)?;
    writeln!(
        out,
        "strict_simon_not_prep: {} ({:.4})",
        rep.simon_not_prep,
        rate(rep.simon_not_prep, rep.simon)
    )?;
    writeln!(
        out,
        "strict_duan_not_simon: {} ({:.4})",
        rep.duan_not_simon,
        rate(rep.duan_not_simon, rep.duan)
    )?;
    writeln!(out, "verdict_disagreements: {}", rep.verdict_disagreements)?;
    writeln!(out, "counterexamples: {}", rep.counterexamples.len())?;
    for (i, name) in &rep.counterexamples {
        writeln!(out, "  sample {i}: {name}")?;
    }
    Ok(())
}

pub fn cmd_audit(samples: u64, seed: u64, tol: Option<f64>, out: &mut dyn Write) -> CliResult {
    if samples == 0 {
        return Err(CliError::Parse("samples must be at least 1".into()));
    }
    let tol = tol.unwrap_or(DEFAULT_TOL);
    let rep = run_audit(samples, seed, tol)?;
    write_audit(&rep, tol, out).map_err(io_err)?;
    Ok(if rep.counterexamples.is_empty() { 0 } else { EXIT_AUDIT_FAILED })
}

pub fn cmd_squeeze(a: f64, b: f64, t: f64, out: &mut dyn Write) -> CliResult {
    let sol = squeezing::optimal_squeeze(a, b, t)?;
    let residual = match extremality_residual(a, b, &sol.params) {
        Extremality::Residual(r) => format!("{r:e}"),
        Extremality::Endpoint => "0 (endpoint)".to_string(),
    };
    writeln!(out, "r1: {:e}", sol.params.r1).map_err(io_err)?;
    writeln!(out, "r2: {:e}", sol.params.r2).map_err(io_err)?;
    writeln!(out, "d: {:e}", sol.d).map_err(io_err)?;
    writeln!(out, "c1_bound: {:e}", sol.c1_bound).map_err(io_err)?;
    writeln!(out, "c2_bound: {:e}", sol.c2_bound).map_err(io_err)?;
    writeln!(out, "extremality_residual: {residual}").map_err(io_err)?;
    Ok(0)
}
