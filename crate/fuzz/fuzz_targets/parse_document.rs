#![no_main]

use cvsep::criteria::classify;
use cvsep_cli::document::{parse_document, Representation};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(doc) = parse_document(text) else {
        return;
    };
    let v = doc.representation.covariance();
    assert!(v.matrix().is_finite());
    if let Representation::Matrix(m) = &doc.representation {
        assert_eq!(cvsep::matkit::SymMat4::asymmetry(m.matrix().rows()), 0.0);
    }
    let tol = doc.tol.unwrap_or(1e-10);
    assert!(tol > 0.0);
    // Huge entries may overflow inside the eigen-solver; errors are fine,
    // panics are not.
    let _ = classify(&v, tol);
});
