#![no_main]

use cvsep_cli::range::{parse_range, MAX_COUNT};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(values) = parse_range(text) {
        assert!(!values.is_empty());
        assert!(values.len() <= MAX_COUNT.max(text.len()));
        assert!(values.iter().all(|v| !v.is_nan()));
    }
});
