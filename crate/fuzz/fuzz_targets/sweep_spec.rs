#![no_main]
use citenet::harness::{BoundsSpec, SweepSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = SweepSpec::from_config(text) {
        assert!(!spec.points().is_empty());
    }
    if let Ok(spec) = BoundsSpec::from_config(text) {
        assert!(!spec.points().is_empty());
    }
});
