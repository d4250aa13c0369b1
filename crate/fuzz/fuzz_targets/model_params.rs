#![no_main]
use citenet::generators::{grow_to_component, ModelParams};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(params) = ModelParams::from_config(text) {
        assert_eq!(ModelParams::from_config(&params.to_config()).ok(), Some(params.clone()));
        if params.n <= 64 {
            if let Ok((g, _)) = grow_to_component(&params, 2000) {
                assert_eq!(g.node_count(), params.n);
            }
        }
    }
});
