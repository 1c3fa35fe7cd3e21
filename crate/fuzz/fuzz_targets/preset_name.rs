#![no_main]

use libfuzzer_sys::fuzz_target;

use becsim::presets::{is_preset, preset};

fuzz_target!(|data: &str| {
    assert_eq!(preset(data).is_ok(), is_preset(data));
});
