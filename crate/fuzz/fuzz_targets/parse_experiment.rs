#![no_main]

use libfuzzer_sys::fuzz_target;

use becsim::config::{parse_experiment, to_json};

fuzz_target!(|data: &str| {
    // Anything that parses must survive its own round trip unchanged.
    if let Ok(cfg) = parse_experiment(data) {
        assert_eq!(parse_experiment(&to_json(&cfg)).unwrap(), cfg);
    }
});
