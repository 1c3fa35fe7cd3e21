#![no_main]

use libfuzzer_sys::fuzz_target;

use becsim::config::{parse_scan, to_json};
use becsim::scan::grid;

fuzz_target!(|data: &str| {
    if let Ok(cfg) = parse_scan(data) {
        assert_eq!(parse_scan(&to_json(&cfg)).unwrap(), cfg);
        assert!(!grid(&cfg).is_empty());
    }
});
