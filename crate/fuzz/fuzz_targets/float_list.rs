#![no_main]

use hulthen::cli::config::parse_float_list;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(values) = parse_float_list(text) {
            assert!(!values.is_empty());
            assert!(values.iter().all(|v| v.is_finite()));
            // re-rendered lists parse back to the same values
            let again: Vec<String> = values.iter().map(|v| format!("{v:e}")).collect();
            assert_eq!(parse_float_list(&again.join(",")).unwrap(), values);
        }
    }
});
