#![no_main]

use hulthen::cli::config::{Command, RunConfig, Settings};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        // any text either parses or yields an error; resolution must not panic
        if let Ok(settings) = Settings::parse_file(text) {
            let _ = RunConfig::resolve(Command::Spectrum, settings.clone(), 1e-12);
            let _ = RunConfig::resolve(Command::Wavefunction, settings, 1e-12);
        }
    }
});
