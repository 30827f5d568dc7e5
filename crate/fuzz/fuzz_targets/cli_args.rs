#![no_main]

use clap::Parser;
use hulthen::cli::{resolve, Cli};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // NUL-separated argv; parse and resolve only, never execute
    let args = std::iter::once("hulthen").chain(text.split('\0'));
    if let Ok(cli) = Cli::try_parse_from(args) {
        let (command, flags) = cli.command.split();
        if flags.config.is_none() {
            let _ = resolve(command, flags);
        }
    }
});
