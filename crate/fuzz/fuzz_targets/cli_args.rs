#![no_main]

use libfuzzer_sys::fuzz_target;
use pathspin::cli::{parse_args, resolve};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let argv = std::iter::once("pathspin").chain(text.lines());
    if let Ok(args) = parse_args(argv) {
        let _ = resolve(args, None);
    }
});
