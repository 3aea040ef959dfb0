#![no_main]

use chabauty_core::textio::{parse_radius, parse_rational};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(x) = parse_rational(text) {
        // the a/b form is canonical
        assert_eq!(parse_rational(&x.to_string()).unwrap(), x);
    }
    let _ = parse_radius(text);
});
