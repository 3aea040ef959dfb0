#![no_main]

use chabauty_core::classify::{classify_integral, classify_numeral};
use chabauty_core::duality::dual;
use chabauty_core::grammar::{normalize, parse, render};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(g) = parse(text) else {
        return;
    };
    let n = normalize(&g);
    assert_eq!(normalize(&n), n);
    // rendering must parse back to the same group
    let again = parse(&render(&n)).expect("rendered expression parses");
    assert_eq!(normalize(&again), n);
    if classify_numeral(&g).answer {
        assert!(classify_integral(&g).answer);
    }
    if let Ok(d) = dual(&g) {
        assert_eq!(normalize(&dual(&d).expect("dual of a dual")), n);
    }
});
