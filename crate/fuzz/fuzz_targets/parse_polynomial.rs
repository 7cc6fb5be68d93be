#![no_main]

use libfuzzer_sys::fuzz_target;
use polymethod::Polynomial;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for n in 1..=4 {
        if let Ok(p) = Polynomial::parse(text, n) {
            // Rendering must parse back to the same polynomial.
            assert_eq!(Polynomial::parse(&p.to_string(), n).unwrap(), p);
        }
    }
});
