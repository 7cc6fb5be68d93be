#![no_main]

use libfuzzer_sys::fuzz_target;
use polymethod::incidence::parse_adjacency;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    match parse_adjacency(text, None) {
        Ok(x) => assert_eq!(parse_adjacency(&x.render(), Some(x.n_points)).unwrap(), x),
        Err(polymethod::Error::Parse { position, .. }) => assert!(position <= text.len()),
        Err(_) => {}
    }
});
