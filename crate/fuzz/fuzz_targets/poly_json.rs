#![no_main]
use libfuzzer_sys::fuzz_target;

// Anything that decodes must survive a round trip unchanged.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = exactalg::json::poly_from_str(text) {
        let again = exactalg::json::poly_from_str(&exactalg::json::poly_to_string(&p)).expect("re-decodes");
        assert_eq!(p, again);
    }
});
