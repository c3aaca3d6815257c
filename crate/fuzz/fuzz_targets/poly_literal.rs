#![no_main]
use libfuzzer_sys::fuzz_target;

// A parsed literal prints to text that parses back to the same polynomial.
// Products can push exponents past the literal limits, so a rejected
// reprint is fine; a different value is not.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = exactalg::parse::parse_poly(text) {
        if let Ok(again) = exactalg::parse::parse_poly(&p.to_string()) {
            assert_eq!(p, again);
        }
    }
});
