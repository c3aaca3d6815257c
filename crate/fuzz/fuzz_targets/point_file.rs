#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(pt) = integrals::point_from_json(text) {
        let again = integrals::point_from_json(&integrals::point_to_json(&pt)).expect("re-decodes");
        assert_eq!(pt.values(), again.values());
    }
});
