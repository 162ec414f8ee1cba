#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = harderlab::exact::parse_quad(text) {
        let again = harderlab::exact::parse_quad(&x.to_string()).expect("roundtrip parse");
        assert_eq!(again, x);
        let _ = x.norm();
    }
    if let Ok(r) = harderlab::exact::parse_rat(text) {
        let again = harderlab::exact::parse_rat(&harderlab::exact::format_rat(&r))
            .expect("roundtrip parse");
        assert_eq!(again, r);
    }
});
