#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(psi) = harderlab::lifts::parse_parameter_json(text) {
        // accepted parameters admit a character and a sign evaluation
        let ic = harderlab::lifts::inf_char(&psi);
        let _ = harderlab::lifts::weight_from_infchar(&ic);
        let _ = harderlab::lifts::sign_condition(&psi);
    }
});
