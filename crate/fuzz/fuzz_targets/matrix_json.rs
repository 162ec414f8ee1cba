#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(mat) = harderlab::siegel::HalfIntegralMat::parse_json(text) {
        // accepted input must survive a serialize/parse roundtrip
        let again = harderlab::siegel::HalfIntegralMat::parse_json(&mat.to_json())
            .expect("roundtrip parse");
        assert_eq!(again, mat);
        // cheap invariant probes must not panic (size-capped for speed)
        if mat.size() <= 12 {
            let _ = mat.is_psd();
            let _ = mat.det_twice();
        }
    }
});
