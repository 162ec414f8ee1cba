#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let mut store = harderlab::fixtures::FixtureStore::default();
    if store.load_str(text).is_ok() {
        // every accepted key must resolve to a parseable exact value
        let keys: Vec<String> = store.keys().cloned().collect();
        for k in keys {
            store.get(&k).expect("accepted fixture resolves");
        }
    }
});
