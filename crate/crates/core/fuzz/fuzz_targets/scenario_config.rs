#![no_main]

use libfuzzer_sys::fuzz_target;
use spdc_oam::ScenarioConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = ScenarioConfig::from_json(text) {
        let again = ScenarioConfig::from_json(&cfg.to_json()).expect("valid configs re-parse");
        assert_eq!(again, cfg);
    }
});
