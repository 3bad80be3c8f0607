#![no_main]

use libfuzzer_sys::fuzz_target;
use onuw_core::{replay, GameLog};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(log) = GameLog::parse(text) {
        let _ = replay(&log);
        let _ = log.to_json();
    }
});
