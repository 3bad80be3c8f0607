#![no_main]

use libfuzzer_sys::fuzz_target;
use onuw_policy::TransitionsFile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(file) = TransitionsFile::parse(text) {
        let mut out = Vec::new();
        file.write(&mut out).unwrap();
    }
});
