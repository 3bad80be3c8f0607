#![no_main]

use libfuzzer_sys::fuzz_target;
use onuw_core::PlayerId;
use onuw_llm::{extract_role_mentions, parse_reply, Parsed, ReplyFormat};

// First byte: speaker seat and player count.
fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else { return };
    let Ok(raw) = std::str::from_utf8(rest) else { return };
    let n = 3 + (sel as usize >> 4) % 3;
    let speaker = PlayerId((sel % n as u8) as u8);
    let text = match parse_reply(raw, ReplyFormat::Belief) {
        Ok(Parsed::Belief { result, .. }) => result,
        _ => raw.to_string(),
    };
    for (p, _) in extract_role_mentions(&text, speaker, n) {
        assert!(p.index() < n);
    }
});
