#![no_main]

use libfuzzer_sys::fuzz_target;
use onuw_llm::{extract_json_object, ReplyFormat, StructuredReply};

const FORMATS: [ReplyFormat; 7] = [
    ReplyFormat::Speech,
    ReplyFormat::Switch,
    ReplyFormat::Swap,
    ReplyFormat::Player,
    ReplyFormat::TacticChoice,
    ReplyFormat::Belief,
    ReplyFormat::Text,
];

// First byte picks the expected layout, the rest is the reply.
fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else { return };
    let Ok(raw) = std::str::from_utf8(rest) else { return };
    let reply = StructuredReply::parse(raw, FORMATS[sel as usize % FORMATS.len()]);
    assert_eq!(reply.parsed.is_some(), reply.error.is_none());
    let _ = extract_json_object(raw);
});
