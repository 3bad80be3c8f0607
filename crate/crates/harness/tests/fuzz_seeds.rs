//! The checked-in fuzz corpus seeds go through the same entry points as the fuzz targets,
//! so a format change that invalidates a seed shows up in the normal test run.

use std::fs;
use std::path::PathBuf;

use onuw_agents::AgentConfig;
use onuw_core::{replay, GameLog, PlayerId};
use onuw_harness::{ExperimentConfig, TournamentConfig};
use onuw_llm::{extract_role_mentions, FixtureStore, ModelConfig, PromptTemplates, ReplyFormat, StructuredReply};
use onuw_policy::{TrainerConfig, TransitionsFile};

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn text(bytes: &[u8]) -> &str {
    std::str::from_utf8(bytes).unwrap()
}

#[test]
fn game_log_seeds_parse_and_replay() {
    for (name, data) in seeds("gamelog_parse") {
        let log = GameLog::parse(text(&data)).unwrap_or_else(|e| panic!("{name}: {e}"));
        replay(&log).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn transitions_seeds_parse() {
    for (name, data) in seeds("transitions_parse") {
        TransitionsFile::parse(text(&data)).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn reply_seeds_cover_every_layout() {
    let mut parsed = 0;
    for (_, data) in seeds("structured_reply_parse") {
        let (sel, rest) = data.split_first().unwrap();
        let format = match sel % 7 {
            0 => ReplyFormat::Speech,
            1 => ReplyFormat::Switch,
            2 => ReplyFormat::Swap,
            3 => ReplyFormat::Player,
            4 => ReplyFormat::TacticChoice,
            5 => ReplyFormat::Belief,
            _ => ReplyFormat::Text,
        };
        if !StructuredReply::parse(text(rest), format).parse_failed() {
            parsed += 1;
        }
    }
    assert_eq!(parsed, 7, "one parsable seed per layout");
    for (name, data) in seeds("belief_reply_parse") {
        let rest = text(&data[1..]);
        let found = extract_role_mentions(rest, PlayerId(0), 5);
        assert!(found.iter().all(|(p, _)| p.index() < 5), "{name}");
    }
}

#[test]
fn config_seeds_load() {
    for (name, data) in seeds("config_parse") {
        let t = text(&data);
        let ok = match name.as_str() {
            "prompts_default.toml" => PromptTemplates::default().with_overrides(t).is_ok(),
            "tournament_scripted.toml" => TournamentConfig::from_toml(t).is_ok(),
            "trainer_small.toml" => toml::from_str::<TrainerConfig>(t).is_ok(),
            _ => ExperimentConfig::from_toml(t).is_ok(),
        };
        assert!(ok, "{name}");
        // The other readers must reject or accept without panicking.
        let _ = AgentConfig::from_toml(t);
        let _ = ModelConfig::from_toml(t);
    }
}

#[test]
fn fixture_store_seeds_parse() {
    for (name, data) in seeds("fixture_store_parse") {
        FixtureStore::parse(text(&data)).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}
