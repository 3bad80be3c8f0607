#![no_main]

use libfuzzer_sys::fuzz_target;
use onuw_agents::AgentConfig;
use onuw_harness::{ExperimentConfig, TournamentConfig};
use onuw_llm::{ModelConfig, PromptTemplates};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = ExperimentConfig::from_toml(text);
    let _ = TournamentConfig::from_toml(text);
    let _ = AgentConfig::from_toml(text);
    let _ = ModelConfig::from_toml(text);
    let _ = PromptTemplates::default().with_overrides(text);
});
