//! Experiment configuration and the shared resources agents are built from.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use onuw_agents::AgentConfig;
use onuw_core::OutcomeRules;
use onuw_equilibrium::StrategyProfile3P;
use onuw_llm::{Gateway, ModelConfig, PromptTemplates, RecordingTransport};
use onuw_policy::QFunction;
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;
use crate::settings::Setting;

pub const DEFAULT_REPEATS: u32 = 30;

/// How model-backed players reach the model.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GatewayMode {
    #[default]
    Live,
    /// Live calls, every exchange saved to the fixture file.
    Record,
    /// Fixture file only; no network.
    Replay,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelSettings {
    pub config: Option<ModelConfig>,
    pub mode: GatewayMode,
    pub fixtures: Option<PathBuf>,
    /// Template overrides merged over the bundled prompt set.
    pub prompts: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub setting: Setting,
    /// One entry per seat, in seat order.
    pub seats: Vec<AgentConfig>,
    /// Three-player setting only: every seat plays this behavioral profile instead of `seats`.
    pub profile: Option<StrategyProfile3P>,
    pub repeats: u32,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    /// Parallel matches; `None` uses all cores.
    pub workers: Option<usize>,
    pub rules: OutcomeRules,
    /// Scripted seats in a fixed preset follow the preset's night actions.
    pub pin_preset_night: bool,
    pub model: ModelSettings,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            setting: Setting::FiveStandard,
            seats: Vec::new(),
            profile: None,
            repeats: DEFAULT_REPEATS,
            seed: 0,
            output_dir: None,
            workers: None,
            rules: OutcomeRules::Standard,
            pin_preset_night: true,
            model: ModelSettings::default(),
        }
    }
}

impl ExperimentConfig {
    /// Every seat scripted with default settings.
    pub fn scripted(setting: Setting) -> Self {
        ExperimentConfig {
            setting,
            seats: vec![AgentConfig::scripted(); setting.player_count()],
            ..Self::default()
        }
    }

    /// Three-player games where every seat follows `profile`.
    pub fn profile(profile: StrategyProfile3P) -> Self {
        ExperimentConfig { setting: Setting::ThreePlayer, profile: Some(profile), ..Self::default() }
    }

    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.repeats == 0 {
            return Err(HarnessError::Config("repeats must be at least 1".into()));
        }
        if self.workers == Some(0) {
            return Err(HarnessError::Config("workers must be at least 1".into()));
        }
        match &self.profile {
            Some(p) => {
                if self.setting != Setting::ThreePlayer {
                    return Err(HarnessError::Config(
                        "a behavioral profile needs the three_player setting".into(),
                    ));
                }
                p.validate()?;
            }
            None => {
                let n = self.setting.player_count();
                if self.seats.len() != n {
                    return Err(HarnessError::Config(format!(
                        "{} has {n} seats, {} agent configs given",
                        self.setting,
                        self.seats.len()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn needs_gateway(&self) -> bool {
        self.profile.is_none() && self.seats.iter().any(|s| s.kind.needs_gateway())
    }
}

/// Gateway, prompts and policy shared by all seats of an experiment.
#[derive(Clone)]
pub struct Resources {
    pub gateway: Option<Arc<Gateway>>,
    pub prompts: Arc<PromptTemplates>,
    pub q: Option<Arc<QFunction>>,
    recorder: Option<Arc<RecordingTransport>>,
}

impl Default for Resources {
    fn default() -> Self {
        Resources::offline()
    }
}

impl Resources {
    /// No model access; enough for scripted and profile seats.
    pub fn offline() -> Self {
        Resources {
            gateway: None,
            prompts: Arc::new(PromptTemplates::default()),
            q: None,
            recorder: None,
        }
    }

    pub fn with_gateway(mut self, gateway: Arc<Gateway>) -> Self {
        self.gateway = Some(gateway);
        self
    }

    pub fn with_q(mut self, q: Arc<QFunction>) -> Self {
        self.q = Some(q);
        self
    }

    /// Builds what `cfg` asks for. A gateway is only opened when some seat needs one.
    pub fn for_experiment(cfg: &ExperimentConfig) -> Result<Self, HarnessError> {
        let mut res = Resources::offline();
        if let Some(path) = &cfg.model.prompts {
            let text = std::fs::read_to_string(path)
                .map_err(|e| HarnessError::Config(format!("prompts file {}: {e}", path.display())))?;
            res.prompts = Arc::new(PromptTemplates::default().with_overrides(&text)?);
        }
        if !cfg.needs_gateway() {
            return Ok(res);
        }
        let model = cfg.model.config.clone().unwrap_or_default();
        let fixtures = || {
            cfg.model.fixtures.clone().ok_or_else(|| {
                HarnessError::Config(format!("{:?} mode needs a fixture file", cfg.model.mode))
            })
        };
        let gateway = match cfg.model.mode {
            GatewayMode::Live => Gateway::http(model)?,
            GatewayMode::Replay => Gateway::replay(model, &fixtures()?)?,
            GatewayMode::Record => {
                let (g, rec) = Gateway::recording(model, &fixtures()?)?;
                res.recorder = Some(rec);
                g
            }
        };
        res.gateway = Some(Arc::new(gateway));
        Ok(res)
    }

    /// Writes recorded fixtures, if recording.
    pub fn finish(&self) -> Result<(), HarnessError> {
        if let Some(r) = &self.recorder {
            r.flush()?;
        }
        Ok(())
    }
}
