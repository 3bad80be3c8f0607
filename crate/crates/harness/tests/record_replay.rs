use std::sync::Arc;

use onuw_agents::{AgentConfig, AgentKind};
use onuw_harness::{run_experiment, ExperimentConfig, GatewayMode, Resources, Setting};
use onuw_llm::{
    request_key, FixtureStore, Gateway, HttpRequest, HttpResponse, ModelConfig, RecordingTransport, Transport,
    TransportFailure,
};

/// Stands in for the model: the reply is a function of the request only, and fits every
/// reply layout the players ask for.
struct Stub;

impl Transport for Stub {
    fn post(&self, req: &HttpRequest, _key: Option<&str>) -> Result<HttpResponse, TransportFailure> {
        let h = request_key(req);
        let pick = |i: usize| 1 + (h.as_bytes()[i] as usize % 5);
        let tactic = ["Honest Evidence", "Deceptive Defense"][h.as_bytes()[4] as usize % 2];
        let reply = serde_json::json!({
            "thought": "placeholder",
            "speech": format!("placeholder speech {}", &h[..6]),
            "switch": h.as_bytes()[0] % 2 == 0,
            "player": format!("Player {}", pick(1)),
            "players": [format!("Player {}", pick(2)), format!("Player {}", pick(3))],
            "tactic": tactic,
        });
        let content = format!("{reply}\nConcise result: Player {} is a Werewolf", pick(5));
        let body = serde_json::json!({ "choices": [{ "message": { "role": "assistant", "content": content } }] });
        Ok(HttpResponse { status: 200, body: body.to_string() })
    }

    fn needs_credentials(&self) -> bool {
        false
    }
}

fn seat(kind: AgentKind) -> AgentConfig {
    AgentConfig { kind, ..AgentConfig::scripted() }
}

#[test]
fn recorded_experiment_replays_offline_to_identical_logs() {
    let dir = tempfile::tempdir().unwrap();
    let fixtures = dir.path().join("fixtures.json");
    let mut cfg = ExperimentConfig::scripted(Setting::FiveEasy);
    cfg.seats = vec![
        seat(AgentKind::LLMInstructed),
        seat(AgentKind::Belief),
        seat(AgentKind::ReAct),
        seat(AgentKind::RandomTactic),
        AgentConfig::scripted(),
    ];
    cfg.repeats = 4;
    cfg.workers = Some(2);

    let rec = Arc::new(RecordingTransport::new(Arc::new(Stub), FixtureStore::default(), Some(fixtures.clone())));
    let gateway = Arc::new(Gateway::new(ModelConfig::default(), rec.clone()).unwrap());
    let live = run_experiment(&cfg, &Resources::offline().with_gateway(gateway)).unwrap();
    rec.flush().unwrap();
    assert!(live.iter().all(|l| l.valid));
    let recorded = FixtureStore::load(&fixtures).unwrap().entries.len();
    assert!(recorded >= 4 * 4 * 4, "{recorded} exchanges");

    cfg.model.mode = GatewayMode::Replay;
    cfg.model.fixtures = Some(fixtures);
    let res = Resources::for_experiment(&cfg).unwrap();
    let replayed = run_experiment(&cfg, &res).unwrap();
    assert_eq!(replayed, live);
}
