//! Parsing of model replies into the expected response layouts.

use onuw_core::{PlayerId, RoleCard, ALL_ROLES};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReplyFormat {
    /// `{thought, speech}`
    Speech,
    /// `{thought, switch, player}`
    Switch,
    /// `{thought, switch, players: [a, b]}`
    Swap,
    /// `{thought, player}`
    Player,
    /// `{thought, tactic}`
    TacticChoice,
    /// Free reasoning followed by a "Concise result:" line.
    Belief,
    /// No structure expected.
    Text,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Parsed {
    Speech { thought: String, speech: String },
    Switch { thought: String, switch: bool, player: Option<String> },
    Swap { thought: String, switch: bool, players: Vec<String> },
    Player { thought: String, player: String },
    TacticChoice { thought: String, tactic: String },
    Belief { reasoning: String, result: String },
    Text(String),
}

/// A model reply. `parsed` is `Some` exactly when `error` is `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructuredReply {
    pub raw: String,
    pub format: ReplyFormat,
    pub parsed: Option<Parsed>,
    pub error: Option<String>,
}

impl StructuredReply {
    pub fn parse(raw: &str, format: ReplyFormat) -> Self {
        let (parsed, error) = match parse_reply(raw, format) {
            Ok(p) => (Some(p), None),
            Err(e) => (None, Some(e)),
        };
        StructuredReply { raw: raw.to_string(), format, parsed, error }
    }

    pub fn parse_failed(&self) -> bool {
        self.parsed.is_none()
    }
}

/// The text between the first `{` and the last `}`, parsed as a JSON object.
pub fn extract_json_object(raw: &str) -> Result<serde_json::Map<String, Value>, String> {
    let start = raw.find('{').ok_or("no JSON object in reply")?;
    let end = raw.rfind('}').ok_or("no JSON object in reply")?;
    if end < start {
        return Err("no JSON object in reply".into());
    }
    match serde_json::from_str::<Value>(&raw[start..=end]) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err("reply JSON is not an object".into()),
        Err(e) => Err(format!("reply JSON does not parse: {e}")),
    }
}

fn text_field(m: &serde_json::Map<String, Value>, key: &str) -> Result<String, String> {
    match m.get(key) {
        Some(Value::String(s)) => Ok(s.clone()),
        Some(Value::Number(n)) => Ok(n.to_string()),
        Some(Value::Null) | None => Err(format!("missing field `{key}`")),
        Some(other) => Err(format!("field `{key}` has unexpected value {other}")),
    }
}

fn optional_text(m: &serde_json::Map<String, Value>, key: &str) -> String {
    text_field(m, key).unwrap_or_default()
}

fn bool_field(m: &serde_json::Map<String, Value>, key: &str) -> Result<bool, String> {
    match m.get(key) {
        Some(Value::Bool(b)) => Ok(*b),
        Some(Value::String(s)) if s.trim().eq_ignore_ascii_case("true") => Ok(true),
        Some(Value::String(s)) if s.trim().eq_ignore_ascii_case("false") => Ok(false),
        _ => Err(format!("field `{key}` is not a boolean")),
    }
}

const RESULT_MARKER: &str = "concise result:";

pub fn parse_reply(raw: &str, format: ReplyFormat) -> Result<Parsed, String> {
    match format {
        ReplyFormat::Text => Ok(Parsed::Text(raw.to_string())),
        ReplyFormat::Belief => {
            let lower = raw.to_ascii_lowercase();
            let at = lower.rfind(RESULT_MARKER).ok_or("missing concise result")?;
            let result = raw[at + RESULT_MARKER.len()..].trim().trim_matches('`').trim();
            if result.is_empty() {
                return Err("empty concise result".into());
            }
            let reasoning = raw[..at].trim();
            let reasoning = match reasoning.to_ascii_lowercase().find("reasoning:") {
                Some(i) => reasoning[i + "reasoning:".len()..].trim(),
                None => reasoning,
            };
            Ok(Parsed::Belief { reasoning: reasoning.to_string(), result: result.to_string() })
        }
        _ => {
            let m = extract_json_object(raw)?;
            let thought = optional_text(&m, "thought");
            Ok(match format {
                ReplyFormat::Speech => Parsed::Speech { thought, speech: text_field(&m, "speech")? },
                ReplyFormat::Switch => {
                    let switch = bool_field(&m, "switch")?;
                    let player = text_field(&m, "player").ok();
                    if switch && player.is_none() {
                        return Err("switch without a player".into());
                    }
                    Parsed::Switch { thought, switch, player }
                }
                ReplyFormat::Swap => {
                    let switch = bool_field(&m, "switch")?;
                    let players = match m.get("players") {
                        Some(Value::Array(a)) => a
                            .iter()
                            .map(|v| match v {
                                Value::String(s) => Ok(s.clone()),
                                Value::Number(n) => Ok(n.to_string()),
                                _ => Err("`players` entries must be names".to_string()),
                            })
                            .collect::<Result<Vec<_>, _>>()?,
                        None | Some(Value::Null) if !switch => Vec::new(),
                        _ => return Err("field `players` must be a list".into()),
                    };
                    if switch && players.len() != 2 {
                        return Err("a swap needs exactly two players".into());
                    }
                    Parsed::Swap { thought, switch, players }
                }
                ReplyFormat::Player => Parsed::Player { thought, player: text_field(&m, "player")? },
                ReplyFormat::TacticChoice => {
                    Parsed::TacticChoice { thought, tactic: text_field(&m, "tactic")? }
                }
                ReplyFormat::Belief | ReplyFormat::Text => unreachable!(),
            })
        }
    }
}

#[derive(Copy, Clone, Debug)]
enum Mention {
    Player(PlayerId),
    Role(RoleCard),
}

/// Player and role mentions of one clause, in reading order.
fn mentions(clause: &str, speaker: PlayerId, player_count: usize) -> Vec<Mention> {
    let lower = clause.to_ascii_lowercase();
    let words: Vec<&str> = lower
        .split(|c: char| !c.is_ascii_alphanumeric() && c != '\'')
        .filter(|w| !w.is_empty())
        .collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < words.len() {
        let w = words[i];
        if let Some(num) = w.strip_prefix("player").map(|r| r.trim_start_matches('s')) {
            // "player 3", "players 1", or "player3"
            let digits = if num.is_empty() { words.get(i + 1).copied().unwrap_or("") } else { num };
            if let Ok(n) = digits.parse::<usize>() {
                if (1..=player_count).contains(&n) {
                    out.push(Mention::Player(PlayerId((n - 1) as u8)));
                }
                if num.is_empty() {
                    i += 1;
                }
            }
        } else if matches!(w, "i'm" | "myself") || (w == "i" && words.get(i + 1) == Some(&"am")) {
            out.push(Mention::Player(speaker));
        } else if let Ok(n) = w.parse::<usize>() {
            // Bare numbers continue a player list: "Players 1 and 2".
            if matches!(out.last(), Some(Mention::Player(_))) && (1..=player_count).contains(&n) {
                out.push(Mention::Player(PlayerId((n - 1) as u8)));
            }
        } else if let Some(r) = ALL_ROLES
            .iter()
            .find(|r| w.trim_end_matches('s') == r.name().to_ascii_lowercase()
                || w == r.name().to_ascii_lowercase())
        {
            out.push(Mention::Role(*r));
        } else if w == "werewolves" {
            out.push(Mention::Role(RoleCard::Werewolf));
        }
        i += 1;
    }
    out
}

/// Reads "most likely role" statements out of a belief result such as
/// "Player 1 is the Seer, Player 2 is a Werewolf and I am the Robber".
/// Within a clause (split on `.`, `,`, `;`, newlines), players are assigned the next
/// role named after them; players named after the last role ("the Seer is Player 3")
/// take that role. Later statements about a player win.
pub fn extract_role_mentions(
    result: &str,
    speaker: PlayerId,
    player_count: usize,
) -> Vec<(PlayerId, RoleCard)> {
    let mut out: Vec<(PlayerId, RoleCard)> = Vec::new();
    let mut assign = |p: PlayerId, r: RoleCard| {
        out.retain(|(q, _)| *q != p);
        out.push((p, r));
    };
    for clause in result.split(['.', ',', ';', '\n']) {
        let mut pending: Vec<PlayerId> = Vec::new();
        let mut last_role = None;
        for m in mentions(clause, speaker, player_count) {
            match m {
                Mention::Player(p) => {
                    if !pending.contains(&p) {
                        pending.push(p);
                    }
                }
                Mention::Role(r) => {
                    for p in pending.drain(..) {
                        assign(p, r);
                    }
                    last_role = Some(r);
                }
            }
        }
        if let Some(r) = last_role {
            for p in pending {
                assign(p, r);
            }
        }
    }
    out.sort_by_key(|(p, _)| *p);
    out
}
