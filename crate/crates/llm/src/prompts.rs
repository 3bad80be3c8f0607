//! Prompt templates with `{name}` placeholders.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use onuw_core::{RoleCard, Tactic, ALL_ROLES, ALL_TACTICS};

use crate::error::LlmError;

const DEFAULT_PROMPTS: &str = include_str!("../prompts/default.toml");

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TemplateId {
    Global,
    Role(RoleCard),
    /// Night decision for a role that has a choice to make.
    Night(RoleCard),
    Discussion,
    Voting,
    Belief,
    TacticChoice,
    Tactic(Tactic),
}

impl TemplateId {
    pub fn key(&self) -> String {
        match self {
            TemplateId::Global => "global".into(),
            TemplateId::Role(r) => format!("role.{}", r.name().to_ascii_lowercase()),
            TemplateId::Night(r) => format!("night.{}", r.name().to_ascii_lowercase()),
            TemplateId::Discussion => "discussion".into(),
            TemplateId::Voting => "voting".into(),
            TemplateId::Belief => "belief".into(),
            TemplateId::TacticChoice => "tactic_choice".into(),
            TemplateId::Tactic(t) => format!("tactic.{}", t.index()),
        }
    }

    /// Every template a complete prompt set must define.
    pub fn required() -> Vec<TemplateId> {
        let mut v = vec![
            TemplateId::Global,
            TemplateId::Discussion,
            TemplateId::Voting,
            TemplateId::Belief,
            TemplateId::TacticChoice,
        ];
        v.extend(ALL_ROLES.iter().map(|r| TemplateId::Role(*r)));
        v.extend(
            [RoleCard::Seer, RoleCard::Robber, RoleCard::Troublemaker]
                .iter()
                .map(|r| TemplateId::Night(*r)),
        );
        v.extend(ALL_TACTICS.iter().map(|t| TemplateId::Tactic(*t)));
        v
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

enum Piece<'a> {
    Text(&'a str),
    Var(&'a str),
}

/// Splits a template body. Only `{ident}` with `ident` in `[A-Za-z0-9_]+` is a
/// placeholder; `{{` and `}}` are escapes; any other brace is literal.
fn pieces(body: &str) -> Vec<Piece<'_>> {
    let bytes = body.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if (c == b'{' || c == b'}') && bytes.get(i + 1) == Some(&c) {
            out.push(Piece::Text(&body[start..i + 1]));
            i += 2;
            start = i;
            continue;
        }
        if c == b'{' {
            let rest = &bytes[i + 1..];
            let n = rest.iter().take_while(|b| b.is_ascii_alphanumeric() || **b == b'_').count();
            if n > 0 && rest.get(n) == Some(&b'}') {
                out.push(Piece::Text(&body[start..i]));
                out.push(Piece::Var(&body[i + 1..i + 1 + n]));
                i += n + 2;
                start = i;
                continue;
            }
        }
        i += 1;
    }
    out.push(Piece::Text(&body[start..]));
    out
}

/// Placeholder names used by a template body, sorted and deduplicated.
pub fn placeholders(body: &str) -> Vec<String> {
    let set: BTreeSet<&str> = pieces(body)
        .into_iter()
        .filter_map(|p| match p {
            Piece::Var(v) => Some(v),
            Piece::Text(_) => None,
        })
        .collect();
    set.into_iter().map(String::from).collect()
}

/// Substitutes every placeholder; fails listing all names without a value.
pub fn render_body(body: &str, vars: &BTreeMap<String, String>) -> Result<String, LlmError> {
    let missing: Vec<String> =
        placeholders(body).into_iter().filter(|p| !vars.contains_key(p)).collect();
    if !missing.is_empty() {
        return Err(LlmError::MissingPlaceholders { missing });
    }
    let mut out = String::with_capacity(body.len());
    for p in pieces(body) {
        match p {
            Piece::Text(t) => out.push_str(t),
            Piece::Var(v) => out.push_str(&vars[v]),
        }
    }
    Ok(out)
}

/// Builds a variable map from `(name, value)` pairs.
pub fn vars<K: Into<String>, V: Into<String>>(
    pairs: impl IntoIterator<Item = (K, V)>,
) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.into(), v.into())).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PromptTemplates {
    bodies: BTreeMap<String, String>,
}

impl Default for PromptTemplates {
    fn default() -> Self {
        PromptTemplates::from_toml(DEFAULT_PROMPTS).expect("bundled prompt set is valid")
    }
}

impl PromptTemplates {
    /// Parses a prompt set; every required key must be present.
    pub fn from_toml(text: &str) -> Result<Self, LlmError> {
        let bodies: BTreeMap<String, String> = toml::from_str(text).map_err(|e| {
            LlmError::Template { id: "<file>".into(), detail: e.to_string() }
        })?;
        let set = PromptTemplates { bodies };
        for id in TemplateId::required() {
            if !set.bodies.contains_key(&id.key()) {
                return Err(LlmError::UnknownTemplate(id.key()));
            }
        }
        Ok(set)
    }

    /// Replaces individual bodies, keeping the rest.
    pub fn with_overrides(mut self, text: &str) -> Result<Self, LlmError> {
        let extra: BTreeMap<String, String> = toml::from_str(text).map_err(|e| {
            LlmError::Template { id: "<overrides>".into(), detail: e.to_string() }
        })?;
        self.bodies.extend(extra);
        Ok(self)
    }

    pub fn body(&self, id: TemplateId) -> Result<&str, LlmError> {
        self.bodies
            .get(&id.key())
            .map(String::as_str)
            .ok_or_else(|| LlmError::UnknownTemplate(id.key()))
    }

    pub fn render(&self, id: TemplateId, vars: &BTreeMap<String, String>) -> Result<String, LlmError> {
        render_body(self.body(id)?, vars)
    }

    /// The discussion prompt; `strategy_section` is filled from the tactic template, or
    /// left empty when no tactic is given.
    pub fn render_discussion(
        &self,
        tactic: Option<Tactic>,
        vars: &BTreeMap<String, String>,
    ) -> Result<String, LlmError> {
        let mut v = vars.clone();
        let section = match tactic {
            Some(t) => format!("Speaking approach for this turn: {}\n", self.body(TemplateId::Tactic(t))?),
            None => String::new(),
        };
        v.insert("strategy_section".into(), section);
        self.render(TemplateId::Discussion, &v)
    }
}
