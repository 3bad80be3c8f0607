//! Share of each discussion tactic per initial role.

use std::io::Write;

use onuw_core::{Event, GameLog, RoleCard, ALL_ROLES, ALL_TACTICS, TACTIC_COUNT};
use serde::Serialize;

use crate::error::HarnessError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TacticRow {
    pub role: RoleCard,
    pub counts: [u64; TACTIC_COUNT],
    /// Percentages summing to 100, or all zero when the role never spoke with a label.
    pub percent: [f64; TACTIC_COUNT],
    /// No labeled speech by this role.
    pub empty: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TacticStatsTable {
    /// One row per role, in role order.
    pub rows: Vec<TacticRow>,
    /// Speeches without a tactic label (not counted in any row).
    pub unlabeled: u64,
}

impl TacticStatsTable {
    pub fn row(&self, role: RoleCard) -> &TacticRow {
        &self.rows[role.index()]
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), HarnessError> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["role".to_string()];
        header.extend(ALL_TACTICS.iter().map(|t| t.label().to_string()));
        header.push("speeches".into());
        out.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![r.role.to_string()];
            rec.extend(r.percent.iter().map(|p| format!("{p:.1}")));
            rec.push(r.counts.iter().sum::<u64>().to_string());
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn render_text(&self) -> String {
        let mut t = format!("{:<13}", "role");
        for tac in ALL_TACTICS {
            t.push_str(&format!(" {:>8}", short(tac.label())));
        }
        t.push_str("        n\n");
        for r in &self.rows {
            t.push_str(&format!("{:<13}", r.role.to_string()));
            for p in r.percent {
                t.push_str(&format!(" {p:>7.1}%"));
            }
            let n: u64 = r.counts.iter().sum();
            t.push_str(&format!(" {n:>8}{}\n", if r.empty { "  (no speeches)" } else { "" }));
        }
        if self.unlabeled > 0 {
            t.push_str(&format!("{} speeches had no tactic label\n", self.unlabeled));
        }
        t
    }
}

fn short(label: &str) -> String {
    label.split_whitespace().map(|w| &w[..w.len().min(4)]).collect::<Vec<_>>().join(".")
}

/// Counts labeled speeches by the speaker's initial role.
pub fn tactic_statistics(logs: &[GameLog]) -> TacticStatsTable {
    let mut counts = [[0u64; TACTIC_COUNT]; 6];
    let mut unlabeled = 0;
    for log in logs {
        for e in &log.events {
            let Event::Speech(s) = e else { continue };
            let (Some(t), Some(role)) = (s.tactic, log.initial.player_roles.get(s.player.index())) else {
                unlabeled += 1;
                continue;
            };
            counts[role.index()][t.index()] += 1;
        }
    }
    let rows = ALL_ROLES
        .iter()
        .map(|&role| {
            let c = counts[role.index()];
            let total: u64 = c.iter().sum();
            let mut percent = [0.0; TACTIC_COUNT];
            if total > 0 {
                for i in 0..TACTIC_COUNT {
                    percent[i] = 100.0 * c[i] as f64 / total as f64;
                }
            }
            TacticRow { role, counts: c, percent, empty: total == 0 }
        })
        .collect();
    TacticStatsTable { rows, unlabeled }
}
