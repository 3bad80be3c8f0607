//! Equilibrium checks of the three-player game, as a report for the command line.

use std::io::Write;

use onuw_core::OutcomeRules;
use onuw_equilibrium::{
    build_tree_no_discussion, certify_no_discussion, certify_discussion, region_grid, CertificateRow, StrategyProfile3P,
};
use serde::Serialize;

use crate::error::HarnessError;

pub const PBE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckLine>,
    /// One row per belief triple of the discussion-game grid.
    pub certificates: Vec<CertificateRow>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render_text(&self) -> String {
        let mut t = String::new();
        for c in &self.checks {
            t.push_str(&format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
        }
        t
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), HarnessError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "alpha", "beta", "gamma", "p", "q", "delta", "u1", "u2", "u3", "traversal_u1", "traversal_u2",
            "traversal_u3", "nash_conv", "stationarity", "pbe",
        ])?;
        for r in &self.certificates {
            let mut rec: Vec<String> = [r.alpha, r.beta, r.gamma, r.p, r.q, r.delta]
                .iter()
                .chain(&r.closed_form)
                .chain(&r.traversal)
                .chain([r.nash_conv, r.stationarity].iter())
                .map(|x| format!("{x:.12}"))
                .collect();
            rec.push(r.pbe_passed.to_string());
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Runs the no-discussion certificate at `p_values` under both outcome conventions, the
/// discussion-game certificate on an `alpha_steps × gamma_steps` grid, and the
/// exploitability of the never-switch profile.
pub fn verify_equilibria(p_values: &[f64], alpha_steps: usize, gamma_steps: usize) -> Result<VerificationReport, HarnessError> {
    let mut checks = Vec::new();
    for rules in [OutcomeRules::Standard, OutcomeRules::NoDeathDraw] {
        let mut worst = String::new();
        let mut ok = true;
        for &p in p_values {
            let (u, report) = certify_no_discussion(p, rules, PBE_TOL)?;
            if !report.passed() || u != [0.0, 0.0, 1.0] {
                ok = false;
                worst = format!("p = {p}: utilities {u:?}, pbe {}", report.passed());
            }
        }
        checks.push(CheckLine {
            name: format!("no-discussion equilibrium ({rules:?})"),
            passed: ok,
            detail: if ok { format!("{} values of p, utilities (0, 0, 1)", p_values.len()) } else { worst },
        });
    }

    let mut certificates = Vec::new();
    let mut failed = 0;
    for bt in region_grid(alpha_steps, gamma_steps) {
        let (row, _) = certify_discussion(bt, PBE_TOL)?;
        if !row.passed(PBE_TOL) {
            failed += 1;
        }
        certificates.push(row);
    }
    checks.push(CheckLine {
        name: "discussion equilibrium grid".into(),
        passed: failed == 0,
        detail: format!("{} of {} belief triples certified", certificates.len() - failed, certificates.len()),
    });

    let tree = build_tree_no_discussion(OutcomeRules::Standard);
    let nc = tree.nash_conv(&StrategyProfile3P::new(0.0, 1.0, 0.0, 0.0).behavior(&tree)?);
    checks.push(CheckLine {
        name: "never-switch profile exploitability".into(),
        passed: nc == 2.0,
        detail: format!("NashConv {nc}"),
    });
    Ok(VerificationReport { checks, certificates })
}
