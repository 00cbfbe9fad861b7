//! Report assembly and emission.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cascade::PipelineReport;
use crate::hybrid::CollapseStats;
use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub engine_version: String,
    pub seed: Option<u64>,
    pub scenario: Scenario,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pipeline: Option<PipelineReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub collapse: Option<CollapseStats>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn sci17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out =
                serde_json::to_vec_pretty(report).expect("reports contain only finite data");
            out.push(b'\n');
            out
        }
        Format::Csv => emit_csv(report).into_bytes(),
    }
}

/// Milestones as `stage,state,energy_gev` rows. Collapse statistics, when
/// present, follow as a second table after a blank line.
fn emit_csv(report: &Report) -> String {
    let mut out = String::new();
    if let Some(p) = &report.pipeline {
        out.push_str("stage,state,energy_gev\n");
        for m in &p.milestones {
            let _ = writeln!(out, "{},{},{}", m.stage, m.state, sci17(m.energy_gev));
        }
    }
    if let Some(c) = &report.collapse {
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str("index,density,count,frequency\n");
        for (i, ((p, n), f)) in c
            .density
            .iter()
            .zip(&c.counts)
            .zip(&c.frequencies)
            .enumerate()
        {
            let _ = writeln!(out, "{i},{},{n},{}", sci17(*p), sci17(*f));
        }
    }
    out
}
