//! Scenario documents: one JSON object drives every subcommand.
//!
//! ```json
//! {
//!   "name": "canonical",
//!   "constants": {"alpha": 0.0072973525643},
//!   "initial_state": {"D": 10, "d": 4, "kind": "boson", "count": 1},
//!   "pipeline": {"radiation_fraction": 0.0, "species_d": [9, 8, 7, 6, 5, 4]},
//!   "wavefunction": {"cells": [0.8, 0.2], "trials": 100000, "seed": 42}
//! }
//! ```
//!
//! Every key is optional; unknown keys are rejected.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Kind, ParticleState, MAX_DIM, MIN_DIM};
use crate::cascade::{run_pipeline, CascadeError, Count, EnsembleEntry, PipelineOptions};
use crate::constants::{AlphaScaled, ConstantsError, ConstantsOverrides, PhysicalConstants};
use crate::hybrid::{collapse_statistics, wavefunction_from_weights, HybridError};
use crate::report::Report;
use crate::ENGINE_VERSION;

pub const DEFAULT_TRIALS: u64 = 100_000;

#[derive(Debug, Error, PartialEq)]
pub enum ScenarioError {
    #[error("scenario parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scenario field `{field}`: {message}")]
    Validation { field: String, message: String },
}

impl ScenarioError {
    fn field(field: impl Into<String>, message: impl ToString) -> Self {
        ScenarioError::Validation {
            field: field.into(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum RunError {
    #[error(transparent)]
    Invalid(#[from] ScenarioError),
    #[error("stage `{stage}` failed: {message}")]
    Stage { stage: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialState {
    #[serde(rename = "D")]
    pub spacetime_dim: i32,
    #[serde(rename = "d")]
    pub mass_dim: i32,
    pub kind: Kind,
    /// Rest mass in the state's own space-time. Absent means the state
    /// carries the Planck energy.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass_gev: Option<f64>,
    pub count: f64,
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState {
            spacetime_dim: 10,
            mass_dim: 4,
            kind: Kind::Boson,
            mass_gev: None,
            count: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineSection {
    pub radiation_fraction: f64,
    pub species_d: Vec<i32>,
}

impl Default for PipelineSection {
    fn default() -> Self {
        let o = PipelineOptions::default();
        PipelineSection {
            radiation_fraction: o.radiation_fraction,
            species_d: o.species_d.iter().map(|&d| d as i32).collect(),
        }
    }
}

/// A cell given either as a bare attachment weight or as `{"a": weight}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CellSpec {
    Weight(f64),
    Object { a: f64 },
}

impl CellSpec {
    pub fn attachment(&self) -> f64 {
        match *self {
            CellSpec::Weight(a) | CellSpec::Object { a } => a,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavefunctionSection {
    pub cells: Vec<CellSpec>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
}

fn default_trials() -> u64 {
    DEFAULT_TRIALS
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Scenario {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "ConstantsOverrides::is_empty")]
    pub constants: ConstantsOverrides,
    pub initial_state: InitialState,
    pub pipeline: PipelineSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wavefunction: Option<WavefunctionSection>,
}

/// Which parts of a scenario a run executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sections {
    pub pipeline: bool,
    pub wavefunction: bool,
}

impl Sections {
    pub const ALL: Sections = Sections {
        pipeline: true,
        wavefunction: true,
    };
}

pub fn parse_scenario(document: &[u8]) -> Result<Scenario, ScenarioError> {
    let scenario: Scenario =
        serde_json::from_slice(document).map_err(|e| ScenarioError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
    scenario.validate()?;
    Ok(scenario)
}

fn check_dim(field: &str, value: i32) -> Result<(), ScenarioError> {
    if (MIN_DIM as i32..=MAX_DIM as i32).contains(&value) {
        Ok(())
    } else {
        Err(ScenarioError::field(
            field,
            format!("{value} is outside [4, 11]"),
        ))
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.constants()?;
        let s = &self.initial_state;
        check_dim("initial_state.D", s.spacetime_dim)?;
        check_dim("initial_state.d", s.mass_dim)?;
        if let Some(m) = s.mass_gev {
            if !(m > 0.0 && m.is_finite()) {
                return Err(ScenarioError::field(
                    "initial_state.mass_gev",
                    "must be positive",
                ));
            }
        }
        if !(s.count >= 0.0 && s.count.is_finite()) {
            return Err(ScenarioError::field(
                "initial_state.count",
                "must be non-negative",
            ));
        }
        let p = &self.pipeline;
        if !(0.0..1.0).contains(&p.radiation_fraction) {
            return Err(ScenarioError::field(
                "pipeline.radiation_fraction",
                format!("{} is outside [0, 1)", p.radiation_fraction),
            ));
        }
        if p.species_d.is_empty() {
            return Err(ScenarioError::field(
                "pipeline.species_d",
                "must not be empty",
            ));
        }
        for &d in &p.species_d {
            check_dim("pipeline.species_d", d)?;
        }
        if let Some(w) = &self.wavefunction {
            if w.trials == 0 {
                return Err(ScenarioError::field(
                    "wavefunction.trials",
                    "must be at least 1",
                ));
            }
            if w.cells.is_empty() {
                return Err(ScenarioError::field(
                    "wavefunction.cells",
                    "must not be empty",
                ));
            }
            wavefunction_from_weights(&self.weights(w)).map_err(|e| match e {
                HybridError::Weight { index, .. } => {
                    ScenarioError::field(format!("wavefunction.cells[{index}]"), e)
                }
                e => ScenarioError::field("wavefunction.cells", e),
            })?;
        }
        Ok(())
    }

    fn weights(&self, w: &WavefunctionSection) -> Vec<f64> {
        w.cells.iter().map(CellSpec::attachment).collect()
    }

    pub fn constants(&self) -> Result<PhysicalConstants, ScenarioError> {
        PhysicalConstants::from_overrides(&self.constants).map_err(|e| match &e {
            ConstantsError::OutOfRange { field, .. } => {
                ScenarioError::field(format!("constants.{field}"), e)
            }
            _ => ScenarioError::field("constants", e),
        })
    }

    pub fn initial_entry(
        &self,
        constants: &PhysicalConstants,
    ) -> Result<EnsembleEntry, ScenarioError> {
        let s = &self.initial_state;
        let rest_mass = match s.mass_gev {
            Some(m) => AlphaScaled::new(m),
            // own-space-time energy equals the Planck energy
            None => AlphaScaled::with_power(
                constants.planck_energy_gev(),
                2 * (s.spacetime_dim - MIN_DIM as i32),
            ),
        };
        let state = ParticleState::new(s.spacetime_dim, s.mass_dim, s.kind, rest_mass, 0)
            .map_err(|e| ScenarioError::field("initial_state", e))?;
        let count =
            Count::new(s.count).map_err(|e| ScenarioError::field("initial_state.count", e))?;
        Ok(EnsembleEntry::new(state, count))
    }

    pub fn pipeline_options(&self) -> PipelineOptions {
        PipelineOptions {
            radiation_fraction: self.pipeline.radiation_fraction,
            species_d: self.pipeline.species_d.iter().map(|&d| d as u8).collect(),
        }
    }
}

fn stage_error(e: CascadeError) -> RunError {
    match e {
        CascadeError::Stage { stage, source } => RunError::Stage {
            stage: stage.to_string(),
            message: source.to_string(),
        },
        e => RunError::Stage {
            stage: "pipeline".into(),
            message: e.to_string(),
        },
    }
}

pub fn run_scenario(scenario: &Scenario) -> Result<Report, RunError> {
    run_sections(scenario, Sections::ALL)
}

/// Runs the requested sections. Asking for the wavefunction section of a
/// scenario that has none is a validation error.
pub fn run_sections(scenario: &Scenario, sections: Sections) -> Result<Report, RunError> {
    scenario.validate()?;
    let constants = scenario.constants()?;

    let pipeline = if sections.pipeline {
        let initial = scenario.initial_entry(&constants)?;
        Some(
            run_pipeline(&constants, &initial, &scenario.pipeline_options())
                .map_err(stage_error)?,
        )
    } else {
        None
    };

    let (collapse, seed) = match (&scenario.wavefunction, sections.wavefunction) {
        (Some(w), true) => {
            let wf =
                wavefunction_from_weights(&scenario.weights(w)).map_err(|e| RunError::Stage {
                    stage: "wavefunction".into(),
                    message: e.to_string(),
                })?;
            let stats =
                collapse_statistics(&wf, w.trials, w.seed).map_err(|e| RunError::Stage {
                    stage: "collapse".into(),
                    message: e.to_string(),
                })?;
            (Some(stats), Some(w.seed))
        }
        (None, true) if !sections.pipeline => {
            return Err(ScenarioError::field("wavefunction", "section is required").into())
        }
        _ => (None, None),
    };

    Ok(Report {
        engine_version: ENGINE_VERSION.to_string(),
        seed,
        scenario: scenario.clone(),
        pipeline,
        collapse,
    })
}
