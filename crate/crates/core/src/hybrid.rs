//! The three-value space code and the toy wavefunction built on it.
//!
//! A [`HybridCell`] mixes attachment weight `a` with detachment weight
//! `t = 1 − a`. Its probability weight is `a / t`, so density grows with
//! attachment and shrinks with detachment. Collapse picks one cell, leaving
//! pure attachment there and pure detachment everywhere else.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::PhysicalConstants;

/// Largest admissible attachment weight; keeps `t = 1 − a` away from zero.
pub const MAX_ATTACHMENT: f64 = 1.0 - 1e-9;

const BOUNDARY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum HybridError {
    #[error("wavefunction needs at least one cell")]
    Empty,
    #[error("cell {index}: attachment weight {a} is outside (0, 1 - 1e-9]")]
    Weight { index: usize, a: f64 },
    #[error("collapse index {index} out of bounds for {len} cells")]
    IndexOutOfBounds { index: usize, len: usize },
    #[error("{name} must be a non-negative number, got {value}")]
    NegativeInput { name: &'static str, value: f64 },
    #[error("trials must be at least 1")]
    NoTrials,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceValue {
    Attachment,
    Detachment,
    Hybrid,
}

/// `attachment ⊕ detachment = hybrid`, `x ⊕ x = x`, hybrid absorbs.
pub fn combine(v1: SpaceValue, v2: SpaceValue) -> SpaceValue {
    use SpaceValue::*;
    match (v1, v2) {
        (Attachment, Attachment) => Attachment,
        (Detachment, Detachment) => Detachment,
        _ => Hybrid,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CellDoc", into = "CellDoc")]
pub struct HybridCell {
    attachment: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellDoc {
    a: f64,
}

impl TryFrom<CellDoc> for HybridCell {
    type Error = HybridError;

    fn try_from(doc: CellDoc) -> Result<Self, HybridError> {
        HybridCell::new(doc.a)
    }
}

impl From<HybridCell> for CellDoc {
    fn from(cell: HybridCell) -> CellDoc {
        CellDoc { a: cell.attachment }
    }
}

impl HybridCell {
    pub fn new(attachment: f64) -> Result<Self, HybridError> {
        if attachment > 0.0 && attachment <= MAX_ATTACHMENT {
            Ok(HybridCell { attachment })
        } else {
            Err(HybridError::Weight {
                index: 0,
                a: attachment,
            })
        }
    }

    pub fn attachment(&self) -> f64 {
        self.attachment
    }

    pub fn detachment(&self) -> f64 {
        1.0 - self.attachment
    }

    fn weight(&self) -> f64 {
        self.attachment / self.detachment()
    }
}

/// Decomposes a hybrid cell into its two pure constituents.
pub fn separate(_cell: &HybridCell) -> (SpaceValue, SpaceValue) {
    (SpaceValue::Attachment, SpaceValue::Detachment)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    /// Δx = 0
    CompleteAttachment,
    /// Δp = 0
    CompleteDetachment,
    /// Both non-zero but Δx·Δp below h/4π.
    BelowBound,
}

impl Violation {
    pub fn reason(&self) -> &'static str {
        match self {
            Violation::CompleteAttachment => "complete attachment",
            Violation::CompleteDetachment => "complete detachment",
            Violation::BelowBound => "below bound",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapStatus {
    Satisfied,
    Boundary,
    Violated(Violation),
}

/// Classifies `(Δx, Δp)` against `Δx·Δp ≥ h/4π`. Products within a relative
/// 1e-12 of the bound are `Boundary`. When both inputs are zero the position
/// check wins and the reason is complete attachment.
pub fn gap_check(
    constants: &PhysicalConstants,
    dx: f64,
    dp: f64,
) -> Result<GapStatus, HybridError> {
    for (name, value) in [("dx", dx), ("dp", dp)] {
        if !value.is_finite() || value < 0.0 {
            return Err(HybridError::NegativeInput { name, value });
        }
    }
    if dx == 0.0 {
        return Ok(GapStatus::Violated(Violation::CompleteAttachment));
    }
    if dp == 0.0 {
        return Ok(GapStatus::Violated(Violation::CompleteDetachment));
    }
    let bound = constants.gap_bound();
    let product = dx * dp;
    Ok(if ((product - bound) / bound).abs() <= BOUNDARY_TOLERANCE {
        GapStatus::Boundary
    } else if product > bound {
        GapStatus::Satisfied
    } else {
        GapStatus::Violated(Violation::BelowBound)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction {
    cells: Vec<HybridCell>,
    density: Vec<f64>,
    /// Right edges of the half-open sampling intervals.
    cumulative: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WavefunctionDoc {
    cells: Vec<HybridCell>,
}

impl Serialize for Wavefunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WavefunctionDoc {
            cells: self.cells.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Wavefunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = WavefunctionDoc::deserialize(d)?;
        build_wavefunction(&doc.cells).map_err(serde::de::Error::custom)
    }
}

impl Wavefunction {
    pub fn cells(&self) -> &[HybridCell] {
        &self.cells
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Index whose interval `[c_i, c_{i+1})` contains `u ∈ [0, 1)`.
    fn locate(&self, u: f64) -> usize {
        let i = self.cumulative.partition_point(|&edge| edge <= u);
        // Rounding can leave the last edge a hair below 1.
        i.min(self.cells.len() - 1)
    }
}

/// Builds the density `ρᵢ = wᵢ / Σw` with `wᵢ = aᵢ / tᵢ`.
pub fn build_wavefunction(cells: &[HybridCell]) -> Result<Wavefunction, HybridError> {
    if cells.is_empty() {
        return Err(HybridError::Empty);
    }
    for (index, c) in cells.iter().enumerate() {
        if !(c.attachment > 0.0 && c.attachment <= MAX_ATTACHMENT) {
            return Err(HybridError::Weight {
                index,
                a: c.attachment,
            });
        }
    }
    let weights: Vec<f64> = cells.iter().map(HybridCell::weight).collect();
    let total: f64 = weights.iter().sum();
    let density: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let cumulative = density
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    Ok(Wavefunction {
        cells: cells.to_vec(),
        density,
        cumulative,
    })
}

/// Convenience constructor from raw attachment weights.
pub fn wavefunction_from_weights(weights: &[f64]) -> Result<Wavefunction, HybridError> {
    let cells = weights
        .iter()
        .enumerate()
        .map(|(index, &a)| HybridCell::new(a).map_err(|_| HybridError::Weight { index, a }))
        .collect::<Result<Vec<_>, _>>()?;
    build_wavefunction(&cells)
}

pub enum Selector<'a> {
    Random(&'a mut dyn RngCore),
    Index(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseOutcome {
    pub chosen_index: usize,
    #[serde(rename = "post")]
    pub post_cells: Vec<SpaceValue>,
    #[serde(skip)]
    pub post_density: Vec<f64>,
}

impl CollapseOutcome {
    fn at(index: usize, len: usize) -> Self {
        let post_cells = (0..len)
            .map(|i| {
                if i == index {
                    SpaceValue::Attachment
                } else {
                    SpaceValue::Detachment
                }
            })
            .collect();
        let post_density = (0..len)
            .map(|i| if i == index { 1.0 } else { 0.0 })
            .collect();
        CollapseOutcome {
            chosen_index: index,
            post_cells,
            post_density,
        }
    }

    /// A collapsed state holds no hybrid cells, so further decoherence
    /// leaves it unchanged.
    pub fn decohere(&self, _environment_seed: u64) -> CollapseOutcome {
        self.clone()
    }

    /// Attachment at the chosen index and detachment everywhere else.
    pub fn is_separated(&self) -> bool {
        self.post_cells.iter().enumerate().all(|(i, v)| {
            *v == if i == self.chosen_index {
                SpaceValue::Attachment
            } else {
                SpaceValue::Detachment
            }
        })
    }
}

pub fn collapse(wf: &Wavefunction, selector: Selector<'_>) -> Result<CollapseOutcome, HybridError> {
    let index = match selector {
        Selector::Index(index) if index >= wf.len() => {
            return Err(HybridError::IndexOutOfBounds {
                index,
                len: wf.len(),
            })
        }
        Selector::Index(index) => index,
        Selector::Random(rng) => wf.locate(rng.gen::<f64>()),
    };
    Ok(CollapseOutcome::at(index, wf.len()))
}

/// Seeded stream used for every sampled collapse.
pub fn environment_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Collapse triggered by an environment identified by `environment_seed`.
pub fn decohere(wf: &Wavefunction, environment_seed: u64) -> CollapseOutcome {
    let mut rng = environment_rng(environment_seed);
    collapse(wf, Selector::Random(&mut rng)).expect("random selection is always in bounds")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseStats {
    pub trials: u64,
    pub seed: u64,
    pub density: Vec<f64>,
    pub counts: Vec<u64>,
    pub frequencies: Vec<f64>,
    /// Trials whose post-state was not attachment-at-chosen, detachment-elsewhere.
    pub malformed_outcomes: u64,
}

impl CollapseStats {
    pub fn max_abs_deviation(&self) -> f64 {
        self.frequencies
            .iter()
            .zip(&self.density)
            .map(|(f, p)| (f - p).abs())
            .fold(0.0, f64::max)
    }
}

/// Repeats seeded collapse `trials` times from one ChaCha8 stream.
pub fn collapse_statistics(
    wf: &Wavefunction,
    trials: u64,
    seed: u64,
) -> Result<CollapseStats, HybridError> {
    if trials == 0 {
        return Err(HybridError::NoTrials);
    }
    let mut rng = environment_rng(seed);
    let mut counts = vec![0u64; wf.len()];
    let mut malformed_outcomes = 0;
    for _ in 0..trials {
        let outcome = collapse(wf, Selector::Random(&mut rng))?;
        if !outcome.is_separated() {
            malformed_outcomes += 1;
        }
        counts[outcome.chosen_index] += 1;
    }
    let frequencies = counts.iter().map(|&n| n as f64 / trials as f64).collect();
    Ok(CollapseStats {
        trials,
        seed,
        density: wf.density.clone(),
        counts,
        frequencies,
        malformed_outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use SpaceValue::*;

    #[test]
    fn combine_table() {
        assert_eq!(combine(Attachment, Detachment), Hybrid);
        assert_eq!(combine(Attachment, Attachment), Attachment);
        assert_eq!(combine(Hybrid, Detachment), Hybrid);
        let all = [Attachment, Detachment, Hybrid];
        for x in all {
            assert_eq!(combine(x, x), x);
            assert_eq!(combine(Hybrid, x), Hybrid);
            for y in all {
                assert_eq!(combine(x, y), combine(y, x));
                for z in all {
                    assert_eq!(combine(combine(x, y), z), combine(x, combine(y, z)));
                }
            }
        }
    }

    #[test]
    fn separate_is_weight_independent() {
        for a in [0.5, 0.99, 1e-6] {
            let cell = HybridCell::new(a).unwrap();
            let (p, q) = separate(&cell);
            assert_eq!((p, q), (Attachment, Detachment));
            assert_eq!(combine(p, q), Hybrid);
        }
    }

    #[test]
    fn cells_reject_pure_values() {
        assert!(HybridCell::new(0.0).is_err());
        assert!(HybridCell::new(1.0).is_err());
        assert!(HybridCell::new(1.0 - 1e-10).is_err());
        assert!(HybridCell::new(f64::NAN).is_err());
        assert!(HybridCell::new(MAX_ATTACHMENT).is_ok());
    }

    #[test]
    fn gap_examples() {
        let c = PhysicalConstants::default();
        let bound = c.gap_bound();
        assert_eq!(gap_check(&c, 1.0, bound).unwrap(), GapStatus::Boundary);
        assert_eq!(gap_check(&c, 2.0, bound).unwrap(), GapStatus::Satisfied);
        assert_eq!(
            gap_check(&c, 0.5, bound).unwrap(),
            GapStatus::Violated(Violation::BelowBound)
        );
        assert_eq!(
            gap_check(&c, 0.0, 5.0).unwrap(),
            GapStatus::Violated(Violation::CompleteAttachment)
        );
        assert_eq!(
            gap_check(&c, 5.0, 0.0).unwrap(),
            GapStatus::Violated(Violation::CompleteDetachment)
        );
        assert_eq!(
            Violation::CompleteAttachment.reason(),
            "complete attachment"
        );
        assert_eq!(
            Violation::CompleteDetachment.reason(),
            "complete detachment"
        );
        assert!(gap_check(&c, -1.0, 1.0).is_err());
        assert!(gap_check(&c, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn density_examples() {
        let wf = wavefunction_from_weights(&[0.5, 0.5]).unwrap();
        assert_eq!(wf.density(), [0.5, 0.5]);
        let wf = wavefunction_from_weights(&[0.8, 0.2]).unwrap();
        assert!((wf.density()[0] - 16.0 / 17.0).abs() < 1e-15);
        assert!((wf.density()[1] - 1.0 / 17.0).abs() < 1e-15);
        assert_eq!(wavefunction_from_weights(&[0.5]).unwrap().density(), [1.0]);
        assert_eq!(build_wavefunction(&[]), Err(HybridError::Empty));
        assert_eq!(
            wavefunction_from_weights(&[0.5, 1.0]),
            Err(HybridError::Weight { index: 1, a: 1.0 })
        );
    }

    #[test]
    fn collapse_explicit_and_certain() {
        let wf = wavefunction_from_weights(&[0.8, 0.2]).unwrap();
        let out = collapse(&wf, Selector::Index(1)).unwrap();
        assert_eq!(out.post_cells, [Detachment, Attachment]);
        assert_eq!(out.post_density, [0.0, 1.0]);
        assert_eq!(
            collapse(&wf, Selector::Index(2)),
            Err(HybridError::IndexOutOfBounds { index: 2, len: 2 })
        );
        let single = wavefunction_from_weights(&[0.3]).unwrap();
        let mut rng = environment_rng(7);
        for _ in 0..100 {
            let out = collapse(&single, Selector::Random(&mut rng)).unwrap();
            assert_eq!(out.chosen_index, 0);
        }
    }

    #[test]
    fn half_open_intervals() {
        let wf = wavefunction_from_weights(&[0.5, 0.5]).unwrap();
        assert_eq!(wf.locate(0.0), 0);
        assert_eq!(wf.locate(0.5), 1);
        assert_eq!(wf.locate(0.999_999_999), 1);
    }

    #[test]
    fn decohere_matches_seeded_collapse() {
        let wf = wavefunction_from_weights(&[0.3, 0.6, 0.9]).unwrap();
        let mut rng = environment_rng(11);
        let direct = collapse(&wf, Selector::Random(&mut rng)).unwrap();
        let out = decohere(&wf, 11);
        assert_eq!(out, direct);
        assert_eq!(out.post_density.iter().sum::<f64>(), 1.0);
        assert_eq!(out.decohere(99), out);
    }

    #[test]
    fn json_shapes() {
        let wf: Wavefunction = serde_json::from_str(r#"{"cells":[{"a":0.8},{"a":0.2}]}"#).unwrap();
        assert_eq!(wf.len(), 2);
        assert_eq!(
            serde_json::to_string(&wf).unwrap(),
            r#"{"cells":[{"a":0.8},{"a":0.2}]}"#
        );
        assert!(serde_json::from_str::<Wavefunction>(r#"{"cells":[{"a":1.0}]}"#).is_err());
        let out = collapse(&wf, Selector::Index(0)).unwrap();
        assert_eq!(
            serde_json::to_string(&out).unwrap(),
            r#"{"chosen_index":0,"post":["attachment","detachment"]}"#
        );
    }
}
