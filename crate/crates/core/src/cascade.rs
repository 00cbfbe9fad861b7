//! Ensemble evolution: stepwise fractionalization, simultaneous fission and
//! the full cosmic pipeline, with a mass-energy ledger.
//!
//! An entry's energy is `count · M0 · α^(−2(D−4))`, i.e. the rest mass seen
//! in the entry's own space-time. With that definition QVSL transforms,
//! fractionalization and fission all conserve energy, and the first two do so
//! exactly because they only shuffle α exponents between count and mass.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    boson_energy, leap_fission, qvsl_transform, AlgebraError, Kind, ParticleState, QvslDirection,
    MIN_DIM,
};
use crate::constants::{AlphaPower, AlphaScaled, PhysicalConstants};

/// Linear counts above this are stored as natural logarithms.
pub const LOG_SPACE_THRESHOLD: f64 = 1e15;

#[derive(Debug, Error, PartialEq)]
pub enum CascadeError {
    #[error("cannot fractionalize below d = 4")]
    AtFloor,
    #[error("target d = {target} is outside [4, {current}]")]
    TargetOutOfRange { target: i32, current: u8 },
    #[error("species list is empty")]
    EmptySpecies,
    #[error("species d = {species} is outside [4, {parent}]")]
    SpeciesOutOfRange { species: i32, parent: u8 },
    #[error("species d = {0} listed twice")]
    DuplicateSpecies(u8),
    #[error("radiation fraction {0} is outside [0, 1)")]
    RadiationFraction(f64),
    #[error("count must be finite and non-negative, got {0}")]
    InvalidCount(f64),
    #[error("ensemble has no 4d (baryonic) entry")]
    MissingBaryonic,
    #[error("ensemble has more than one 4d entry")]
    MultipleBaryonic,
    #[error("ensemble has no dark-sector (d > 4) entry")]
    NoDarkSector,
    #[error("baryonic mass is zero")]
    EmptyBaryonic,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        source: Box<CascadeError>,
    },
}

fn in_stage<T>(stage: &'static str, r: Result<T, CascadeError>) -> Result<T, CascadeError> {
    r.map_err(|e| CascadeError::Stage {
        stage,
        source: Box::new(e),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Magnitude {
    Linear(f64),
    /// Natural log of the value.
    Log(f64),
}

/// Non-negative particle count with a high dynamic range: a magnitude that
/// moves to log-space above [`LOG_SPACE_THRESHOLD`], times an exact power of α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Count {
    magnitude: Magnitude,
    power: AlphaPower,
}

impl Count {
    pub fn new(value: f64) -> Result<Self, CascadeError> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(CascadeError::InvalidCount(value));
        }
        Ok(Count {
            magnitude: Magnitude::Linear(value),
            power: AlphaPower::ONE,
        }
        .normalized())
    }

    /// Builds a count directly from its natural logarithm.
    pub fn from_ln(ln_value: f64) -> Result<Self, CascadeError> {
        if ln_value.is_nan() || ln_value == f64::INFINITY {
            return Err(CascadeError::InvalidCount(ln_value));
        }
        Ok(Count {
            magnitude: Magnitude::Log(ln_value),
            power: AlphaPower::ONE,
        }
        .normalized())
    }

    fn normalized(self) -> Self {
        let magnitude = match self.magnitude {
            Magnitude::Linear(v) if v > LOG_SPACE_THRESHOLD => Magnitude::Log(v.ln()),
            Magnitude::Log(l) if l <= LOG_SPACE_THRESHOLD.ln() => Magnitude::Linear(l.exp()),
            m => m,
        };
        Count { magnitude, ..self }
    }

    pub fn is_zero(&self) -> bool {
        self.magnitude == Magnitude::Linear(0.0)
    }

    pub fn is_log_space(&self) -> bool {
        matches!(self.magnitude, Magnitude::Log(_))
    }

    pub fn alpha_power(&self) -> AlphaPower {
        self.power
    }

    pub fn scale(self, by: AlphaPower) -> Self {
        Count {
            power: self.power * by,
            ..self
        }
    }

    /// Splits the count into `parts` equal shares.
    pub fn divide(self, parts: u32) -> Self {
        let magnitude = match self.magnitude {
            Magnitude::Linear(v) => Magnitude::Linear(v / parts as f64),
            Magnitude::Log(l) => Magnitude::Log(l - (parts as f64).ln()),
        };
        Count { magnitude, ..self }.normalized()
    }

    pub fn ln(&self, constants: &PhysicalConstants) -> f64 {
        let ln_mag = match self.magnitude {
            Magnitude::Linear(v) => v.ln(),
            Magnitude::Log(l) => l,
        };
        ln_mag + self.power.0 as f64 * constants.alpha().ln()
    }

    pub fn log10(&self, constants: &PhysicalConstants) -> f64 {
        self.ln(constants) / std::f64::consts::LN_10
    }

    /// Scalar value; may be `inf` for counts beyond the `f64` range.
    pub fn to_f64(&self, constants: &PhysicalConstants) -> f64 {
        match self.magnitude {
            Magnitude::Linear(v) => AlphaScaled {
                base: v,
                power: self.power,
            }
            .to_f64(constants),
            Magnitude::Log(_) => self.ln(constants).exp(),
        }
    }

    /// `count · quantity`, combining α exponents before evaluation.
    fn times(&self, constants: &PhysicalConstants, quantity: AlphaScaled) -> f64 {
        let power = self.power * quantity.power;
        match self.magnitude {
            Magnitude::Linear(v) => AlphaScaled {
                base: v * quantity.base,
                power,
            }
            .to_f64(constants),
            Magnitude::Log(l) => {
                (l + quantity.base.ln() + power.0 as f64 * constants.alpha().ln()).exp()
            }
        }
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.magnitude {
            Magnitude::Linear(v) => write!(f, "{v}·{}", self.power),
            Magnitude::Log(l) => write!(f, "exp({l})·{}", self.power),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleEntry {
    pub state: ParticleState,
    pub count: Count,
    /// Exact share of the parent's matter budget, set by fission.
    pub share: Option<Ratio<u64>>,
}

impl EnsembleEntry {
    pub fn new(state: ParticleState, count: Count) -> Self {
        EnsembleEntry {
            state,
            count,
            share: None,
        }
    }

    /// `count · M0 · α^(−2(D−4))` in GeV.
    pub fn energy_gev(&self, constants: &PhysicalConstants) -> f64 {
        self.count.times(constants, self.state.energy_scaled())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Ensemble {
    pub entries: Vec<EnsembleEntry>,
    pub radiation_energy: f64,
}

impl Ensemble {
    pub fn total_energy_gev(&self, constants: &PhysicalConstants) -> f64 {
        self.entries
            .iter()
            .map(|e| e.energy_gev(constants))
            .sum::<f64>()
            + self.radiation_energy
    }
}

/// Moves an entry to another space-time dimension. Energy is unchanged
/// because the mass exponent absorbs the change in `c_D²`.
pub fn qvsl_entry(
    entry: &EnsembleEntry,
    n: u8,
    direction: QvslDirection,
) -> Result<EnsembleEntry, CascadeError> {
    Ok(EnsembleEntry {
        state: qvsl_transform(&entry.state, n, direction)?,
        ..entry.clone()
    })
}

/// `d → d−1`: each particle becomes `1/α²` particles of mass `M·α²`.
pub fn fractionalize_step(entry: &EnsembleEntry) -> Result<EnsembleEntry, CascadeError> {
    fractionalize_to(entry, entry.state.mass_dim() as i32 - 1).map_err(|e| match e {
        CascadeError::TargetOutOfRange { .. } => CascadeError::AtFloor,
        e => e,
    })
}

pub fn fractionalize_to(
    entry: &EnsembleEntry,
    target_d: i32,
) -> Result<EnsembleEntry, CascadeError> {
    let current = entry.state.mass_dim();
    if target_d < MIN_DIM as i32 || target_d > current as i32 {
        return Err(CascadeError::TargetOutOfRange {
            target: target_d,
            current,
        });
    }
    let steps = current as i32 - target_d;
    let s = &entry.state;
    let state = ParticleState::new(
        s.spacetime_dim() as i32,
        target_d,
        s.kind(),
        s.rest_mass().scale(AlphaPower(2 * steps)),
        s.orbital_count(),
    )?;
    Ok(EnsembleEntry {
        state,
        count: entry.count.scale(AlphaPower(-2 * steps)),
        share: entry.share,
    })
}

/// Canonical fission products, heaviest first.
pub const CANONICAL_SPECIES: [u8; 6] = [9, 8, 7, 6, 5, 4];

/// Splits `entry` equally by mass and number into the listed species after
/// sending `radiation_fraction` of its energy to radiation. A species below
/// the parent's `d` comes from leaping fission with `n = d − d'`; a species
/// equal to the parent is separated with `n = 0`.
pub fn simultaneous_fission(
    constants: &PhysicalConstants,
    entry: &EnsembleEntry,
    species_d: &[u8],
    radiation_fraction: f64,
) -> Result<Ensemble, CascadeError> {
    if species_d.is_empty() {
        return Err(CascadeError::EmptySpecies);
    }
    if !(0.0..1.0).contains(&radiation_fraction) {
        return Err(CascadeError::RadiationFraction(radiation_fraction));
    }
    let parent_d = entry.state.mass_dim();
    for (i, &d) in species_d.iter().enumerate() {
        if d < MIN_DIM || d > parent_d {
            return Err(CascadeError::SpeciesOutOfRange {
                species: d as i32,
                parent: parent_d,
            });
        }
        if species_d[..i].contains(&d) {
            return Err(CascadeError::DuplicateSpecies(d));
        }
    }

    let parts = species_d.len() as u32;
    let mass = entry.state.rest_mass();
    // count/k particles of mass (1−r)·M per species
    let species_mass = AlphaScaled {
        base: mass.base * (1.0 - radiation_fraction),
        power: mass.power,
    };
    let count = entry.count.divide(parts);
    let share = Ratio::new(1, parts as u64);

    let entries = species_d
        .iter()
        .map(|&d| {
            let (core, _orbitals) = leap_fission(&entry.state, parent_d - d)?;
            Ok(EnsembleEntry {
                state: core.with_mass(species_mass),
                count,
                share: Some(share),
            })
        })
        .collect::<Result<Vec<_>, CascadeError>>()?;

    Ok(Ensemble {
        entries,
        radiation_energy: radiation_fraction * entry.energy_gev(constants),
    })
}

fn ratio_to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorFractions {
    pub dark: f64,
    pub baryonic: f64,
    pub dark_energy: f64,
}

impl SectorFractions {
    pub fn sum(&self) -> f64 {
        self.dark + self.baryonic + self.dark_energy
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarkSector {
    /// Dark-matter to baryonic-matter mass ratio.
    pub ratio: f64,
    pub fractions: SectorFractions,
}

/// Dark-to-baryonic ratio and the three-way budget split. The single `d = 4`
/// entry is baryonic; every higher-`d` entry is dark matter. Dark energy is a
/// configured overlay reserving `dark_energy_fraction` of the total.
pub fn dark_sector_ratio(
    ensemble: &Ensemble,
    constants: &PhysicalConstants,
) -> Result<DarkSector, CascadeError> {
    let (baryonic, dark): (Vec<_>, Vec<_>) = ensemble
        .entries
        .iter()
        .partition(|e| e.state.mass_dim() == MIN_DIM);
    let baryonic = match baryonic.as_slice() {
        [] => return Err(CascadeError::MissingBaryonic),
        [one] => *one,
        _ => return Err(CascadeError::MultipleBaryonic),
    };
    if dark.is_empty() {
        return Err(CascadeError::NoDarkSector);
    }

    // Exact rational route when every entry carries a fission share.
    let shares: Option<Vec<Ratio<u64>>> = dark.iter().map(|e| e.share).collect();
    let (dark_of_matter, ratio) = match (shares, baryonic.share) {
        (Some(shares), Some(b)) if !baryonic.count.is_zero() => {
            let dark_share = shares
                .into_iter()
                .fold(Ratio::from_integer(0), |acc, s| acc + s);
            (
                ratio_to_f64(dark_share / (dark_share + b)),
                ratio_to_f64(dark_share / b),
            )
        }
        _ => {
            let b = baryonic.energy_gev(constants);
            if b <= 0.0 {
                return Err(CascadeError::EmptyBaryonic);
            }
            let d: f64 = dark.iter().map(|e| e.energy_gev(constants)).sum();
            (d / (d + b), d / b)
        }
    };
    let de = constants.dark_energy_fraction();
    let matter = 1.0 - de;
    Ok(DarkSector {
        ratio,
        fractions: SectorFractions {
            dark: matter * dark_of_matter,
            baryonic: matter * (1.0 - dark_of_matter),
            dark_energy: de,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub radiation_fraction: f64,
    pub species_d: Vec<u8>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            radiation_fraction: 0.0,
            species_d: CANONICAL_SPECIES.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Milestone {
    pub stage: String,
    pub state: String,
    pub energy_gev: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ledger {
    pub initial_gev: f64,
    pub final_gev: f64,
}

impl Ledger {
    pub fn relative_error(&self) -> f64 {
        ((self.final_gev - self.initial_gev) / self.initial_gev).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeciesSummary {
    pub state: String,
    pub kind: Kind,
    pub orbital_count: u8,
    pub log10_count: f64,
    pub mass_gev: f64,
    pub energy_gev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub milestones: Vec<Milestone>,
    pub sector_fractions: SectorFractions,
    pub ledger: Ledger,
    pub dark_to_baryonic: f64,
    pub radiation_gev: f64,
    pub species: Vec<SpeciesSummary>,
    pub notes: Vec<String>,
}

/// One 10D4d string state whose own-space-time energy is the Planck energy.
pub fn default_initial(constants: &PhysicalConstants) -> EnsembleEntry {
    let rest_mass = AlphaScaled::with_power(constants.planck_energy_gev(), 12);
    let state = ParticleState::new(10, 4, Kind::Boson, rest_mass, 0)
        .expect("10D4d with positive Planck energy is valid");
    EnsembleEntry::new(state, Count::new(1.0).expect("unit count"))
}

/// Runs QVSL transform → stepwise fractionalization → simultaneous fission →
/// sector accounting.
///
/// Milestone energies after the first are the characteristic boson-ladder
/// energy `B_d` of the stage's mass dimension (`B10 = E_Planck·α²` for
/// 4D10d, `B9 = E_Planck·α⁴` for 4D9d). The first milestone is the initial
/// state's own energy.
pub fn run_pipeline(
    constants: &PhysicalConstants,
    initial: &EnsembleEntry,
    options: &PipelineOptions,
) -> Result<PipelineReport, CascadeError> {
    let mut milestones = Vec::with_capacity(4);
    let mut notes = Vec::new();
    let initial_gev = initial.energy_gev(constants);
    milestones.push(Milestone {
        stage: "initial".into(),
        state: initial.state.label(),
        energy_gev: initial.state.energy_scaled().to_f64(constants),
    });

    let n = initial.state.spacetime_dim() - MIN_DIM;
    let inflating = in_stage("qvsl_transform", {
        if n == 0 {
            Ok(initial.clone())
        } else {
            qvsl_entry(initial, n, QvslDirection::RaiseD)
        }
    })?;
    let d = inflating.state.mass_dim();
    milestones.push(Milestone {
        stage: "qvsl_transform".into(),
        state: inflating.state.label(),
        energy_gev: boson_energy(constants, d)?,
    });

    let parent_d = in_stage(
        "fractionalization",
        options
            .species_d
            .iter()
            .copied()
            .max()
            .ok_or(CascadeError::EmptySpecies),
    )?;
    let inflated = in_stage(
        "fractionalization",
        fractionalize_to(&inflating, parent_d as i32),
    )?;
    milestones.push(Milestone {
        stage: "fractionalization".into(),
        state: inflated.state.label(),
        energy_gev: boson_energy(constants, parent_d)?,
    });

    let ensemble = in_stage(
        "simultaneous_fission",
        simultaneous_fission(
            constants,
            &inflated,
            &options.species_d,
            options.radiation_fraction,
        ),
    )?;
    let lightest = ensemble
        .entries
        .iter()
        .min_by_key(|e| e.state.mass_dim())
        .expect("fission yields at least one species");
    milestones.push(Milestone {
        stage: "simultaneous_fission".into(),
        state: lightest.state.label(),
        energy_gev: boson_energy(constants, lightest.state.mass_dim())?,
    });
    if let Some(survivor) = ensemble
        .entries
        .iter()
        .find(|e| e.state.mass_dim() == parent_d)
    {
        notes.push(format!(
            "surviving {} species separated by n = 0 fission: carries {} dimensional orbitals",
            survivor.state.label(),
            survivor.state.orbital_count()
        ));
    }

    let sector = in_stage("dark_sector_ratio", dark_sector_ratio(&ensemble, constants))?;

    let species = ensemble
        .entries
        .iter()
        .map(|e| SpeciesSummary {
            state: e.state.label(),
            kind: e.state.kind(),
            orbital_count: e.state.orbital_count(),
            log10_count: e.count.log10(constants),
            mass_gev: e.state.rest_mass_gev(constants),
            energy_gev: e.energy_gev(constants),
        })
        .collect();

    Ok(PipelineReport {
        milestones,
        sector_fractions: sector.fractions,
        ledger: Ledger {
            initial_gev,
            final_gev: ensemble.total_energy_gev(constants),
        },
        dark_to_baryonic: sector.ratio,
        radiation_gev: ensemble.radiation_energy,
        species,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> PhysicalConstants {
        PhysicalConstants::default()
    }

    fn entry(d: i32, mass: f64, count: f64) -> EnsembleEntry {
        EnsembleEntry::new(
            ParticleState::simple(4, d, Kind::Boson, mass).unwrap(),
            Count::new(count).unwrap(),
        )
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn fractionalize_step_examples() {
        let c = k();
        let e = entry(10, 1.0, 1.0);
        let f = fractionalize_step(&e).unwrap();
        assert_eq!(f.state.mass_dim(), 9);
        assert!(rel(f.count.to_f64(&c), 18_778.865_070_600_48) < 1e-13);
        assert!(rel(f.state.rest_mass_gev(&c), 5.325_135_444_769_578e-5) < 1e-13);
        assert_eq!(f.energy_gev(&c), e.energy_gev(&c));

        let z = fractionalize_step(&entry(5, 2.0, 0.0)).unwrap();
        assert_eq!(z.state.mass_dim(), 4);
        assert!(z.count.is_zero());
        assert_eq!(
            fractionalize_step(&entry(4, 1.0, 1.0)),
            Err(CascadeError::AtFloor)
        );
    }

    #[test]
    fn fractionalize_to_composes() {
        let c = k();
        let e = entry(10, 1.0, 1.0);
        assert_eq!(fractionalize_to(&e, 10).unwrap(), e);
        assert_eq!(
            fractionalize_to(&e, 9).unwrap(),
            fractionalize_step(&e).unwrap()
        );
        let mut stepped = e.clone();
        for _ in 0..6 {
            stepped = fractionalize_step(&stepped).unwrap();
        }
        let jumped = fractionalize_to(&e, 4).unwrap();
        assert_eq!(stepped, jumped);
        assert_eq!(jumped.count.alpha_power(), AlphaPower(-12));
        assert!(rel(jumped.count.to_f64(&c), 4.385_469_034_549_919e25) < 1e-12);
        assert!(matches!(
            fractionalize_to(&e, 11),
            Err(CascadeError::TargetOutOfRange { .. })
        ));
        assert!(fractionalize_to(&e, 3).is_err());
    }

    #[test]
    fn counts_move_to_log_space() {
        let c = k();
        let small = Count::new(1e15).unwrap();
        assert!(!small.is_log_space());
        let big = Count::new(2e15).unwrap();
        assert!(big.is_log_space());
        assert!(rel(big.to_f64(&c), 2e15) < 1e-14);
        assert!(!big.divide(4).is_log_space());
        let huge = Count::from_ln(1000.0).unwrap();
        assert_eq!(huge.to_f64(&c), f64::INFINITY);
        assert!(rel(huge.log10(&c), 1000.0 / std::f64::consts::LN_10) < 1e-15);
        assert!(Count::new(-1.0).is_err());
        assert!(Count::new(f64::NAN).is_err());
    }

    #[test]
    fn fission_equal_split() {
        let c = k();
        let parent = entry(9, 1.0, 6.0);
        let ens = simultaneous_fission(&c, &parent, &CANONICAL_SPECIES, 0.0).unwrap();
        assert_eq!(ens.entries.len(), 6);
        for e in &ens.entries {
            assert!(rel(e.energy_gev(&c), 1.0) < 1e-15);
        }
        let orbitals: Vec<u8> = ens
            .entries
            .iter()
            .map(|e| e.state.orbital_count())
            .collect();
        assert_eq!(orbitals, [2, 3, 4, 5, 6, 7]);
        assert_eq!(ens.radiation_energy, 0.0);

        let ens = simultaneous_fission(&c, &parent, &CANONICAL_SPECIES, 0.5).unwrap();
        for e in &ens.entries {
            assert!(rel(e.energy_gev(&c), 0.5) < 1e-15);
        }
        assert_eq!(ens.radiation_energy, 3.0);
        assert!(rel(ens.total_energy_gev(&c), 6.0) < 1e-15);
    }

    #[test]
    fn fission_errors() {
        let c = k();
        let parent = entry(9, 1.0, 6.0);
        assert_eq!(
            simultaneous_fission(&c, &parent, &[], 0.0),
            Err(CascadeError::EmptySpecies)
        );
        assert_eq!(
            simultaneous_fission(&c, &parent, &[9, 4], 1.0),
            Err(CascadeError::RadiationFraction(1.0))
        );
        assert!(simultaneous_fission(&c, &parent, &[9, 4], -0.1).is_err());
        assert!(simultaneous_fission(&c, &parent, &[10, 4], 0.0).is_err());
        assert_eq!(
            simultaneous_fission(&c, &parent, &[4, 4], 0.0),
            Err(CascadeError::DuplicateSpecies(4))
        );
    }

    #[test]
    fn sector_ratio_examples() {
        let c = k();
        let parent = entry(9, 1.0, 6.0);
        let ens = simultaneous_fission(&c, &parent, &CANONICAL_SPECIES, 0.0).unwrap();
        let s = dark_sector_ratio(&ens, &c).unwrap();
        assert_eq!(s.ratio, 5.0);
        assert!((s.fractions.dark - 0.25).abs() < 1e-12);
        assert!((s.fractions.baryonic - 0.05).abs() < 1e-12);
        assert_eq!(s.fractions.dark_energy, 0.70);
        assert!((s.fractions.sum() - 1.0).abs() < 1e-12);

        let only_baryons = Ensemble {
            entries: vec![entry(4, 1.0, 1.0)],
            radiation_energy: 0.0,
        };
        assert_eq!(
            dark_sector_ratio(&only_baryons, &c).unwrap_err(),
            CascadeError::NoDarkSector
        );
        let no_baryons = Ensemble {
            entries: vec![entry(5, 1.0, 1.0)],
            radiation_energy: 0.0,
        };
        assert_eq!(
            dark_sector_ratio(&no_baryons, &c).unwrap_err(),
            CascadeError::MissingBaryonic
        );
    }

    #[test]
    fn sector_ratio_from_masses_without_shares() {
        let c = k();
        let ens = Ensemble {
            entries: vec![entry(4, 1.0, 2.0), entry(7, 3.0, 1.0), entry(6, 1.0, 1.0)],
            radiation_energy: 0.0,
        };
        let s = dark_sector_ratio(&ens, &c).unwrap();
        assert!(rel(s.ratio, 2.0) < 1e-15);
        assert!((s.fractions.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn default_pipeline() {
        let c = k();
        let report = run_pipeline(&c, &default_initial(&c), &PipelineOptions::default()).unwrap();
        let m = &report.milestones;
        assert_eq!(m.len(), 4);
        assert_eq!(m[0].state, "10D4d");
        assert!(rel(m[0].energy_gev, 1.22e19) < 1e-14);
        assert_eq!(m[1].state, "4D10d");
        assert!(rel(m[1].energy_gev, 649_666_524_261_888.6) < 1e-13);
        assert_eq!(m[2].state, "4D9d");
        assert!(rel(m[2].energy_gev, 34_595_622_356.272_38) < 1e-13);
        assert_eq!(m[3].state, "4D4d");
        assert!(m.windows(2).all(|w| w[1].energy_gev < w[0].energy_gev));
        assert!(report.ledger.relative_error() < 1e-12);
        assert_eq!(report.dark_to_baryonic, 5.0);
        assert_eq!(report.notes.len(), 1);
        assert_eq!(report.species[0].orbital_count, 2);
    }

    #[test]
    fn pipeline_errors_carry_stage() {
        let c = k();
        let opts = PipelineOptions {
            species_d: vec![11, 4],
            ..Default::default()
        };
        match run_pipeline(&c, &default_initial(&c), &opts) {
            Err(CascadeError::Stage { stage, .. }) => assert_eq!(stage, "fractionalization"),
            other => panic!("unexpected {other:?}"),
        }
        let opts = PipelineOptions {
            species_d: vec![9, 8],
            ..Default::default()
        };
        match run_pipeline(&c, &default_initial(&c), &opts) {
            Err(CascadeError::Stage { stage, .. }) => assert_eq!(stage, "dark_sector_ratio"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
