//! Transformation algebra over particle states.
//!
//! A particle is labelled by its space-time dimension number `D` (which fixes
//! its light speed `c/α^(D−4)`) and its mass dimension number `d` (which fixes
//! its effective 4D rest mass `M0/α^(2(d−4))`). All transforms here are pure
//! functions; rest masses are [`AlphaScaled`] so α factors stay exact.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::{AlphaPower, AlphaScaled, ConstantsError, PhysicalConstants};

pub const MIN_DIM: u8 = 4;
pub const MAX_DIM: u8 = 11;
/// Upper bound on dimensional orbitals carried by a single particle.
pub const MAX_ORBITALS: u8 = MAX_DIM - MIN_DIM;

#[derive(Debug, Error, PartialEq)]
pub enum AlgebraError {
    #[error("{name} = {value} is outside [4, 11]")]
    DimensionOutOfRange { name: &'static str, value: i32 },
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("orbital count {0} exceeds 7")]
    TooManyOrbitals(u8),
    #[error("step must be positive")]
    ZeroStep,
    #[error(transparent)]
    Constants(#[from] ConstantsError),
}

fn check_dim(name: &'static str, value: i32) -> Result<u8, AlgebraError> {
    if (MIN_DIM as i32..=MAX_DIM as i32).contains(&value) {
        Ok(value as u8)
    } else {
        Err(AlgebraError::DimensionOutOfRange { name, value })
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<(), AlgebraError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(AlgebraError::NonPositive { name, value })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Boson,
    Fermion,
}

impl Kind {
    pub fn symbol(self) -> char {
        match self {
            Kind::Boson => 'B',
            Kind::Fermion => 'F',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParticleState {
    spacetime_dim: u8,
    mass_dim: u8,
    kind: Kind,
    rest_mass: AlphaScaled,
    orbital_count: u8,
}

impl ParticleState {
    pub fn new(
        spacetime_dim: i32,
        mass_dim: i32,
        kind: Kind,
        rest_mass: AlphaScaled,
        orbital_count: u8,
    ) -> Result<Self, AlgebraError> {
        let spacetime_dim = check_dim("D", spacetime_dim)?;
        let mass_dim = check_dim("d", mass_dim)?;
        check_positive("rest_mass", rest_mass.base)?;
        if orbital_count > MAX_ORBITALS {
            return Err(AlgebraError::TooManyOrbitals(orbital_count));
        }
        Ok(ParticleState {
            spacetime_dim,
            mass_dim,
            kind,
            rest_mass,
            orbital_count,
        })
    }

    /// A state with a plain GeV rest mass and no orbitals.
    pub fn simple(
        spacetime_dim: i32,
        mass_dim: i32,
        kind: Kind,
        mass_gev: f64,
    ) -> Result<Self, AlgebraError> {
        ParticleState::new(spacetime_dim, mass_dim, kind, AlphaScaled::new(mass_gev), 0)
    }

    pub fn spacetime_dim(&self) -> u8 {
        self.spacetime_dim
    }

    pub fn mass_dim(&self) -> u8 {
        self.mass_dim
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn rest_mass(&self) -> AlphaScaled {
        self.rest_mass
    }

    pub fn rest_mass_gev(&self, constants: &PhysicalConstants) -> f64 {
        self.rest_mass.to_f64(constants)
    }

    pub fn orbital_count(&self) -> u8 {
        self.orbital_count
    }

    /// Energy carried in the particle's own space-time, `M0 c_D²`, as an
    /// exact α-scaled quantity (with `c = 1`).
    pub fn energy_scaled(&self) -> AlphaScaled {
        self.rest_mass.scale(AlphaPower(
            -2 * (self.spacetime_dim as i32 - MIN_DIM as i32),
        ))
    }

    pub(crate) fn with_mass(mut self, rest_mass: AlphaScaled) -> Self {
        self.rest_mass = rest_mass;
        self
    }

    /// Compact `<D>D<d>d` label, e.g. `4D10d`.
    pub fn label(&self) -> String {
        format!("{}D{}d", self.spacetime_dim, self.mass_dim)
    }
}

impl fmt::Display for ParticleState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:?}", self.label(), self.kind)
    }
}

/// One dimensional orbital: the separable dimension `dimension` together
/// with its leading boson. The fermionic partner `F_dimension` travels with
/// it except at the top dimension, where only `B_11` exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrbitalLabel {
    pub dimension: u8,
    pub kind: Kind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitalSet {
    count: u8,
    labels: Vec<OrbitalLabel>,
}

impl OrbitalSet {
    /// Orbitals for every dimension strictly above `core_dim`.
    fn above(core_dim: u8) -> Self {
        let labels: Vec<_> = (core_dim + 1..=MAX_DIM)
            .map(|dimension| OrbitalLabel {
                dimension,
                kind: Kind::Boson,
            })
            .collect();
        OrbitalSet {
            count: labels.len() as u8,
            labels,
        }
    }

    pub fn count(&self) -> u8 {
        self.count
    }

    pub fn labels(&self) -> &[OrbitalLabel] {
        &self.labels
    }

    /// Ladder constituents in order, e.g. `B5F5B6F6…B11` for orbitals 5..=11.
    pub fn pattern(&self) -> String {
        let mut out = String::new();
        for l in &self.labels {
            out.push_str(&format!("B{}", l.dimension));
            if l.dimension < MAX_DIM {
                out.push_str(&format!("F{}", l.dimension));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderEntry {
    pub mass_dim: u8,
    pub kind: Kind,
    pub mass_gev: f64,
}

impl LadderEntry {
    pub fn name(&self) -> String {
        format!("{}{}", self.kind.symbol(), self.mass_dim)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QvslDirection {
    /// D decreases by n, d increases by n; mass × α^(−2n).
    RaiseD,
    /// D increases by n, d decreases by n; mass × α^(2n).
    LowerD,
}

impl std::str::FromStr for QvslDirection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "raise_d" => Ok(QvslDirection::RaiseD),
            "lower_d" => Ok(QvslDirection::LowerD),
            other => Err(format!("unknown direction `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SusyDirection {
    Down,
    Up,
}

/// Continuous VSL reference curve `c0 · a^n`.
pub fn vsl_speed(c0: f64, scale_factor: f64, exponent: f64) -> Result<f64, AlgebraError> {
    check_positive("c0", c0)?;
    check_positive("scale_factor", scale_factor)?;
    Ok(c0 * scale_factor.powf(exponent))
}

/// Quantized light speed in `D` space-time dimensions, `c / α^(D−4)`.
pub fn qvsl_speed(constants: &PhysicalConstants, spacetime_dim: i32) -> Result<f64, AlgebraError> {
    let dim = check_dim("D", spacetime_dim)? as i32;
    Ok(constants.c() * constants.alpha_power(-(dim - 4))?)
}

/// `M0 · c² / α^(2(D−4))`.
pub fn superluminal_energy(
    constants: &PhysicalConstants,
    m0: f64,
    spacetime_dim: i32,
) -> Result<f64, AlgebraError> {
    check_positive("M0", m0)?;
    let dim = check_dim("D", spacetime_dim)? as i32;
    let c2 = constants.c() * constants.c();
    Ok(m0 * constants.alpha_power(-2 * (dim - 4))? * c2)
}

/// `M0 / α^(2(d−4))`, the rest mass the same particle shows in 4D.
pub fn effective_rest_mass(
    constants: &PhysicalConstants,
    m0: f64,
    d: i32,
) -> Result<f64, AlgebraError> {
    check_positive("M0", m0)?;
    let d = check_dim("d", d)? as i32;
    Ok(m0 * constants.alpha_power(-2 * (d - 4))?)
}

pub fn qvsl_transform(
    state: &ParticleState,
    n: u8,
    direction: QvslDirection,
) -> Result<ParticleState, AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::ZeroStep);
    }
    let n = n as i32;
    let (d_spacetime, d_mass, mass_power) = match direction {
        QvslDirection::RaiseD => (-n, n, -2 * n),
        QvslDirection::LowerD => (n, -n, 2 * n),
    };
    ParticleState::new(
        state.spacetime_dim as i32 + d_spacetime,
        state.mass_dim as i32 + d_mass,
        state.kind,
        state.rest_mass.scale(AlphaPower(mass_power)),
        state.orbital_count,
    )
}

/// One varying-supersymmetry step.
///
/// Down: `B_d → F_d` and `F_d → B_{d−1}`, each multiplying the mass by α.
/// Up inverts these. Steps that would leave `[4, 11]` are rejected.
pub fn susy_step(
    _constants: &PhysicalConstants,
    state: &ParticleState,
    direction: SusyDirection,
) -> Result<ParticleState, AlgebraError> {
    let d = state.mass_dim as i32;
    let (kind, new_d, power) = match (direction, state.kind) {
        (SusyDirection::Down, Kind::Boson) => (Kind::Fermion, d, 1),
        (SusyDirection::Down, Kind::Fermion) => (Kind::Boson, d - 1, 1),
        (SusyDirection::Up, Kind::Fermion) => (Kind::Boson, d, -1),
        (SusyDirection::Up, Kind::Boson) => (Kind::Fermion, d + 1, -1),
    };
    ParticleState::new(
        state.spacetime_dim as i32,
        new_d,
        kind,
        state.rest_mass.scale(AlphaPower(power)),
        state.orbital_count,
    )
}

/// The ladder `F5 B5 F6 B6 … F11 B11`, anchored at `B11 = E_Planck`.
pub fn boson_ladder(constants: &PhysicalConstants) -> Vec<LadderEntry> {
    let top = AlphaScaled::new(constants.planck_energy_gev());
    (5..=MAX_DIM)
        .flat_map(|d| {
            let boson = top.scale(AlphaPower(2 * (MAX_DIM as i32 - d as i32)));
            let fermion = boson.scale(AlphaPower(1));
            [
                LadderEntry {
                    mass_dim: d,
                    kind: Kind::Fermion,
                    mass_gev: fermion.to_f64(constants),
                },
                LadderEntry {
                    mass_dim: d,
                    kind: Kind::Boson,
                    mass_gev: boson.to_f64(constants),
                },
            ]
        })
        .collect()
}

/// Boson ladder energy `B_d = E_Planck · α^(2(11−d))` for any `d` in `[4, 11]`.
pub fn boson_energy(constants: &PhysicalConstants, d: u8) -> Result<f64, AlgebraError> {
    let d = check_dim("d", d as i32)? as i32;
    Ok(constants.planck_energy_gev() * constants.alpha_power(2 * (MAX_DIM as i32 - d))?)
}

/// Leaping fission `d → d−n`: the core keeps `D`, kind and rest mass and
/// carries `11 − d + n` dimensional orbitals, one for each dimension above
/// its new mass dimension. `n = 0` leaves `d` unchanged but still separates
/// the orbitals the particle is entitled to.
pub fn leap_fission(
    state: &ParticleState,
    n: u8,
) -> Result<(ParticleState, OrbitalSet), AlgebraError> {
    let core_dim = state.mass_dim as i32 - n as i32;
    let core_dim = check_dim("d - n", core_dim)?;
    let orbitals = OrbitalSet::above(core_dim);
    let core = ParticleState::new(
        state.spacetime_dim as i32,
        core_dim as i32,
        state.kind,
        state.rest_mass,
        orbitals.count(),
    )?;
    Ok((core, orbitals))
}
