//! Physical constants and exact bookkeeping of fine-structure-constant powers.
//!
//! Internally everything uses natural units (`c = h = 1` unless overridden);
//! energies and masses are in GeV. Powers of α are carried as integer
//! exponents ([`AlphaPower`]) and only turned into an `f64` when a scalar is
//! demanded, so chained `α^{±2n}` factors never accumulate rounding error.

use std::fmt;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// CODATA 2022 fine structure constant.
pub const CODATA_ALPHA: f64 = 7.297_352_564_3e-3;

/// Non-reduced Planck energy in GeV.
pub const DEFAULT_PLANCK_ENERGY_GEV: f64 = 1.22e19;

/// Observed dark-energy share of the cosmic budget.
pub const DEFAULT_DARK_ENERGY_FRACTION: f64 = 0.70;

/// Largest |k| accepted by [`PhysicalConstants::alpha_power`].
pub const MAX_ALPHA_EXPONENT: i32 = 64;

#[derive(Debug, Error, PartialEq)]
pub enum ConstantsError {
    #[error("malformed constants document: {0}")]
    Malformed(String),
    #[error("field `{field}` out of range: {value} ({rule})")]
    OutOfRange {
        field: &'static str,
        value: f64,
        rule: &'static str,
    },
    #[error("alpha exponent {0} exceeds the bound of +/-{MAX_ALPHA_EXPONENT}")]
    ExponentBound(i32),
}

impl ConstantsError {
    /// Name of the offending field, when the error is tied to one.
    pub fn field(&self) -> Option<&'static str> {
        match self {
            ConstantsError::OutOfRange { field, .. } => Some(field),
            _ => None,
        }
    }
}

/// Validated, immutable set of constants shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    alpha: f64,
    c: f64,
    h: f64,
    planck_energy_gev: f64,
    dark_energy_fraction: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            alpha: CODATA_ALPHA,
            c: 1.0,
            h: 1.0,
            planck_energy_gev: DEFAULT_PLANCK_ENERGY_GEV,
            dark_energy_fraction: DEFAULT_DARK_ENERGY_FRACTION,
        }
    }
}

/// Overrides as they appear in a configuration document. Absent keys keep
/// their defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planck_energy_gev: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dark_energy_fraction: Option<f64>,
}

impl ConstantsOverrides {
    pub fn is_empty(&self) -> bool {
        *self == ConstantsOverrides::default()
    }
}

impl PhysicalConstants {
    pub fn new(
        alpha: f64,
        c: f64,
        h: f64,
        planck_energy_gev: f64,
        dark_energy_fraction: f64,
    ) -> Result<Self, ConstantsError> {
        fn check(
            field: &'static str,
            value: f64,
            ok: bool,
            rule: &'static str,
        ) -> Result<(), ConstantsError> {
            if ok && value.is_finite() {
                Ok(())
            } else {
                Err(ConstantsError::OutOfRange { field, value, rule })
            }
        }
        check("alpha", alpha, alpha > 0.0 && alpha < 1.0, "0 < alpha < 1")?;
        check("c", c, c > 0.0, "c > 0")?;
        check("h", h, h > 0.0, "h > 0")?;
        check(
            "planck_energy_gev",
            planck_energy_gev,
            planck_energy_gev > 0.0,
            "planck_energy_gev > 0",
        )?;
        check(
            "dark_energy_fraction",
            dark_energy_fraction,
            (0.0..1.0).contains(&dark_energy_fraction),
            "0 <= dark_energy_fraction < 1",
        )?;
        Ok(PhysicalConstants {
            alpha,
            c,
            h,
            planck_energy_gev,
            dark_energy_fraction,
        })
    }

    /// Applies overrides on top of the defaults and validates the result.
    pub fn from_overrides(o: &ConstantsOverrides) -> Result<Self, ConstantsError> {
        let d = PhysicalConstants::default();
        PhysicalConstants::new(
            o.alpha.unwrap_or(d.alpha),
            o.c.unwrap_or(d.c),
            o.h.unwrap_or(d.h),
            o.planck_energy_gev.unwrap_or(d.planck_energy_gev),
            o.dark_energy_fraction.unwrap_or(d.dark_energy_fraction),
        )
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn planck_energy_gev(&self) -> f64 {
        self.planck_energy_gev
    }

    pub fn dark_energy_fraction(&self) -> f64 {
        self.dark_energy_fraction
    }

    /// `alpha^k`, evaluated in a single exponentiation.
    pub fn alpha_power(&self, k: i32) -> Result<f64, ConstantsError> {
        if k.abs() > MAX_ALPHA_EXPONENT {
            return Err(ConstantsError::ExponentBound(k));
        }
        Ok(self.alpha.powi(k))
    }

    /// The uncertainty bound `h / 4π`.
    pub fn gap_bound(&self) -> f64 {
        self.h / (4.0 * std::f64::consts::PI)
    }
}

/// Parses a JSON configuration document. An empty or whitespace-only
/// document yields the defaults.
pub fn load_constants(source: &str) -> Result<PhysicalConstants, ConstantsError> {
    if source.trim().is_empty() {
        return Ok(PhysicalConstants::default());
    }
    let overrides: ConstantsOverrides =
        serde_json::from_str(source).map_err(|e| ConstantsError::Malformed(e.to_string()))?;
    PhysicalConstants::from_overrides(&overrides)
}

/// An exact integer power of α.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AlphaPower(pub i32);

impl AlphaPower {
    pub const ONE: AlphaPower = AlphaPower(0);

    pub fn exponent(self) -> i32 {
        self.0
    }

    pub fn inverse(self) -> AlphaPower {
        AlphaPower(-self.0)
    }

    /// The only lossy step: evaluation against a concrete α.
    pub fn value(self, constants: &PhysicalConstants) -> Result<f64, ConstantsError> {
        constants.alpha_power(self.0)
    }
}

impl Mul for AlphaPower {
    type Output = AlphaPower;

    // α^a · α^b = α^(a+b)
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: AlphaPower) -> AlphaPower {
        AlphaPower(self.0 + rhs.0)
    }
}

impl Neg for AlphaPower {
    type Output = AlphaPower;

    fn neg(self) -> AlphaPower {
        self.inverse()
    }
}

impl fmt::Display for AlphaPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha^{}", self.0)
    }
}

/// A real quantity written as `base · α^power`. Scaling by powers of α only
/// touches the exponent, so inverse transforms restore the value bit for bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaScaled {
    pub base: f64,
    pub power: AlphaPower,
}

impl AlphaScaled {
    pub fn new(base: f64) -> Self {
        AlphaScaled {
            base,
            power: AlphaPower::ONE,
        }
    }

    pub fn with_power(base: f64, power: i32) -> Self {
        AlphaScaled {
            base,
            power: AlphaPower(power),
        }
    }

    pub fn scale(self, by: AlphaPower) -> Self {
        AlphaScaled {
            base: self.base,
            power: self.power * by,
        }
    }

    pub fn to_f64(self, constants: &PhysicalConstants) -> f64 {
        // Exponents reachable from valid states stay far inside the bound.
        self.base * constants.alpha.powi(self.power.0)
    }
}
