//! Destination-side combining rules.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};

/// Combining scheme evaluated at the destination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeId {
    /// Conventional selection combining (weight 1).
    Sc,
    /// Weighted selection combining with a fixed weight.
    Wsc1,
    /// Weighted selection combining with the adaptive weight `min(1, gamma1/gamma_bar2)`.
    Wsc2,
    /// Link-adaptive relaying: relay power scaled by `min(1, gamma1/gamma_bar2)`,
    /// linear combining at the destination.
    Lar,
}

impl SchemeId {
    pub const ALL: [SchemeId; 4] = [SchemeId::Sc, SchemeId::Wsc1, SchemeId::Wsc2, SchemeId::Lar];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::Sc => "sc",
            SchemeId::Wsc1 => "wsc1",
            SchemeId::Wsc2 => "wsc2",
            SchemeId::Lar => "lar",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sc" => Ok(SchemeId::Sc),
            "wsc1" => Ok(SchemeId::Wsc1),
            "wsc2" => Ok(SchemeId::Wsc2),
            "lar" => Ok(SchemeId::Lar),
            other => param(format!(
                "unknown scheme '{other}' (expected sc, wsc1, wsc2 or lar)"
            )),
        }
    }
}

/// User-supplied relay-branch weight, strictly positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct WeightFactor(f64);

impl WeightFactor {
    pub const UNIT: WeightFactor = WeightFactor(1.0);

    pub fn new(beta: f64) -> Result<Self> {
        if beta > 0.0 && beta.is_finite() {
            Ok(Self(beta))
        } else {
            param(format!("weight factor must be finite and > 0, got {beta}"))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Which branch the selection rule picked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Direct,
    Relay,
}

/// Outcome of a selection rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Selection {
    pub branch: Branch,
    pub selected: f64,
    pub bit: i8,
}

/// Hard decision; a zero decision variable maps to `+1`.
#[inline]
pub fn sign_bit(x: f64) -> i8 {
    if x < 0.0 {
        -1
    } else {
        1
    }
}

/// Weighted selection with an arbitrary non-negative weight. `beta == 0`
/// always picks the direct link; ties go to the direct link.
#[inline]
pub fn select_weighted(xi0: f64, xi2: f64, beta: f64) -> Selection {
    if xi0.abs() >= beta * xi2.abs() {
        Selection {
            branch: Branch::Direct,
            selected: xi0,
            bit: sign_bit(xi0),
        }
    } else {
        Selection {
            branch: Branch::Relay,
            selected: xi2,
            bit: sign_bit(xi2),
        }
    }
}

/// Weighted selection combining with a fixed weight.
pub fn combine_wsc(xi0: f64, xi2: f64, beta: WeightFactor) -> Selection {
    select_weighted(xi0, xi2, beta.get())
}

/// Conventional selection combining: the larger-magnitude decision variable wins.
pub fn combine_sc(xi0: f64, xi2: f64) -> Selection {
    select_weighted(xi0, xi2, 1.0)
}

/// Adaptive weight: `gamma1 / gamma_bar2` below `gamma_bar2`, 1 otherwise.
///
/// Returns 0 when the source-relay link is dead (`gamma1 == 0`), which
/// [`select_weighted`] treats as "always use the direct link".
pub fn beta_wsc2(gamma1: f64, gamma_bar2: f64) -> f64 {
    if gamma1 < gamma_bar2 {
        (gamma1 / gamma_bar2).max(0.0)
    } else {
        1.0
    }
}

/// Relay power scale of the link-adaptive relaying baseline, `min(1, gamma1/gamma_bar2)`.
pub fn lar_power_factor(gamma1: f64, gamma_bar2: f64) -> f64 {
    beta_wsc2(gamma1, gamma_bar2)
}

/// Linear (equal-gain) combination of the direct and power-scaled relay branches.
#[inline]
pub fn combine_lar(xi0: f64, xi_lar: f64) -> i8 {
    sign_bit(xi0 + xi_lar)
}
