//! Thermal steady states and the over-thermalizing bath stroke.
//!
//! The cold bath couples the ground level to the cold excited level, the hot
//! bath couples the ground level to the hot excited level. Heat is positive
//! when it flows from a bath into the particle.

use crate::error::{Error, Result};
use crate::qutrit::{DensityMatrix3, ProbVector3};

/// Level gaps above the ground level (`E_1 = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelStructure {
    delta_e_c: f64,
    delta_e_h: f64,
}

impl LevelStructure {
    pub fn new(delta_e_c: f64, delta_e_h: f64) -> Result<Self> {
        if !(delta_e_c.is_finite() && delta_e_h.is_finite()) || delta_e_c <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "level gaps must be positive and finite, got ({delta_e_c}, {delta_e_h})"
            )));
        }
        if delta_e_c >= delta_e_h {
            return Err(Error::InvalidArgument(format!(
                "cold gap {delta_e_c} must be below hot gap {delta_e_h}"
            )));
        }
        Ok(Self {
            delta_e_c,
            delta_e_h,
        })
    }

    pub fn delta_e_c(&self) -> f64 {
        self.delta_e_c
    }

    pub fn delta_e_h(&self) -> f64 {
        self.delta_e_h
    }

    /// `E_h - E_c`, the energy released per unit of inversion moved.
    pub fn work_gap(&self) -> f64 {
        self.delta_e_h - self.delta_e_c
    }

    pub fn energies(&self) -> [f64; 3] {
        [0.0, self.delta_e_c, self.delta_e_h]
    }

    pub fn mean_energy(&self, p: &ProbVector3) -> f64 {
        self.delta_e_c * p.p2() + self.delta_e_h * p.p3()
    }

    /// `tr(rho H0)`; coherences carry no energy.
    pub fn energy(&self, rho: &DensityMatrix3) -> f64 {
        self.delta_e_c * rho.element(1, 1).re + self.delta_e_h * rho.element(2, 2).re
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathPair {
    t_c: f64,
    t_h: f64,
}

impl BathPair {
    pub fn new(t_c: f64, t_h: f64) -> Result<Self> {
        if !(t_c.is_finite() && t_h.is_finite()) || t_c <= 0.0 || t_h <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "temperatures must be positive and finite, got ({t_c}, {t_h})"
            )));
        }
        Ok(Self { t_c, t_h })
    }

    pub fn t_c(&self) -> f64 {
        self.t_c
    }

    pub fn t_h(&self) -> f64 {
        self.t_h
    }
}

/// Heat exchanged in one thermal stroke and the resulting bath entropy change.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HeatLedger {
    pub q_c: f64,
    pub q_h: f64,
    pub ds_baths: f64,
}

/// Fixed point of simultaneous contact with both baths.
pub fn gibbs_steady_state(levels: &LevelStructure, baths: &BathPair) -> ProbVector3 {
    let b2 = (-levels.delta_e_c / baths.t_c).exp();
    let b3 = (-levels.delta_e_h / baths.t_h).exp();
    let z = 1.0 + b2 + b3;
    let p2 = b2 / z;
    let p3 = b3 / z;
    ProbVector3::new(1.0 - p2 - p3, p2, p3).expect("Gibbs populations are a distribution")
}

/// Bath temperatures whose Gibbs state has populations `p`.
pub fn temperatures_from_populations(levels: &LevelStructure, p: &ProbVector3) -> Result<BathPair> {
    let [p1, p2, p3] = p.as_array();
    if p2 >= p1 || p3 >= p1 || p2 <= 0.0 || p3 <= 0.0 {
        return Err(Error::NegativeTemperatureRequired {
            populations: p.as_array(),
        });
    }
    BathPair::new(
        levels.delta_e_c / (p1 / p2).ln(),
        levels.delta_e_h / (p1 / p3).ln(),
    )
}

/// Contact with both baths long enough to reach the Gibbs fixed point.
///
/// Each bath exchanges its gap times the population change of its own
/// excited level. Coherences are erased with no heat cost.
pub fn thermal_stroke(
    rho: &DensityMatrix3,
    levels: &LevelStructure,
    baths: &BathPair,
) -> (DensityMatrix3, HeatLedger) {
    let p_eq = gibbs_steady_state(levels, baths);
    let p = rho.populations();
    let q_c = levels.delta_e_c * (p_eq.p2() - p.p2());
    let q_h = levels.delta_e_h * (p_eq.p3() - p.p3());
    let ds_baths = -q_h / baths.t_h - q_c / baths.t_c;
    (
        DensityMatrix3::diagonal(&p_eq),
        HeatLedger { q_c, q_h, ds_baths },
    )
}

/// Otto efficiency `1 - dE_c / dE_h`.
pub fn efficiency(levels: &LevelStructure) -> f64 {
    1.0 - levels.delta_e_c / levels.delta_e_h
}

pub fn carnot_efficiency(baths: &BathPair) -> f64 {
    1.0 - baths.t_c / baths.t_h
}
