//! A single two-stroke engine unit in periodic steady state.
//!
//! One cycle is `[CI] -> work rotation -> [CE] -> thermal stroke`, starting
//! from the Gibbs state of the unit's baths. Coherence extraction (CE) swaps
//! the coherent engine particle with a diagonal acceptor of equal
//! populations; coherence injection (CI) is the reverse swap with a coherent
//! donor. Neither moves any energy.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::qutrit::{
    apply_work_unitary, coherence_measure, dephase, von_neumann_entropy, DensityMatrix3,
};
use crate::thermal::{
    carnot_efficiency, efficiency, gibbs_steady_state, thermal_stroke, BathPair, LevelStructure,
};

/// Default population-match tolerance for CE/CI swaps (relative, per level).
pub const POPULATION_TOL: f64 = 1e-9;

/// Off-diagonal magnitude below which a particle counts as incoherent.
const DIAGONAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineUnit {
    pub levels: LevelStructure,
    pub baths: BathPair,
    delta_theta: f64,
}

impl EngineUnit {
    /// `delta_theta` must lie in `[0, pi]`; zero gives an idle cycle.
    pub fn new(levels: LevelStructure, baths: BathPair, delta_theta: f64) -> Result<Self> {
        if !(0.0..=PI + 1e-12).contains(&delta_theta) {
            return Err(Error::InvalidArgument(format!(
                "rotation angle {delta_theta} outside [0, pi]"
            )));
        }
        Ok(Self {
            levels,
            baths,
            delta_theta,
        })
    }

    pub fn delta_theta(&self) -> f64 {
        self.delta_theta
    }

    pub fn with_delta_theta(&self, delta_theta: f64) -> Result<Self> {
        Self::new(self.levels, self.baths, delta_theta)
    }

    pub fn thermal_state(&self) -> DensityMatrix3 {
        DensityMatrix3::diagonal(&gibbs_steady_state(&self.levels, &self.baths))
    }
}

/// Energy and entropy bookkeeping of one steady-state cycle.
///
/// `w > 0` means work extracted. Heats are positive into the particle.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CycleLedger {
    pub w: f64,
    pub q_c: f64,
    pub q_h: f64,
    pub ds_baths: f64,
    pub ds_acpt: f64,
    pub ds_dnr: f64,
    pub ds_tot: f64,
    pub c_extracted: f64,
    pub c_injected: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CycleMode {
    Bare,
    WithCe,
    /// CI from the given donor before the rotation, CE after it.
    WithCeCi(DensityMatrix3),
}

fn check_populations(engine: &DensityMatrix3, partner: &DensityMatrix3, tol: f64) -> Result<()> {
    let a = engine.populations().as_array();
    let b = partner.populations().as_array();
    for k in 0..3 {
        // relative, with a floor for nearly empty levels
        let scale = a[k].abs().max(b[k].abs()).max(1e-6);
        if (a[k] - b[k]).abs() > tol * scale {
            return Err(Error::PopulationMismatch {
                level: k + 1,
                engine: a[k],
                partner: b[k],
            });
        }
    }
    Ok(())
}

/// Full swap of the coherent engine particle with a diagonal acceptor.
///
/// Returns `(engine', acceptor', ds_acpt)` where `ds_acpt` is the entropy
/// change of the acceptor, `-C(engine)`.
pub fn coherence_extract(
    engine: &DensityMatrix3,
    acceptor: &DensityMatrix3,
    tol: f64,
) -> Result<(DensityMatrix3, DensityMatrix3, f64)> {
    if !acceptor.is_diagonal(DIAGONAL_TOL) {
        return Err(Error::InvalidAcceptor(format!(
            "acceptor carries coherence {:e}",
            acceptor.max_off_diagonal()
        )));
    }
    check_populations(engine, acceptor, tol)?;
    let ds_acpt = von_neumann_entropy(engine) - von_neumann_entropy(acceptor);
    Ok((acceptor.clone(), engine.clone(), ds_acpt))
}

/// Full swap of a diagonal engine particle with a coherent donor.
///
/// Returns `(engine', donor', ds_dnr)` where `ds_dnr = +C(donor)`.
pub fn coherence_inject(
    engine: &DensityMatrix3,
    donor: &DensityMatrix3,
    tol: f64,
) -> Result<(DensityMatrix3, DensityMatrix3, f64)> {
    if !engine.is_diagonal(DIAGONAL_TOL) {
        return Err(Error::InvalidAcceptor(format!(
            "engine particle must be incoherent before injection, carries {:e}",
            engine.max_off_diagonal()
        )));
    }
    check_populations(engine, donor, tol)?;
    let ds_dnr = von_neumann_entropy(engine) - von_neumann_entropy(donor);
    Ok((donor.clone(), engine.clone(), ds_dnr))
}

/// One steady-state cycle of `unit`.
pub fn run_cycle(unit: &EngineUnit, mode: &CycleMode) -> Result<CycleLedger> {
    let levels = &unit.levels;
    let thermal = unit.thermal_state();
    let mut ledger = CycleLedger::default();

    let start = match mode {
        CycleMode::WithCeCi(donor) => {
            let (engine, _, ds_dnr) = coherence_inject(&thermal, donor, POPULATION_TOL)?;
            ledger.ds_dnr = ds_dnr;
            ledger.c_injected = coherence_measure(donor);
            engine
        }
        CycleMode::Bare | CycleMode::WithCe => thermal,
    };

    let rho_w = apply_work_unitary(&start, unit.delta_theta);
    ledger.w = levels.energy(&start) - levels.energy(&rho_w);

    let before_bath = match mode {
        CycleMode::Bare => rho_w,
        CycleMode::WithCe | CycleMode::WithCeCi(_) => {
            let (engine, _, ds_acpt) = coherence_extract(&rho_w, &dephase(&rho_w), POPULATION_TOL)?;
            ledger.ds_acpt = ds_acpt;
            ledger.c_extracted = coherence_measure(&rho_w);
            engine
        }
    };

    let (_, heat) = thermal_stroke(&before_bath, levels, &unit.baths);
    ledger.q_c = heat.q_c;
    ledger.q_h = heat.q_h;
    ledger.ds_baths = heat.ds_baths;
    ledger.ds_tot = ledger.ds_baths + ledger.ds_acpt + ledger.ds_dnr;
    Ok(ledger)
}

/// Engine driven by injected coherence alone, with a single bath
/// temperature: CI from `donor`, rotation, then the baths erase whatever
/// coherence is left.
pub fn run_cycle_no_inversion(unit: &EngineUnit, donor: &DensityMatrix3) -> Result<CycleLedger> {
    if (unit.baths.t_c() - unit.baths.t_h()).abs() > 1e-12 * unit.baths.t_c() {
        return Err(Error::InvalidArgument(format!(
            "no-inversion engine needs equal bath temperatures, got ({}, {})",
            unit.baths.t_c(),
            unit.baths.t_h()
        )));
    }
    let levels = &unit.levels;
    let (start, _, ds_dnr) = coherence_inject(&unit.thermal_state(), donor, POPULATION_TOL)?;
    let rho_w = apply_work_unitary(&start, unit.delta_theta);
    let (_, heat) = thermal_stroke(&rho_w, levels, &unit.baths);
    Ok(CycleLedger {
        w: levels.energy(&start) - levels.energy(&rho_w),
        q_c: heat.q_c,
        q_h: heat.q_h,
        ds_baths: heat.ds_baths,
        ds_acpt: 0.0,
        ds_dnr,
        ds_tot: heat.ds_baths + ds_dnr,
        c_extracted: 0.0,
        c_injected: coherence_measure(donor),
    })
}

/// Entropy generated per unit of work, `ds_tot / w`.
pub fn entropy_pollution(ledger: &CycleLedger) -> Result<f64> {
    if ledger.w.abs() <= 1e-14 {
        return Err(Error::ZeroWork);
    }
    Ok(ledger.ds_tot / ledger.w)
}

/// Entropy pollution of an engine without CE or CI,
/// `(1/T_c)(eta_c - eta)/eta`. Independent of the rotation angle.
pub fn ep_closed_form_no_ce(levels: &LevelStructure, baths: &BathPair) -> Result<f64> {
    let eta = efficiency(levels);
    if eta <= 0.0 {
        return Err(Error::NotAnEngine(eta));
    }
    Ok((carnot_efficiency(baths) - eta) / eta / baths.t_c())
}

/// One point of the split-cycle experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitPoint {
    pub n: usize,
    /// Rotation per cycle that moves `1/n` of the reference population.
    pub theta: f64,
    pub w_total: f64,
    pub ds_total: f64,
    pub ep: f64,
}

/// Rotation angle that moves `1/n` of the population moved by `delta_theta`
/// from the north pole. Uses `(1 - cos t)/2 = sin^2(t/2)`.
pub fn split_angle(delta_theta: f64, n: usize) -> f64 {
    2.0 * ((delta_theta / 2.0).sin() / (n as f64).sqrt()).asin()
}

/// Produces the unit's per-cycle work in `n` cycles of smaller rotation,
/// each with coherence extraction.
pub fn split_cycle(unit: &EngineUnit, n: usize) -> Result<SplitPoint> {
    if n < 1 {
        return Err(Error::InvalidArgument("n_splits must be at least 1".into()));
    }
    let theta = split_angle(unit.delta_theta, n);
    let ledger = run_cycle(&unit.with_delta_theta(theta)?, &CycleMode::WithCe)?;
    let w_total = n as f64 * ledger.w;
    let ds_total = n as f64 * ledger.ds_tot;
    if w_total.abs() <= 1e-14 {
        return Err(Error::ZeroWork);
    }
    Ok(SplitPoint {
        n,
        theta,
        w_total,
        ds_total,
        ep: ds_total / w_total,
    })
}

pub fn split_cycle_experiment(unit: &EngineUnit, splits: &[usize]) -> Result<Vec<SplitPoint>> {
    splits.iter().map(|&n| split_cycle(unit, n)).collect()
}
