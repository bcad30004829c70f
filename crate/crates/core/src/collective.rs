//! The collective machine: `N` units in a pipeline, each handing its
//! post-rotation particle to the next unit by a full swap.
//!
//! The swap is CE for the giving unit and CI for the receiving one. Unit
//! `i + 1` has its baths tuned so that its thermal state has exactly the
//! populations unit `i` produces, so the swap exchanges no energy. Seen from
//! the particle, one state travels down the line and accumulates a rotation
//! `omega = N * delta_theta`.

use std::f64::consts::PI;

use crate::engine::{coherence_extract, coherence_inject, CycleLedger, POPULATION_TOL};
use crate::error::{Error, Result};
use crate::qutrit::{apply_work_unitary, coherence_measure, kl_divergence, DensityMatrix3, ProbVector3};
use crate::thermal::{
    gibbs_steady_state, temperatures_from_populations, thermal_stroke, BathPair, LevelStructure,
};

/// Tolerance on `omega == pi` for the symmetric machine.
pub const OMEGA_PI_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct UnitSchedule {
    /// Bloch angle of this unit's thermal state.
    pub theta_start: f64,
    pub p_eq: ProbVector3,
    pub baths: BathPair,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveSchedule {
    pub n_units: usize,
    pub delta_theta: f64,
    pub omega: f64,
    pub levels: LevelStructure,
    pub base_baths: BathPair,
    pub units: Vec<UnitSchedule>,
    /// Ground population shared by every unit.
    pub invariant_p1: f64,
    /// Excited-pair weight `p2 + p3` shared by every unit.
    pub invariant_s: f64,
    /// Population inversion of unit 1.
    pub dp0: f64,
}

impl CollectiveSchedule {
    /// Populations on the circle of constant Bloch radius at angle `theta`.
    pub fn populations_at(&self, theta: f64) -> ProbVector3 {
        let (s, dp0) = (self.invariant_s, self.dp0);
        let p2 = (s - dp0 * theta.cos()) / 2.0;
        let p3 = (s + dp0 * theta.cos()) / 2.0;
        ProbVector3::new(1.0 - p2 - p3, p2, p3)
            .expect("rotation preserves the excited-pair weight")
    }

    /// Populations after unit `i` (1-based) has rotated; for `i < N` this
    /// is the thermal state of unit `i + 1`.
    pub fn populations_after(&self, i: usize) -> ProbVector3 {
        if i < self.n_units {
            self.units[i].p_eq
        } else {
            self.populations_at(self.n_units as f64 * self.delta_theta)
        }
    }

    pub fn is_omega_pi(&self) -> bool {
        (self.omega - PI).abs() <= OMEGA_PI_TOL
    }

    /// `D(p_w,i || p_eq,i)` for unit `i` (1-based).
    pub fn unit_relative_entropy(&self, i: usize) -> f64 {
        kl_divergence(&self.populations_after(i), &self.units[i - 1].p_eq)
            .expect("scheduled populations are strictly positive")
    }
}

/// Schedule of `n_units` units with rotation `delta_theta` each, unit 1
/// attached to `base_baths`.
pub fn build_schedule(
    levels: &LevelStructure,
    base_baths: &BathPair,
    n_units: usize,
    delta_theta: f64,
) -> Result<CollectiveSchedule> {
    if n_units < 1 {
        return Err(Error::InvalidArgument("need at least one unit".into()));
    }
    if delta_theta <= 0.0 || !delta_theta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "rotation angle must be positive, got {delta_theta}"
        )));
    }
    let omega = n_units as f64 * delta_theta;
    if omega > PI + OMEGA_PI_TOL {
        return Err(Error::InvalidArgument(format!(
            "collective angle {omega} exceeds pi; split the units into groups"
        )));
    }
    let p_base = gibbs_steady_state(levels, base_baths);
    let mut schedule = CollectiveSchedule {
        n_units,
        delta_theta,
        omega,
        levels: *levels,
        base_baths: *base_baths,
        units: Vec::with_capacity(n_units),
        invariant_p1: p_base.p1(),
        invariant_s: p_base.p2() + p_base.p3(),
        dp0: p_base.inversion(),
    };
    schedule.units.push(UnitSchedule {
        theta_start: 0.0,
        p_eq: p_base,
        baths: *base_baths,
    });
    for i in 1..n_units {
        let theta = i as f64 * delta_theta;
        let p_eq = schedule.populations_at(theta);
        let baths = temperatures_from_populations(levels, &p_eq)?;
        schedule.units.push(UnitSchedule {
            theta_start: theta,
            p_eq,
            baths,
        });
    }
    Ok(schedule)
}

/// The `omega = pi` machine of `n_units` units.
pub fn build_omega_pi_schedule(
    levels: &LevelStructure,
    base_baths: &BathPair,
    n_units: usize,
) -> Result<CollectiveSchedule> {
    if n_units < 1 {
        return Err(Error::InvalidArgument("need at least one unit".into()));
    }
    let mut s = build_schedule(levels, base_baths, n_units, PI / n_units as f64)?;
    s.omega = PI;
    Ok(s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveRunResult {
    /// Per-unit ledgers. `ds_acpt`/`ds_dnr` hold the entropy changes of the
    /// neighbouring units' particles during the swaps; they cancel across the
    /// pipeline.
    pub per_unit_ledgers: Vec<CycleLedger>,
    pub total_w: f64,
    pub total_q_h: f64,
    pub total_q_c: f64,
    /// Entropy produced in all baths; nothing else changes entropy.
    pub total_ds: f64,
    /// `total_ds / total_w`, `None` when no work is produced.
    pub ep: Option<f64>,
}

/// Simulates one steady-state cycle of the whole pipeline.
pub fn run_collective_cycle(schedule: &CollectiveSchedule) -> Result<CollectiveRunResult> {
    let levels = &schedule.levels;
    let n = schedule.n_units;
    let mut ledgers = Vec::with_capacity(n);
    let mut traveling: Option<DensityMatrix3> = None;

    for (idx, unit) in schedule.units.iter().enumerate() {
        let mut ledger = CycleLedger::default();
        let thermal = DensityMatrix3::diagonal(&unit.p_eq);

        let start = match traveling.take() {
            Some(donor) => {
                let (engine, _, ds_dnr) = coherence_inject(&thermal, &donor, POPULATION_TOL)?;
                ledger.ds_dnr = ds_dnr;
                ledger.c_injected = coherence_measure(&donor);
                engine
            }
            None => thermal,
        };

        let rho_w = apply_work_unitary(&start, schedule.delta_theta);
        ledger.w = levels.energy(&start) - levels.energy(&rho_w);

        let before_bath = if idx + 1 < n {
            let acceptor = DensityMatrix3::diagonal(&schedule.units[idx + 1].p_eq);
            let (engine, handed_on, ds_acpt) =
                coherence_extract(&rho_w, &acceptor, POPULATION_TOL)?;
            ledger.ds_acpt = ds_acpt;
            ledger.c_extracted = coherence_measure(&rho_w);
            traveling = Some(handed_on);
            engine
        } else {
            rho_w
        };

        let (_, heat) = thermal_stroke(&before_bath, levels, &unit.baths);
        ledger.q_c = heat.q_c;
        ledger.q_h = heat.q_h;
        ledger.ds_baths = heat.ds_baths;
        ledger.ds_tot = ledger.ds_baths + ledger.ds_acpt + ledger.ds_dnr;
        ledgers.push(ledger);
    }

    let total_w: f64 = ledgers.iter().map(|l| l.w).sum();
    let total_ds: f64 = ledgers.iter().map(|l| l.ds_baths).sum();
    Ok(CollectiveRunResult {
        total_q_h: ledgers.iter().map(|l| l.q_h).sum(),
        total_q_c: ledgers.iter().map(|l| l.q_c).sum(),
        ep: (total_w.abs() > 1e-14).then(|| total_ds / total_w),
        total_w,
        total_ds,
        per_unit_ledgers: ledgers,
    })
}

/// `(E_h - E_c) dp0 sin^2(omega/2)`.
pub fn collective_work_closed_form(levels: &LevelStructure, dp0: f64, omega: f64) -> f64 {
    levels.work_gap() * dp0 * (omega / 2.0).sin().powi(2)
}

/// Work of `n_units` independent copies of unit 1, each rotating by
/// `delta_theta`.
pub fn swo_work(levels: &LevelStructure, dp0: f64, n_units: usize, delta_theta: f64) -> f64 {
    n_units as f64 * levels.work_gap() * dp0 * (delta_theta / 2.0).sin().powi(2)
}

/// Number of units whose rotations add up to half a turn.
pub fn units_per_half_turn(delta_theta: f64) -> usize {
    (PI / delta_theta).round() as usize
}

/// Work of `n_units` units split into complete groups of `m_units` (each a
/// `pi` machine) plus one incomplete group.
pub fn saturated_work(
    levels: &LevelStructure,
    dp0: f64,
    n_units: usize,
    m_units: usize,
    delta_theta: f64,
) -> Result<f64> {
    if m_units < 1 {
        return Err(Error::InvalidArgument("group size must be at least 1".into()));
    }
    let full = (n_units / m_units) as f64;
    let rem = (n_units % m_units) as f64;
    Ok(levels.work_gap() * dp0 * (full + (rem * delta_theta / 2.0).sin().powi(2)))
}

/// Bath entropy of a mirror pair of units in the `omega = pi` machine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairResidual {
    pub i: usize,
    pub mirror: usize,
    /// `ds_baths,i + ds_baths,N+1-i` from the simulated heats.
    pub residual: f64,
    /// `D_i + D_{N+1-i}` from the schedule populations; `None` for the
    /// middle unit of an odd pipeline, which pairs with itself.
    pub relative_entropy_sum: Option<f64>,
}

/// Pairs unit `i` (1-based) with its mirror `N + 1 - i`. The middle unit of
/// an odd pipeline pairs with itself and reports twice its own bath entropy.
pub fn pairwise_residual(
    result: &CollectiveRunResult,
    schedule: &CollectiveSchedule,
    i: usize,
) -> Result<PairResidual> {
    let n = schedule.n_units;
    if !schedule.is_omega_pi() {
        return Err(Error::WrongOmega(schedule.omega));
    }
    if i < 1 || i > n || result.per_unit_ledgers.len() != n {
        return Err(Error::IndexOutOfRange { index: i, n_units: n });
    }
    let mirror = n + 1 - i;
    let ds = |k: usize| result.per_unit_ledgers[k - 1].ds_baths;
    let residual = ds(i) + ds(mirror);
    let relative_entropy_sum = (mirror != i)
        .then(|| schedule.unit_relative_entropy(i) + schedule.unit_relative_entropy(mirror));
    Ok(PairResidual {
        i,
        mirror,
        residual,
        relative_entropy_sum,
    })
}

/// Total entropy production of the `omega = pi` machine,
/// `sum_i D(p_eq^(i+1) || p_eq^(i))`, computed from the schedule alone.
pub fn omega_pi_total_entropy(schedule: &CollectiveSchedule) -> Result<f64> {
    if !schedule.is_omega_pi() {
        return Err(Error::WrongOmega(schedule.omega));
    }
    Ok((1..=schedule.n_units)
        .map(|i| schedule.unit_relative_entropy(i))
        .sum())
}
