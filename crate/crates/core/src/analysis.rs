//! Standalone baselines, work-boost and pollution curves, and scaling fits.
//!
//! Two standalone references are compared against the collective machine,
//! both restricted to bath temperatures the collective already uses:
//!
//! * SWO: `N` copies of unit 1, the unit with the most standalone work.
//! * SEPO: `N` copies of unit `ceil(N/2)`, the unit with the lowest
//!   standalone entropy pollution.

use std::fmt;
use std::str::FromStr;

use crate::collective::{
    build_omega_pi_schedule, run_collective_cycle, saturated_work, swo_work, units_per_half_turn,
    CollectiveSchedule,
};
use crate::engine::{entropy_pollution, run_cycle, CycleMode, EngineUnit};
use crate::error::{Error, Result};
use crate::table::SweepTable;
use crate::thermal::{gibbs_steady_state, BathPair, LevelStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    Swo,
    Sepo,
}

impl FromStr for Baseline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "swo" => Ok(Baseline::Swo),
            "sepo" => Ok(Baseline::Sepo),
            other => Err(Error::InvalidArgument(format!("unknown baseline '{other}'"))),
        }
    }
}

impl fmt::Display for Baseline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Baseline::Swo => "swo",
            Baseline::Sepo => "sepo",
        })
    }
}

/// A standalone unit used as a comparison reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandaloneReference {
    /// 1-based index of the unit in the collective schedule.
    pub unit_index: usize,
    /// Work of one copy per cycle.
    pub w_unit: f64,
    pub ep: f64,
}

fn standalone(schedule: &CollectiveSchedule, unit_index: usize) -> Result<StandaloneReference> {
    let u = &schedule.units[unit_index - 1];
    let unit = EngineUnit::new(schedule.levels, u.baths, schedule.delta_theta)?;
    let ledger = run_cycle(&unit, &CycleMode::Bare)?;
    Ok(StandaloneReference {
        unit_index,
        w_unit: ledger.w,
        ep: entropy_pollution(&ledger)?,
    })
}

/// Unit 1 run standalone with the schedule's rotation.
pub fn swo_reference(schedule: &CollectiveSchedule) -> Result<StandaloneReference> {
    standalone(schedule, 1)
}

/// Unit `ceil(N/2)` of an `omega = pi` schedule run standalone.
pub fn sepo_reference(schedule: &CollectiveSchedule) -> Result<StandaloneReference> {
    if !schedule.is_omega_pi() {
        return Err(Error::WrongOmega(schedule.omega));
    }
    if schedule.n_units < 2 {
        return Err(Error::InvalidArgument(
            "SEPO reference needs at least two units".into(),
        ));
    }
    standalone(schedule, schedule.n_units.div_ceil(2))
}

/// Work per entropy pollution; `+inf` in the reversible limit `ep <= 0`.
pub fn w_over_ep(w: f64, ep: f64) -> f64 {
    if ep <= 0.0 {
        f64::INFINITY
    } else {
        w / ep
    }
}

/// Collective-vs-baseline pollution ratio for `omega = pi` machines.
///
/// Columns: `n, ep_coll, ep_baseline, ratio`.
pub fn ep_ratio_curve(
    levels: &LevelStructure,
    base_baths: &BathPair,
    ns: &[usize],
    baseline: Baseline,
) -> Result<SweepTable> {
    let mut table = SweepTable::new(["n", "ep_coll", "ep_baseline", "ratio"]);
    table.set_meta("baseline", baseline);
    for &n in ns {
        let schedule = build_omega_pi_schedule(levels, base_baths, n)?;
        let run = run_collective_cycle(&schedule)?;
        let ep_coll = run.ep.ok_or(Error::ZeroWork)?;
        let reference = match baseline {
            Baseline::Swo => swo_reference(&schedule)?,
            Baseline::Sepo => sepo_reference(&schedule)?,
        };
        table.push_row(vec![
            n.into(),
            ep_coll.into(),
            reference.ep.into(),
            (ep_coll / reference.ep).into(),
        ])?;
    }
    Ok(table)
}

/// Work of the grouped collective machine against standalone copies of
/// unit 1, at fixed rotation per unit.
///
/// Columns: `n, w_coll, w_swo, n_w1_swo, boost` where `boost = w_coll / w1_swo`
/// and `w1_swo` is one standalone copy of unit 1 (simulated).
pub fn boost_curve(
    levels: &LevelStructure,
    base_baths: &BathPair,
    delta_theta: f64,
    ns: &[usize],
) -> Result<SweepTable> {
    let m = units_per_half_turn(delta_theta);
    let dp0 = gibbs_steady_state(levels, base_baths).inversion();
    let w1 = run_cycle(
        &EngineUnit::new(*levels, *base_baths, delta_theta)?,
        &CycleMode::Bare,
    )?
    .w;
    if w1.abs() <= 1e-14 {
        return Err(Error::ZeroWork);
    }
    let mut table = SweepTable::new(["n", "w_coll", "w_swo", "n_w1_swo", "boost"]);
    table.set_meta("delta_theta", crate::table::format_real(delta_theta));
    table.set_meta("m", m);
    table.set_meta("w1_swo", crate::table::format_real(w1));
    table.set_meta(
        "boosted_linear_slope",
        crate::table::format_real(4.0 * m as f64 / std::f64::consts::PI.powi(2)),
    );
    for &n in ns {
        let w_coll = saturated_work(levels, dp0, n, m, delta_theta)?;
        table.push_row(vec![
            n.into(),
            w_coll.into(),
            swo_work(levels, dp0, n, delta_theta).into(),
            (n as f64 * w1).into(),
            (w_coll / w1).into(),
        ])?;
    }
    Ok(table)
}

/// Work, pollution and the W/EP figure of merit of the `omega = pi` machine
/// and both standalone baselines (each `N` copies of the reference unit).
///
/// Columns: `n, w_coll, ep_coll, w_swo, ep_swo, w_sepo, ep_sepo,
/// merit_gain_swo, merit_gain_sepo`. SEPO columns need `n >= 2`.
pub fn merit_curve(
    levels: &LevelStructure,
    base_baths: &BathPair,
    ns: &[usize],
) -> Result<SweepTable> {
    let mut table = SweepTable::new([
        "n",
        "w_coll",
        "ep_coll",
        "w_swo",
        "ep_swo",
        "w_sepo",
        "ep_sepo",
        "merit_gain_swo",
        "merit_gain_sepo",
    ]);
    for &n in ns {
        let schedule = build_omega_pi_schedule(levels, base_baths, n)?;
        let run = run_collective_cycle(&schedule)?;
        let ep_coll = run.ep.ok_or(Error::ZeroWork)?;
        let merit_coll = w_over_ep(run.total_w, ep_coll);
        let swo = swo_reference(&schedule)?;
        let sepo = sepo_reference(&schedule)?;
        let nf = n as f64;
        let (w_swo, w_sepo) = (nf * swo.w_unit, nf * sepo.w_unit);
        table.push_row(vec![
            n.into(),
            run.total_w.into(),
            ep_coll.into(),
            w_swo.into(),
            swo.ep.into(),
            w_sepo.into(),
            sepo.ep.into(),
            (merit_coll / w_over_ep(w_swo, swo.ep)).into(),
            (merit_coll / w_over_ep(w_sepo, sepo.ep)).into(),
        ])?;
    }
    Ok(table)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::InvalidArgument(
            "need at least three (x, y) pairs".into(),
        ));
    }
    if xs.iter().chain(ys).any(|&v| v <= 0.0 || !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "log-log fit needs strictly positive finite values".into(),
        ));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("x values are all equal".into()));
    }
    Ok(sxy / sxx)
}

/// Fit of `y = c * x^exponent` with the exponent held fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub prefactor: f64,
    /// Largest `|y / (c x^k) - 1|` over the data.
    pub max_rel_dev: f64,
}

/// Least squares in log space: `ln c` is the mean of `ln y - k ln x`.
pub fn fit_power_law(xs: &[f64], ys: &[f64], exponent: f64) -> Result<PowerLawFit> {
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(Error::InvalidArgument("empty or ragged data".into()));
    }
    if xs.iter().chain(ys).any(|&v| v <= 0.0 || !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "power-law fit needs strictly positive finite values".into(),
        ));
    }
    let ln_c = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| y.ln() - exponent * x.ln())
        .sum::<f64>()
        / xs.len() as f64;
    let c = ln_c.exp();
    let max_rel_dev = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y / (c * x.powf(exponent)) - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(PowerLawFit {
        prefactor: c,
        max_rel_dev,
    })
}

/// `[start, 2 start, 4 start, ...]` up to and including `stop`.
pub fn dyadic(start: usize, stop: usize) -> Vec<usize> {
    std::iter::successors(Some(start.max(1)), |&n| Some(n * 2))
        .take_while(|&n| n <= stop)
        .collect()
}
