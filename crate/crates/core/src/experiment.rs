//! Runs a configured experiment and returns its result table.

use crate::analysis::{boost_curve, ep_ratio_curve, merit_curve};
use crate::collective::{
    build_omega_pi_schedule, build_schedule, collective_work_closed_form, run_collective_cycle,
    CollectiveSchedule,
};
use crate::config::{ExperimentConfig, ExperimentKind};
use crate::engine::{
    entropy_pollution, ep_closed_form_no_ce, run_cycle, run_cycle_no_inversion, split_cycle,
    CycleMode, EngineUnit,
};
use crate::error::Result;
use crate::qutrit::{from_bloch, BlochVector23};
use crate::table::{format_real, Cell, SweepTable};
use crate::thermal::gibbs_steady_state;

/// Donor coherence as a fraction of the largest Bloch `y` the populations allow.
pub const NO_INVERSION_FRACTIONS: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<SweepTable> {
    let mut table = match cfg.experiment {
        ExperimentKind::Single => single(cfg)?,
        ExperimentKind::Collective => {
            let schedule = build_schedule(&cfg.levels()?, &cfg.baths()?, cfg.n, cfg.delta_theta)?;
            collective_table(&schedule)?
        }
        ExperimentKind::OmegaPi => {
            let schedule = build_omega_pi_schedule(&cfg.levels()?, &cfg.baths()?, cfg.n)?;
            collective_table(&schedule)?
        }
        ExperimentKind::BoostCurve => {
            boost_curve(&cfg.levels()?, &cfg.baths()?, cfg.delta_theta, &cfg.n_list)?
        }
        ExperimentKind::EpScaling => merit_curve(&cfg.levels()?, &cfg.baths()?, &cfg.n_list)?,
        ExperimentKind::EpRatio => {
            ep_ratio_curve(&cfg.levels()?, &cfg.baths()?, &cfg.n_list, cfg.baseline)?
        }
        ExperimentKind::SplitCycle => split(cfg)?,
        ExperimentKind::NoInversion => no_inversion(cfg)?,
    };
    table.prepend_meta(cfg.echo());
    Ok(table)
}

fn single(cfg: &ExperimentConfig) -> Result<SweepTable> {
    let (levels, baths) = (cfg.levels()?, cfg.baths()?);
    let unit = EngineUnit::new(levels, baths, cfg.delta_theta)?;
    let mut table = SweepTable::new([
        "with_ce",
        "w",
        "q_h",
        "q_c",
        "ds_baths",
        "ds_acpt",
        "ds_tot",
        "c_extracted",
        "ep",
    ]);
    table.set_meta("ep_closed_form_bare", format_real(ep_closed_form_no_ce(&levels, &baths)?));
    for (flag, mode) in [(0usize, CycleMode::Bare), (1, CycleMode::WithCe)] {
        let l = run_cycle(&unit, &mode)?;
        let ep = entropy_pollution(&l)?;
        table.push_row(vec![
            flag.into(),
            l.w.into(),
            l.q_h.into(),
            l.q_c.into(),
            l.ds_baths.into(),
            l.ds_acpt.into(),
            l.ds_tot.into(),
            l.c_extracted.into(),
            ep.into(),
        ])?;
    }
    Ok(table)
}

/// Per-unit ledgers plus a totals row with `unit = 0`.
///
/// In the totals row `theta_start` holds the collective angle and the
/// temperature columns are `nan`.
pub fn collective_table(schedule: &CollectiveSchedule) -> Result<SweepTable> {
    let run = run_collective_cycle(schedule)?;
    let mut table = SweepTable::new([
        "unit",
        "theta_start",
        "t_c",
        "t_h",
        "w",
        "q_h",
        "q_c",
        "ds_baths",
        "ds_acpt",
        "ds_dnr",
        "ds_tot",
        "c_injected",
        "c_extracted",
        "d_rel",
    ]);
    table.set_meta(
        "w_closed_form",
        format_real(collective_work_closed_form(
            &schedule.levels,
            schedule.dp0,
            schedule.omega,
        )),
    );
    table.set_meta("total_ds", format_real(run.total_ds));
    table.set_meta("ep", run.ep.map_or("nan".into(), format_real));

    let mut sums = [0.0f64; 10];
    for (k, (unit, l)) in schedule.units.iter().zip(&run.per_unit_ledgers).enumerate() {
        let d_rel = schedule.unit_relative_entropy(k + 1);
        let values = [
            l.w,
            l.q_h,
            l.q_c,
            l.ds_baths,
            l.ds_acpt,
            l.ds_dnr,
            l.ds_tot,
            l.c_injected,
            l.c_extracted,
            d_rel,
        ];
        for (s, v) in sums.iter_mut().zip(values) {
            *s += v;
        }
        let mut row: Vec<Cell> = vec![
            (k + 1).into(),
            unit.theta_start.into(),
            unit.baths.t_c().into(),
            unit.baths.t_h().into(),
        ];
        row.extend(values.map(Cell::from));
        table.push_row(row)?;
    }
    let mut totals: Vec<Cell> = vec![
        0usize.into(),
        schedule.omega.into(),
        f64::NAN.into(),
        f64::NAN.into(),
    ];
    totals.extend(sums.map(Cell::from));
    table.push_row(totals)?;
    Ok(table)
}

fn split(cfg: &ExperimentConfig) -> Result<SweepTable> {
    let (levels, baths) = (cfg.levels()?, cfg.baths()?);
    let unit = EngineUnit::new(levels, baths, cfg.delta_theta)?;
    let mut table = SweepTable::new(["n", "theta", "w_total", "ds_total", "ep", "ep_bare"]);
    table.set_meta("ep_closed_form_bare", format_real(ep_closed_form_no_ce(&levels, &baths)?));
    for &n in &cfg.n_list {
        let p = split_cycle(&unit, n)?;
        let bare = run_cycle(&unit.with_delta_theta(p.theta)?, &CycleMode::Bare)?;
        table.push_row(vec![
            n.into(),
            p.theta.into(),
            p.w_total.into(),
            p.ds_total.into(),
            p.ep.into(),
            entropy_pollution(&bare)?.into(),
        ])?;
    }
    Ok(table)
}

fn no_inversion(cfg: &ExperimentConfig) -> Result<SweepTable> {
    let (levels, baths) = (cfg.levels()?, cfg.baths()?);
    let unit = EngineUnit::new(levels, baths, cfg.delta_theta)?;
    let p = gibbs_steady_state(&levels, &baths);
    let s = p.p2() + p.p3();
    let z = p.p3() - p.p2();
    let y_max = (s * s - z * z).max(0.0).sqrt();
    let mut table = SweepTable::new([
        "coherence_fraction",
        "c_injected",
        "w",
        "q_h",
        "q_c",
        "efficiency",
        "ds_baths",
        "ds_dnr",
        "ds_tot",
    ]);
    for f in NO_INVERSION_FRACTIONS {
        let donor = from_bloch(p.p1(), BlochVector23::new(f * y_max, z), s)?;
        let l = run_cycle_no_inversion(&unit, &donor)?;
        let eff = if l.q_h != 0.0 { l.w / l.q_h } else { f64::NAN };
        table.push_row(vec![
            f.into(),
            l.c_injected.into(),
            l.w.into(),
            l.q_h.into(),
            l.q_c.into(),
            eff.into(),
            l.ds_baths.into(),
            l.ds_dnr.into(),
            l.ds_tot.into(),
        ])?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use approx::assert_relative_eq;

    fn run(text: &str) -> SweepTable {
        run_experiment(&parse_config(text).unwrap()).unwrap()
    }

    #[test]
    fn every_experiment_runs_with_defaults() {
        for kind in ExperimentKind::ALL {
            let list = match kind {
                ExperimentKind::BoostCurve
                | ExperimentKind::EpScaling
                | ExperimentKind::EpRatio
                | ExperimentKind::SplitCycle => "\nn_list=2:6",
                _ => "",
            };
            let t = run(&format!("experiment={kind}{list}"));
            assert!(!t.is_empty(), "{kind}");
            assert_eq!(t.meta("experiment"), Some(kind.name()));
        }
    }

    #[test]
    fn collective_totals_row_matches_closed_form() {
        let t = run("experiment=collective\nn=10\nomega=pi/2");
        assert_eq!(t.len(), 11);
        let units = t.column("unit").unwrap();
        let w = t.column("w").unwrap();
        assert_eq!(units[10], 0.0);
        let closed: f64 = t.meta("w_closed_form").unwrap().parse().unwrap();
        assert_relative_eq!(w[10], closed, max_relative = 1e-10);
        assert_relative_eq!(w[..10].iter().sum::<f64>(), closed, max_relative = 1e-10);
    }

    #[test]
    fn csv_is_deterministic() {
        let a = run("experiment=omega-pi\nn=12").to_csv();
        let b = run("experiment=omega-pi\nn=12").to_csv();
        assert_eq!(a, b);
        assert!(a.starts_with("# experiment=omega-pi\n"));
    }

    #[test]
    fn no_inversion_sign_follows_donor() {
        let t = run("experiment=no-inversion");
        let f = t.column("coherence_fraction").unwrap();
        let w = t.column("w").unwrap();
        for (f, w) in f.iter().zip(&w) {
            if *f > 0.0 {
                assert!(*w > 0.0);
            } else {
                assert!(*w < 0.0);
            }
        }
    }

    #[test]
    fn split_cycle_bare_pollution_is_flat() {
        let t = run("experiment=split-cycle\nn_list=1,4,16");
        let closed: f64 = t.meta("ep_closed_form_bare").unwrap().parse().unwrap();
        for ep in t.column("ep_bare").unwrap() {
            assert_relative_eq!(ep, closed, max_relative = 1e-9);
        }
    }
}
