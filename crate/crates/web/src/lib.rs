//! wasm-bindgen exports for the static demo page in `www/`.
//!
//! Each export is a thin wrapper over a plain function that the native
//! tests exercise.

use coherent_engine::analysis::{ep_ratio_curve, Baseline};
use coherent_engine::collective::{
    build_omega_pi_schedule, run_collective_cycle, saturated_work, units_per_half_turn,
};
use coherent_engine::engine::{run_cycle, CycleMode, EngineUnit};
use coherent_engine::thermal::gibbs_steady_state;
use coherent_engine::{BathPair, LevelStructure};
use wasm_bindgen::prelude::*;

fn setup(delta_e_c: f64, delta_e_h: f64, t_c: f64, t_h: f64) -> Result<(LevelStructure, BathPair), String> {
    let levels = LevelStructure::new(delta_e_c, delta_e_h).map_err(|e| e.to_string())?;
    let baths = BathPair::new(t_c, t_h).map_err(|e| e.to_string())?;
    Ok((levels, baths))
}

/// `W_coll(N) / W_1` for `N = 1..=n_max`, where `W_1` is one standalone unit.
pub fn boost_values(
    delta_e_c: f64,
    delta_e_h: f64,
    t_c: f64,
    t_h: f64,
    delta_theta: f64,
    n_max: usize,
) -> Result<Vec<f64>, String> {
    let (levels, baths) = setup(delta_e_c, delta_e_h, t_c, t_h)?;
    let unit = EngineUnit::new(levels, baths, delta_theta).map_err(|e| e.to_string())?;
    let w1 = run_cycle(&unit, &CycleMode::Bare).map_err(|e| e.to_string())?.w;
    if w1 <= 0.0 || w1.is_nan() {
        return Err("a single unit produces no work with these parameters".into());
    }
    let dp0 = gibbs_steady_state(&levels, &baths).inversion();
    let m = units_per_half_turn(delta_theta);
    (1..=n_max)
        .map(|n| {
            saturated_work(&levels, dp0, n, m, delta_theta)
                .map(|w| w / w1)
                .map_err(|e| e.to_string())
        })
        .collect()
}

/// Bath entropy change of each unit of the `omega = pi` machine.
pub fn unit_entropy_values(
    delta_e_c: f64,
    delta_e_h: f64,
    t_c: f64,
    t_h: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    let (levels, baths) = setup(delta_e_c, delta_e_h, t_c, t_h)?;
    let schedule = build_omega_pi_schedule(&levels, &baths, n).map_err(|e| e.to_string())?;
    let run = run_collective_cycle(&schedule).map_err(|e| e.to_string())?;
    Ok(run.per_unit_ledgers.iter().map(|l| l.ds_baths).collect())
}

/// `EP_coll / EP_baseline` for `N = 2..=n_max`.
pub fn ep_ratio_values(
    delta_e_c: f64,
    delta_e_h: f64,
    t_c: f64,
    t_h: f64,
    n_max: usize,
    baseline: &str,
) -> Result<Vec<f64>, String> {
    let (levels, baths) = setup(delta_e_c, delta_e_h, t_c, t_h)?;
    let baseline: Baseline = baseline.parse().map_err(|_| format!("unknown baseline '{baseline}'"))?;
    let ns: Vec<usize> = (2..=n_max).collect();
    let table = ep_ratio_curve(&levels, &baths, &ns, baseline).map_err(|e| e.to_string())?;
    Ok(table.column("ratio").unwrap_or_default())
}

#[wasm_bindgen]
pub fn boost_curve(
    delta_e_c: f64,
    delta_e_h: f64,
    t_c: f64,
    t_h: f64,
    delta_theta: f64,
    n_max: usize,
) -> Result<Vec<f64>, JsError> {
    boost_values(delta_e_c, delta_e_h, t_c, t_h, delta_theta, n_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn half_turn_units(delta_theta: f64) -> usize {
    units_per_half_turn(delta_theta)
}

#[wasm_bindgen]
pub fn unit_entropy_profile(
    delta_e_c: f64,
    delta_e_h: f64,
    t_c: f64,
    t_h: f64,
    n: usize,
) -> Result<Vec<f64>, JsError> {
    unit_entropy_values(delta_e_c, delta_e_h, t_c, t_h, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn ep_ratio(
    delta_e_c: f64,
    delta_e_h: f64,
    t_c: f64,
    t_h: f64,
    n_max: usize,
    baseline: &str,
) -> Result<Vec<f64>, JsError> {
    ep_ratio_values(delta_e_c, delta_e_h, t_c, t_h, n_max, baseline).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn boost_is_quadratic_then_linear() {
        let b = boost_values(1.0, 2.0, 0.5, 5.0, PI / 20.0, 100).unwrap();
        assert_eq!(b.len(), 100);
        assert!((b[0] - 1.0).abs() < 1e-12);
        // complete groups add the same amount each
        let step = b[59] - b[39];
        assert!((step - (b[39] - b[19])).abs() < 1e-9);
    }

    #[test]
    fn entropy_profile_changes_sign_at_the_equator() {
        let ds = unit_entropy_values(1.0, 2.0, 0.5, 5.0, 20).unwrap();
        assert_eq!(ds.len(), 20);
        assert!(ds[..10].iter().all(|&d| d > 0.0));
        assert!(ds[11..].iter().all(|&d| d < 0.0));
    }

    #[test]
    fn ep_ratio_covers_two_to_n_max() {
        let r = ep_ratio_values(1.0, 2.0, 1.0, 5.0, 20, "sepo").unwrap();
        assert_eq!(r.len(), 19);
        assert!(r.iter().all(|&x| x < 1.0));
        assert!(ep_ratio_values(1.0, 2.0, 1.0, 5.0, 20, "best").is_err());
    }

    #[test]
    fn bad_parameters_are_reported() {
        assert!(boost_values(2.0, 1.0, 0.5, 5.0, 0.1, 10).is_err());
        assert!(unit_entropy_values(1.0, 2.0, -1.0, 5.0, 10).is_err());
        // Carnot point: no work
        assert!(boost_values(1.0, 2.0, 2.5, 5.0, 0.1, 10).is_err());
    }
}
