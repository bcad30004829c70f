//! Randomized invariant suite behind the `selftest` command.
//!
//! Every check draws from a fixed-seed ChaCha stream, so a run is
//! reproducible bit for bit.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::collective::{
    build_omega_pi_schedule, build_schedule, collective_work_closed_form, omega_pi_total_entropy,
    run_collective_cycle,
};
use crate::config::parse_config;
use crate::engine::{run_cycle, CycleMode, EngineUnit};
use crate::error::{Error, Result};
use crate::experiment::run_experiment;
use crate::qutrit::{
    apply_work_unitary, coherence_measure, dephase, from_bloch, kl_divergence, relative_entropy,
    von_neumann_entropy, BlochVector23, DensityMatrix3, ProbVector3,
};
use crate::thermal::{
    gibbs_steady_state, temperatures_from_populations, BathPair, LevelStructure,
};

pub const SEED: u64 = 0x5eed_c0de;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Largest deviation seen, or a short note.
    pub detail: String,
}

/// Levels and baths inside the engine regime.
pub fn random_engine<R: Rng>(rng: &mut R) -> (LevelStructure, BathPair) {
    loop {
        let dec = rng.random_range(0.2..2.0);
        let deh = dec + rng.random_range(0.2..3.0);
        let t_c = rng.random_range(0.1..3.0);
        let t_h = rng.random_range(0.1..10.0);
        if dec / deh > t_c / t_h {
            let levels = LevelStructure::new(dec, deh).expect("ordered levels");
            let baths = BathPair::new(t_c, t_h).expect("positive temperatures");
            return (levels, baths);
        }
    }
}

/// A state with the populations of `p` and random excited-pair coherence.
pub fn random_matched_state<R: Rng>(rng: &mut R, p: &ProbVector3) -> DensityMatrix3 {
    let s = p.p2() + p.p3();
    let z = p.p3() - p.p2();
    let y_max = (s * s - z * z).max(0.0).sqrt();
    let y = rng.random_range(-1.0..=1.0) * y_max;
    from_bloch(p.p1(), BlochVector23::new(y, z), s).expect("within the Bloch disk")
}

fn random_probs<R: Rng>(rng: &mut R) -> ProbVector3 {
    let w: [f64; 3] = [
        rng.random_range(0.01..1.0),
        rng.random_range(0.01..1.0),
        rng.random_range(0.01..1.0),
    ];
    let t: f64 = w.iter().sum();
    ProbVector3::new(w[0] / t, w[1] / t, w[2] / t).expect("normalized")
}

struct Worst {
    value: f64,
}

impl Worst {
    fn new() -> Self {
        Self { value: 0.0 }
    }

    fn see(&mut self, v: f64) {
        if v.is_nan() {
            self.value = f64::NAN;
        } else if !self.value.is_nan() {
            self.value = self.value.max(v.abs());
        }
    }

    fn outcome(self, name: &'static str, tol: f64) -> CheckOutcome {
        CheckOutcome {
            name,
            passed: self.value <= tol,
            detail: format!("max deviation {:.3e} (tol {tol:.0e})", self.value),
        }
    }
}

fn check_entropy_identities(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst = Worst::new();
    for _ in 0..200 {
        let p = random_probs(rng);
        let rho = random_matched_state(rng, &p);
        let sigma_p = random_probs(rng);
        let sigma = DensityMatrix3::diagonal(&sigma_p);
        let d_rho = dephase(&rho);
        // S(rho||sigma) for diagonal sigma splits into coherence plus KL
        let lhs = relative_entropy(&rho, &sigma).unwrap_or(f64::NAN);
        let kl = kl_divergence(&p, &sigma_p).unwrap_or(f64::NAN);
        worst.see(lhs - (coherence_measure(&rho) + kl));
        worst.see(von_neumann_entropy(&d_rho) - p.shannon_entropy());
    }
    worst.outcome("entropy identities", 1e-10)
}

fn check_unitary_invariants(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst = Worst::new();
    for _ in 0..200 {
        let p = random_probs(rng);
        let rho = random_matched_state(rng, &p);
        let theta = rng.random_range(-PI..PI);
        let out = apply_work_unitary(&rho, theta);
        worst.see(von_neumann_entropy(&out) - von_neumann_entropy(&rho));
        worst.see(out.populations().p1() - p.p1());
        let (a, b) = (out.eigenvalues(), rho.eigenvalues());
        for k in 0..3 {
            worst.see(a[k] - b[k]);
        }
    }
    worst.outcome("work unitary invariants", 1e-10)
}

fn check_cycle_theorem(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst = Worst::new();
    let mut min_ds = f64::INFINITY;
    for k in 0..1000 {
        let (levels, baths) = random_engine(rng);
        let theta = rng.random_range(0.01..PI);
        let unit = EngineUnit::new(levels, baths, theta).expect("valid angle");
        let p_eq = gibbs_steady_state(&levels, &baths);
        let mode = if k % 2 == 0 {
            CycleMode::WithCe
        } else {
            CycleMode::WithCeCi(random_matched_state(rng, &p_eq))
        };
        let Ok(ledger) = run_cycle(&unit, &mode) else {
            worst.see(f64::NAN);
            continue;
        };
        let ds = ledger.ds_baths + ledger.ds_acpt + ledger.ds_dnr;
        let energy_after = {
            let start = match &mode {
                CycleMode::WithCeCi(d) => d.clone(),
                _ => unit.thermal_state(),
            };
            let rho_w = apply_work_unitary(&start, theta);
            dephase(&rho_w).populations()
        };
        let d = kl_divergence(&energy_after, &p_eq).unwrap_or(f64::NAN);
        worst.see((ds - d) / d.abs().max(1.0));
        worst.see(ledger.w - (ledger.q_h + ledger.q_c));
        min_ds = min_ds.min(ledger.ds_tot);
    }
    let mut out = worst.outcome("cycle entropy theorem and energy balance", 1e-10);
    if min_ds < -1e-10 {
        out.passed = false;
    }
    out.detail = format!("{}; min ds_tot {min_ds:.3e}", out.detail);
    out
}

fn check_telescoping_work(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst = Worst::new();
    for _ in 0..50 {
        let (levels, baths) = random_engine(rng);
        let n = rng.random_range(1..=64usize);
        let omega = rng.random_range(0.05..=PI);
        let result = build_schedule(&levels, &baths, n, omega / n as f64).and_then(|s| {
            let run = run_collective_cycle(&s)?;
            Ok((run.total_w, collective_work_closed_form(&levels, s.dp0, s.omega)))
        });
        match result {
            Ok((w, closed)) => worst.see((w - closed) / closed),
            // schedules reaching negative temperatures are rejected by design
            Err(Error::NegativeTemperatureRequired { .. }) => {}
            Err(_) => worst.see(f64::NAN),
        }
    }
    worst.outcome("collective work closed form", 1e-10)
}

fn check_omega_pi_entropy(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst = Worst::new();
    for _ in 0..20 {
        let (levels, baths) = random_engine(rng);
        let n = rng.random_range(2..=40usize);
        let result = build_omega_pi_schedule(&levels, &baths, n).and_then(|s| {
            let run = run_collective_cycle(&s)?;
            Ok((run.total_ds, omega_pi_total_entropy(&s)?))
        });
        match result {
            Ok((heat, rel)) => worst.see((heat - rel) / rel.abs().max(1e-300)),
            Err(Error::NegativeTemperatureRequired { .. }) => {}
            Err(_) => worst.see(f64::NAN),
        }
    }
    worst.outcome("omega=pi total entropy", 1e-10)
}

fn check_temperature_round_trip(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst = Worst::new();
    for _ in 0..200 {
        let (levels, baths) = random_engine(rng);
        let p = gibbs_steady_state(&levels, &baths);
        match temperatures_from_populations(&levels, &p) {
            Ok(back) => {
                worst.see((back.t_c() - baths.t_c()) / baths.t_c());
                worst.see((back.t_h() - baths.t_h()) / baths.t_h());
            }
            Err(_) => worst.see(f64::NAN),
        }
    }
    worst.outcome("temperature round trip", 1e-10)
}

fn check_determinism() -> CheckOutcome {
    let cfg = parse_config("experiment=omega-pi\nn=16").expect("static config");
    let a = run_experiment(&cfg).map(|t| t.to_csv());
    let b = run_experiment(&cfg).map(|t| t.to_csv());
    let passed = matches!((&a, &b), (Ok(x), Ok(y)) if x == y);
    CheckOutcome {
        name: "byte-identical output",
        passed,
        detail: if passed { "ok".into() } else { "runs differ".into() },
    }
}

/// Runs every check with the fixed seed.
pub fn run_selftest() -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    vec![
        check_entropy_identities(&mut rng),
        check_unitary_invariants(&mut rng),
        check_cycle_theorem(&mut rng),
        check_telescoping_work(&mut rng),
        check_omega_pi_entropy(&mut rng),
        check_temperature_round_trip(&mut rng),
        check_determinism(),
    ]
}

/// Configs for the CSVs the plotting step reads, by file name.
pub const PLOT_CONFIGS: [(&str, &str); 5] = [
    ("boost.csv", "experiment=boost-curve\ndelta_theta=pi/20\nn_list=1:100:1"),
    ("per_unit_entropy.csv", "experiment=omega-pi\nn=20"),
    ("ep_ratio.csv", "experiment=ep-ratio\nbaseline=sepo\nt_c=1\nt_h=5\nn_list=2:64:1"),
    ("ep_ratio_cold.csv", "experiment=ep-ratio\nbaseline=sepo\nt_c=0.2\nt_h=5\nn_list=2:64:1"),
    ("ep_scaling.csv", "experiment=ep-scaling\nn_list=8,16,32,64,128,256"),
];

/// Writes the plotting CSVs into `dir` and returns their paths.
pub fn write_plot_csvs(dir: &Path) -> Result<Vec<PathBuf>> {
    let io = |e: std::io::Error| Error::InvalidArgument(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let mut paths = Vec::new();
    for (name, text) in PLOT_CONFIGS {
        let table = run_experiment(&parse_config(text)?)?;
        let path = dir.join(name);
        fs::write(&path, table.to_csv()).map_err(io)?;
        paths.push(path);
    }
    Ok(paths)
}
