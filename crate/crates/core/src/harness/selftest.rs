//! Fast cross-checks wiring the oracles, the closed-form engine, and the
//! integrator against each other. Run by the `selftest` subcommand.

use rand::Rng;

use crate::algorithms::algorithm_by_name;
use crate::analysis::{asymptotic_hall_bound, asymptotic_mpd_fraction, closed_form_solution, integrate_z};
use crate::fixtures::half_competitive_instance;
use crate::generators::{clvb_sample, expcutoff_profile, DegreeProfile};
use crate::graph::{matching_size, run_online, BipartiteGraph, StreamKind, TrialSeed};
use crate::oracle::{brute_force_matching, hall_subset, max_matching};

#[derive(Debug, Clone)]
pub struct SelftestCheck {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, pass: bool, detail: String) -> SelftestCheck {
    SelftestCheck { name, pass, detail }
}

/// Samples a small random instance for the oracle checks. Parameters come
/// from a stream other than the one `clvb_sample` consumes.
fn small_instance(master: u64, trial: u64) -> BipartiteGraph {
    let seed = TrialSeed::new(master, trial);
    let mut rng = seed.rng(StreamKind::Predictor);
    let n = rng.random_range(1..=8usize);
    let m = rng.random_range(1..=8usize);
    let degrees: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * m as f64).collect();
    clvb_sample(&DegreeProfile::PerNode(degrees), m, seed).expect("valid parameters")
}

fn hard_instance_check() -> SelftestCheck {
    let (g, sigma) = half_competitive_instance();
    let result = algorithm_by_name("mpd", &g, &sigma)
        .map_err(|e| e.to_string())
        .and_then(|mut algo| {
            run_online(&g, algo.as_mut(), TrialSeed::new(0, 0)).map_err(|e| e.to_string())
        });
    match result {
        Ok(matching) => {
            let mut pairs = matching.pairs.clone();
            pairs.sort_unstable();
            let mx = max_matching(&g);
            let pass = pairs == [(3, 0), (4, 1), (5, 2)] && mx == 6;
            check(
                "hard instance",
                pass,
                format!("mpd matched {} of {}, pairs {:?}", matching_size(&matching), mx, pairs),
            )
        }
        Err(e) => check("hard instance", false, e),
    }
}

fn oracle_agreement_check() -> SelftestCheck {
    let trials = 300u64;
    let mut mismatches = 0usize;
    let mut first_bad = String::new();
    for t in 0..trials {
        let g = small_instance(0x5E1F_7E57, t);
        let hk = max_matching(&g);
        match brute_force_matching(&g) {
            Ok(bf) if bf == hk => {}
            Ok(bf) => {
                mismatches += 1;
                if first_bad.is_empty() {
                    first_bad = format!(" (first at trial {t}: hk {hk}, brute {bf})");
                }
            }
            Err(e) => {
                mismatches += 1;
                if first_bad.is_empty() {
                    first_bad = format!(" (trial {t}: {e})");
                }
            }
        }
    }
    check(
        "hopcroft-karp vs brute force",
        mismatches == 0,
        format!("{mismatches} mismatches in {trials} random instances{first_bad}"),
    )
}

fn hall_dominates_check() -> SelftestCheck {
    let trials = 200u64;
    let mut violations = 0usize;
    for t in 0..trials {
        let g = small_instance(0x0DD5_0FF5, t);
        if hall_subset(&g).bound < max_matching(&g) {
            violations += 1;
        }
    }
    check(
        "hall bound dominates matching",
        violations == 0,
        format!("{violations} violations in {trials} random instances"),
    )
}

fn integrator_check() -> SelftestCheck {
    let cases: [(Vec<(f64, f64)>, usize); 3] = [
        (vec![(1.0, 0.5), (3.0, 0.3), (6.0, 0.2)], 60),
        (vec![(2.0, 1.0)], 40),
        (vec![(0.5, 0.25), (1.5, 0.75)], 50),
    ];
    let mut worst = 0.0f64;
    let mut worst_scale = 1.0f64;
    for (classes, n) in cases {
        let profile = DegreeProfile::Grouped(classes);
        let sol = match closed_form_solution(&profile, n, n) {
            Ok(s) => s,
            Err(e) => return check("closed form vs integrator", false, e.to_string()),
        };
        let samples = integrate_z(&sol.rates, &sol.masses, sol.horizon, 1e-10, 16);
        for (t, z_num) in &samples {
            let z_exact = sol.z_all(*t);
            for (a, b) in z_exact.iter().zip(z_num) {
                let dev = (a - b).abs();
                if dev / n as f64 > worst / worst_scale {
                    worst = dev;
                    worst_scale = n as f64;
                }
            }
        }
    }
    check(
        "closed form vs integrator",
        worst < 1e-6 * worst_scale,
        format!("max deviation {worst:.3e} on horizon scale {worst_scale}"),
    )
}

fn asymptotic_anchor_check() -> SelftestCheck {
    let single = DegreeProfile::Grouped(vec![(1.0, 1.0)]);
    let frac = match asymptotic_mpd_fraction(&single) {
        Ok(f) => f,
        Err(e) => return check("asymptotic anchors", false, e.to_string()),
    };
    let profile = match expcutoff_profile(0.5, 10.0, 1e-9) {
        Ok(p) => p,
        Err(e) => return check("asymptotic anchors", false, e.to_string()),
    };
    let ratio = match (asymptotic_mpd_fraction(&profile), asymptotic_hall_bound(&profile)) {
        (Ok(m), Ok(h)) => m / h,
        (Err(e), _) | (_, Err(e)) => return check("asymptotic anchors", false, e.to_string()),
    };
    let pass = (frac - 0.510120).abs() < 1e-5 && (ratio - 0.967).abs() < 1.5e-3;
    check(
        "asymptotic anchors",
        pass,
        format!("unit-degree fraction {frac:.6}, cutoff-law ratio {ratio:.4}"),
    )
}

/// Runs every cross-check and reports one line of evidence each.
pub fn run_selftest() -> Vec<SelftestCheck> {
    vec![
        hard_instance_check(),
        oracle_agreement_check(),
        hall_dominates_check(),
        integrator_check(),
        asymptotic_anchor_check(),
    ]
}
