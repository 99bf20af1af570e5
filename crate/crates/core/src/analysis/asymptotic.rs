//! The n = m -> infinity limit of the analytic engine: matched fraction and
//! Hall bound fraction for a grouped degree profile.
//!
//! The limit substitutes rates k -> delta, masses f -> fractions lambda, and
//! horizon m -> 1, after which the finite chain machinery applies verbatim.

use crate::analysis::closed_form::AnalyticSolution;
use crate::analysis::numeric::kahan_sum;
use crate::analysis::AnalysisError;
use crate::generators::DegreeProfile;

/// Asymptotic solution: rates delta, masses lambda, horizon 1.
pub fn asymptotic_solution(profile: &DegreeProfile) -> Result<AnalyticSolution, AnalysisError> {
    let classes = profile.class_fractions()?;
    let mut deltas = Vec::new();
    let mut masses = Vec::new();
    for (delta, lam) in classes {
        if delta <= 0.0 || lam <= 0.0 {
            continue;
        }
        deltas.push(delta);
        masses.push(lam);
    }
    let rates = deltas.clone();
    Ok(AnalyticSolution::build(deltas, masses, rates, 1.0))
}

/// Expected fraction of online nodes matched by MinPredictedDegree in the
/// limit: sum_i lambda_i + z_i(1) / delta_i.
pub fn asymptotic_mpd_fraction(profile: &DegreeProfile) -> Result<f64, AnalysisError> {
    Ok(asymptotic_solution(profile)?.expected_matched())
}

/// Asymptotic Hall bound fraction.
///
/// With pbar = prod_i exp(-delta_i lambda_i e^{-delta_i}), the degree-1
/// coverage gives E[|N(S*)|/m] = 1 - pbar and beta^Delta = (1 - pbar)^Delta
/// for Delta >= 2 (beta^0 = beta^1 = 1). The Poisson sum over Delta then
/// collapses: E[|S*|/m] = sum_i lambda_i (delta_i pbar e^{-delta_i} +
/// e^{-delta_i pbar}), where the first term is the Delta = 1 correction.
/// The bound is 1 - (E[|S*|/m] - E[|N(S*)|/m]).
pub fn asymptotic_hall_bound(profile: &DegreeProfile) -> Result<f64, AnalysisError> {
    let classes = profile.class_fractions()?;
    let classes: Vec<(f64, f64)> =
        classes.into_iter().filter(|&(d, l)| d > 0.0 && l > 0.0).collect();
    let exponent = kahan_sum(classes.iter().map(|&(d, l)| d * l * (-d).exp()));
    let pbar = (-exponent).exp();
    let e_ns = 1.0 - pbar;
    let e_s = kahan_sum(
        classes.iter().map(|&(d, l)| l * (d * pbar * (-d).exp() + (-d * pbar).exp())),
    );
    Ok(1.0 - (e_s - e_ns))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::numeric::log_expm1;

    fn grouped(classes: &[(f64, f64)]) -> DegreeProfile {
        DegreeProfile::Grouped(classes.to_vec())
    }

    #[test]
    fn single_class_fraction_matches_direct_formula() {
        // z(tau) = -log((e - 1) e^{-tau} + 1) at delta = 1, lambda = 1
        let p = grouped(&[(1.0, 1.0)]);
        let f = asymptotic_mpd_fraction(&p).unwrap();
        let direct = 1.0 - (((1f64.exp() - 1.0) * (-1f64).exp()) + 1.0).ln();
        assert!((f - direct).abs() < 1e-12, "{f} vs {direct}");
        assert!((f - 0.510120).abs() < 1e-6, "frozen anchor: {f}");
    }

    #[test]
    fn single_class_hall_pieces() {
        // E[|N(S*)|/m] = 1 - e^{-e^{-1}} at delta = 1, lambda = 1
        let pbar = (-(-1f64).exp()).exp();
        let e_ns = 1.0 - pbar;
        assert!((e_ns - 0.3078).abs() < 5e-5, "{e_ns}");
        let p = grouped(&[(1.0, 1.0)]);
        let bound = asymptotic_hall_bound(&p).unwrap();
        assert!((bound - 0.552679).abs() < 1e-6, "frozen anchor: {bound}");
    }

    #[test]
    fn hall_bound_poisson_series_oracle() {
        // capped-Delta evaluation of E[|S*|/m] with beta^Delta = (1-pbar)^Delta
        for profile in [
            grouped(&[(1.0, 1.0)]),
            grouped(&[(0.5, 0.3), (2.0, 0.4), (6.0, 0.3)]),
            grouped(&[(0.2, 0.25), (1.0, 0.25), (3.0, 0.25), (9.0, 0.25)]),
        ] {
            let classes = profile.class_fractions().unwrap();
            let exponent: f64 = classes.iter().map(|&(d, l)| d * l * (-d).exp()).sum();
            let pbar = (-exponent).exp();
            let mut e_s = 0.0;
            for &(d, l) in &classes {
                let mut pois = (-d).exp(); // Pr[Delta = 0]
                let mut acc = 0.0;
                for delta in 0..200u32 {
                    let beta = if delta <= 1 { 1.0 } else { (1.0 - pbar).powi(delta as i32) };
                    acc += pois * beta;
                    pois *= d / (delta + 1) as f64;
                }
                e_s += l * acc;
            }
            let series_bound = 1.0 - (e_s - (1.0 - pbar));
            let closed = asymptotic_hall_bound(&profile).unwrap();
            assert!(
                (closed - series_bound).abs() < 1e-12,
                "closed {closed} vs series {series_bound}"
            );
        }
    }

    #[test]
    fn fraction_insensitive_to_tail_eps() {
        use crate::generators::expcutoff_profile;
        let a = expcutoff_profile(1.0, 100.0, 1e-9).unwrap();
        let b = expcutoff_profile(1.0, 100.0, 1e-12).unwrap();
        let fa = asymptotic_mpd_fraction(&a).unwrap();
        let fb = asymptotic_mpd_fraction(&b).unwrap();
        assert!((fa - fb).abs() < 1e-6, "{fa} vs {fb}");
        let ha = asymptotic_hall_bound(&a).unwrap();
        let hb = asymptotic_hall_bound(&b).unwrap();
        assert!((ha - hb).abs() < 1e-6, "{ha} vs {hb}");
    }

    #[test]
    fn finite_solution_converges_to_asymptotic() {
        let profile = grouped(&[(1.0, 0.5), (4.0, 0.5)]);
        let limit = asymptotic_mpd_fraction(&profile).unwrap();
        let mut gaps = Vec::new();
        for &n in &[100usize, 1_000, 10_000, 100_000] {
            let size =
                crate::analysis::closed_form::expected_mpd_size(&profile, n, n).unwrap();
            gaps.push((size / n as f64 - limit).abs());
        }
        for w in gaps.windows(2) {
            assert!(w[1] < w[0], "gap not shrinking: {gaps:?}");
        }
        assert!(gaps[3] < 1e-4, "gap at n=1e5: {}", gaps[3]);
    }

    #[test]
    fn table_anchor_cell() {
        use crate::generators::expcutoff_profile;
        let p = expcutoff_profile(0.5, 10.0, 1e-9).unwrap();
        let ratio =
            asymptotic_mpd_fraction(&p).unwrap() / asymptotic_hall_bound(&p).unwrap();
        assert!((ratio - 0.967).abs() <= 0.0015, "ratio {ratio:.4}");
    }

    #[test]
    fn chain_construction_matches_manual_two_class() {
        // hand-built two-class chain per the alpha/C recurrences
        let (d1, l1, d2, l2) = (0.7, 0.6, 2.5, 0.4);
        let p = grouped(&[(d1, l1), (d2, l2)]);
        let sol = asymptotic_solution(&p).unwrap();
        let tau = 0.8;
        let c1 = (d1 * l1).exp() - 1.0;
        let z1 = -(c1 * (-d1 * tau).exp() + 1.0).ln();
        let alpha2 = |t: f64| c1 + (d1 * t).exp();
        let c2 = alpha2(0.0).powf(d2 / d1) * ((d2 * l2).exp() - 1.0);
        let z2 = -(c2 * alpha2(tau).powf(-d2 / d1) + 1.0).ln();
        let got = sol.z_all(tau);
        assert!((got[0] - z1).abs() < 1e-12, "{} vs {z1}", got[0]);
        assert!((got[1] - z2).abs() < 1e-12, "{} vs {z2}", got[1]);
        // ln C_2 agrees with the direct construction
        assert!((sol.ln_c[1] - c2.ln()).abs() < 1e-12);
        assert!((sol.ln_c[0] - log_expm1(d1 * l1)).abs() < 1e-15);
    }
}
