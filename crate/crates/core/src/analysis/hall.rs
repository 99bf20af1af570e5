//! Finite-size expectation of the empirical Hall certificate on expected-
//! degree random graphs: E[|S*|] and E[|N(S*)|], combined into the upper
//! bound n - (E[|S*|] - E[|N(S*)|]) on the expected maximum matching size.
//!
//! With q_i = (d_i/m)(1 - d_i/m)^(m-1) the chance that offline node i ends
//! up with degree exactly 1 pointing at a fixed online node, both targets
//! have exact product forms. E[|S*|] conditions each node on its realized
//! degree Delta and multiplies by beta_i(Delta), the inclusion-exclusion
//! probability that Delta fixed online nodes are all covered by degree-1
//! nodes other than i. beta^0 = beta^1 = 1 (a degree-1 node covers its own
//! neighbor).
//!
//! The alternating beta sum cancels catastrophically once Delta grows, so
//! each evaluation tracks the absolute-term mass as a rounding-error bound.
//! A sum whose error budget blows past ERR_TOL is discarded and the node's
//! remaining degree window contributes zero. beta decays in Delta, so the
//! discarded mass is below the last trusted beta and the bound stays valid
//! (dropping E[|S*|] mass only weakens it upward).

use crate::analysis::numeric::{kahan_sum, log_binomial};
use crate::analysis::AnalysisError;
use crate::generators::DegreeProfile;

/// Relative rounding scale of one summed term.
const TERM_EPS: f64 = 1e-15;
/// A beta sum is trusted only while abs-term mass * TERM_EPS stays below this.
const ERR_TOL: f64 = 1e-9;
/// Slack outside [0, 1] before a trusted beta is declared invalid.
const BETA_EPS: f64 = 1e-6;
/// Trusted betas below this cut the node's remaining degree window.
const BETA_CUT: f64 = 1e-9;
/// Degree window half-width in standard deviations, plus flat padding that
/// covers the Poisson-like regime where sigma underestimates the tail.
const TAIL_SIGMAS: f64 = 8.0;
const TAIL_PAD: f64 = 20.0;

/// Extends logp so that logp[r] = sum_j count_j * ln(1 - r q_j) exists.
fn extend_logp(logp: &mut Vec<f64>, r: usize, classes: &[(f64, f64)], q: &[f64]) {
    while logp.len() <= r {
        let rr = logp.len() as f64;
        logp.push(kahan_sum(
            classes.iter().zip(q).map(|(&(_, count), &qj)| count * (-rr * qj).ln_1p()),
        ));
    }
}

/// One beta_i(Delta) evaluation. `Ok(Some(b))` is a trusted value in [0, 1],
/// `Ok(None)` means the rounding budget blew up and the caller must cut.
fn beta(
    delta: usize,
    class_index: usize,
    qi: f64,
    logp: &mut Vec<f64>,
    classes: &[(f64, f64)],
    q: &[f64],
) -> Result<Option<f64>, AnalysisError> {
    let mut s = 0.0;
    let mut comp = 0.0;
    let mut abs_mass = 0.0;
    for r in 0..=delta {
        extend_logp(logp, r, classes, q);
        let lp = logp[r] - (-(r as f64) * qi).ln_1p();
        let mut term = (log_binomial(delta as u64, r as u64) + lp).exp();
        abs_mass += term;
        if !(abs_mass * TERM_EPS < ERR_TOL) {
            return Ok(None);
        }
        if r % 2 == 1 {
            term = -term;
        }
        let y = term - comp;
        let t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    if !s.is_finite() || !(-BETA_EPS..=1.0 + BETA_EPS).contains(&s) {
        return Err(AnalysisError::CancellationOverflow { node: class_index, delta });
    }
    Ok(Some(s.clamp(0.0, 1.0)))
}

/// (E[|S*|], E[|N(S*)|]) for a CLV-B graph with `n` offline nodes of the
/// given expected degrees and `m` online nodes.
pub fn hall_expectation_parts(
    profile: &DegreeProfile,
    n: usize,
    m: usize,
) -> Result<(f64, f64), AnalysisError> {
    profile.validate_for_m(m)?;
    let classes = profile.class_counts(n)?;
    if n == 0 {
        return Ok((0.0, 0.0));
    }
    if m == 0 {
        return Ok((n as f64, 0.0));
    }
    let mf = m as f64;
    let q: Vec<f64> = classes
        .iter()
        .map(|&(d, _)| {
            let p = d / mf;
            if p >= 1.0 {
                if m == 1 {
                    1.0
                } else {
                    0.0
                }
            } else {
                p * (((m - 1) as f64) * (-p).ln_1p()).exp()
            }
        })
        .collect();
    let uncovered_ln =
        kahan_sum(classes.iter().zip(&q).map(|(&(_, count), &qj)| count * (-qj).ln_1p()));
    let e_ns = mf * (1.0 - uncovered_ln.exp());

    let mut logp: Vec<f64> = vec![0.0];
    let mut contributions = Vec::with_capacity(classes.len());
    for (class_index, &(d, count)) in classes.iter().enumerate() {
        let p = d / mf;
        if p == 0.0 {
            contributions.push(count);
            continue;
        }
        let (lo, hi, mut lnpmf, ln_odds) = if p >= 1.0 {
            (m, m, 0.0, 0.0)
        } else {
            let mu = mf * p;
            let sigma = (mf * p * (1.0 - p)).sqrt();
            let lo = (mu - TAIL_SIGMAS * sigma - TAIL_PAD).floor().max(0.0) as usize;
            let hi = (mu + TAIL_SIGMAS * sigma + TAIL_PAD).ceil().min(mf) as usize;
            let lnpmf = log_binomial(m as u64, lo as u64)
                + lo as f64 * p.ln()
                + (m - lo) as f64 * (-p).ln_1p();
            (lo, hi, lnpmf, p.ln() - (-p).ln_1p())
        };
        let mut acc = 0.0;
        for delta in lo..=hi {
            let w = lnpmf.exp();
            if delta <= 1 {
                acc += w;
            } else {
                match beta(delta, class_index, q[class_index], &mut logp, &classes, &q)? {
                    None => break,
                    Some(b) => {
                        acc += w * b;
                        if b < BETA_CUT {
                            break;
                        }
                    }
                }
            }
            if delta < hi {
                lnpmf += ((m - delta) as f64 / (delta + 1) as f64).ln() + ln_odds;
            }
        }
        contributions.push(count * acc);
    }
    let e_s = kahan_sum(contributions);
    Ok((e_s, e_ns))
}

/// Upper bound n - (E[|S*|] - E[|N(S*)|]) on the expected maximum matching.
pub fn hall_expectation(profile: &DegreeProfile, n: usize, m: usize) -> Result<f64, AnalysisError> {
    let (e_s, e_ns) = hall_expectation_parts(profile, n, m)?;
    Ok(n as f64 - (e_s - e_ns))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{clvb_sample, zipf_profile};
    use crate::graph::TrialSeed;
    use crate::oracle::hall_subset;

    #[test]
    fn all_degree_m_collapses_to_n() {
        // no degree-1 nodes ever: E[|N(S*)|] = 0, E[|S*|] = 0, bound = n
        for (n, m) in [(6usize, 6usize), (10, 100), (3, 4)] {
            let p = DegreeProfile::PerNode(vec![m as f64; n]);
            let (e_s, e_ns) = hall_expectation_parts(&p, n, m).unwrap();
            assert!(e_s.abs() < 1e-9, "e_s {e_s} at n={n} m={m}");
            assert!(e_ns.abs() < 1e-9, "e_ns {e_ns} at n={n} m={m}");
            assert!((hall_expectation(&p, n, m).unwrap() - n as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn single_edge_world() {
        // one offline, one online, edge w.p. 1: the node is degree 1, covers
        // its neighbor, S* = {0}, N(S*) = {0}, bound 1
        let p = DegreeProfile::PerNode(vec![1.0]);
        let (e_s, e_ns) = hall_expectation_parts(&p, 1, 1).unwrap();
        assert!((e_s - 1.0).abs() < 1e-12);
        assert!((e_ns - 1.0).abs() < 1e-12);
        assert!((hall_expectation(&p, 1, 1).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn isolated_plus_saturated_is_exact() {
        // two isolated nodes are always in S*; the degree-3 node never is
        // (its neighbors are never covered since nothing has degree 1)
        let p = DegreeProfile::PerNode(vec![0.0, 0.0, 3.0]);
        let (e_s, e_ns) = hall_expectation_parts(&p, 3, 3).unwrap();
        assert!((e_s - 2.0).abs() < 1e-12, "e_s {e_s}");
        assert!(e_ns.abs() < 1e-12, "e_ns {e_ns}");
        assert!((hall_expectation(&p, 3, 3).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grouped_matches_expanded_per_node() {
        let grouped = DegreeProfile::Grouped(vec![(1.0, 0.5), (3.0, 0.5)]);
        let expanded = DegreeProfile::PerNode(vec![1.0, 1.0, 1.0, 1.0, 3.0, 3.0, 3.0, 3.0]);
        let a = hall_expectation_parts(&grouped, 8, 10).unwrap();
        let b = hall_expectation_parts(&expanded, 8, 10).unwrap();
        assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12, "{a:?} vs {b:?}");
    }

    #[test]
    fn degree_above_m_rejected() {
        let p = DegreeProfile::PerNode(vec![7.0]);
        assert!(matches!(
            hall_expectation(&p, 1, 6),
            Err(AnalysisError::Profile(_))
        ));
    }

    #[test]
    fn empty_and_edgeless_limits() {
        let none = DegreeProfile::PerNode(vec![]);
        assert_eq!(hall_expectation_parts(&none, 0, 5).unwrap(), (0.0, 0.0));
        let isolated = DegreeProfile::PerNode(vec![0.0; 4]);
        assert_eq!(hall_expectation_parts(&isolated, 4, 0).unwrap(), (4.0, 0.0));
        assert_eq!(hall_expectation(&isolated, 4, 0).unwrap(), 0.0);
    }

    #[test]
    fn monte_carlo_parts_cross_check() {
        // the product formulas are exact for CLV-B, so sampled means must
        // agree within Monte-Carlo error
        let degrees = vec![0.5, 0.8, 0.3, 1.2, 0.6, 0.9];
        let profile = DegreeProfile::PerNode(degrees);
        let (e_s, e_ns) = hall_expectation_parts(&profile, 6, 6).unwrap();
        let trials = 100_000u64;
        let (mut sum_s, mut sumsq_s, mut sum_ns, mut sumsq_ns) = (0.0, 0.0, 0.0, 0.0);
        for t in 0..trials {
            let g = clvb_sample(&profile, 6, TrialSeed::new(0xA11CE, t)).unwrap();
            let cert = hall_subset(&g);
            let s = cert.s_star.len() as f64;
            let ns = cert.n_s_star.len() as f64;
            sum_s += s;
            sumsq_s += s * s;
            sum_ns += ns;
            sumsq_ns += ns * ns;
        }
        let tf = trials as f64;
        let check = |label: &str, expect: f64, sum: f64, sumsq: f64| {
            let mean = sum / tf;
            let var = (sumsq / tf - mean * mean).max(0.0);
            let se = (var / tf).sqrt();
            assert!(
                (mean - expect).abs() <= 3.0 * se,
                "{label}: mean {mean:.4} vs analytic {expect:.4}, se {se:.5}"
            );
        };
        check("E[|S*|]", e_s, sum_s, sumsq_s);
        check("E[|N(S*)|]", e_ns, sum_ns, sumsq_ns);
    }

    #[test]
    fn frozen_zipf_bounds() {
        let expect = [(0.5, 1000.00), (0.8, 946.93), (1.0, 627.12), (1.5, 133.42)];
        for &(alpha, want) in &expect {
            let p = zipf_profile(1000, 500.0, alpha).unwrap();
            let (e_s, e_ns) = hall_expectation_parts(&p, 1000, 1000).unwrap();
            assert!((0.0..=1000.0).contains(&e_s), "e_s {e_s} at alpha={alpha}");
            assert!((0.0..=1000.0).contains(&e_ns), "e_ns {e_ns} at alpha={alpha}");
            let bound = hall_expectation(&p, 1000, 1000).unwrap();
            assert!(
                (bound - want).abs() <= 0.01,
                "alpha={alpha}: bound {bound:.4}, expected {want}"
            );
        }
    }
}
