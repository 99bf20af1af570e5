//! Adaptive Runge-Kutta-Fehlberg 4(5) integration of the z system,
//!
//!   dz_i/dt = k_i (1 - e^{z_i}) * exp(sum_{i' < i} z_{i'}),  z_i(0) = -k_i f_i,
//!
//! kept deliberately independent of the closed-form chain so the two can
//! cross-validate each other. The 5th-order solution is propagated; the
//! embedded 4th-order difference drives step control.

fn rhs(rates: &[f64], z: &[f64], out: &mut [f64]) {
    let mut lower = 0.0f64;
    for i in 0..z.len() {
        out[i] = rates[i] * (-z[i].exp_m1()) * lower.exp();
        lower += z[i];
    }
}

/// Integrates the system over [0, t_end] and returns (t, z(t)) at
/// `n_samples + 1` evenly spaced times including both endpoints. Local error
/// is held below `rtol * (|z_i| + 1)` per component per step.
pub fn integrate_z(
    rates: &[f64],
    masses: &[f64],
    t_end: f64,
    rtol: f64,
    n_samples: usize,
) -> Vec<(f64, Vec<f64>)> {
    assert_eq!(rates.len(), masses.len(), "rates and masses must align");
    let ell = rates.len();
    let samples = n_samples.max(1);
    let mut z: Vec<f64> = rates.iter().zip(masses).map(|(&k, &f)| -k * f).collect();
    let mut out = Vec::with_capacity(samples + 1);
    out.push((0.0, z.clone()));
    if t_end <= 0.0 || ell == 0 {
        for j in 1..=samples {
            out.push((t_end.max(0.0) * j as f64 / samples as f64, z.clone()));
        }
        return out;
    }

    let mut k = vec![vec![0.0f64; ell]; 6];
    let mut zt = vec![0.0f64; ell];
    let mut z5 = vec![0.0f64; ell];
    let mut h = t_end / (100.0 * samples as f64);
    let h_floor = t_end * 1e-14;
    let mut t = 0.0f64;
    for j in 1..=samples {
        let target = t_end * j as f64 / samples as f64;
        while target - t > h_floor {
            let step = h.min(target - t);
            rhs(rates, &z, &mut k[0]);
            for i in 0..ell {
                zt[i] = z[i] + step * (0.25 * k[0][i]);
            }
            rhs(rates, &zt, &mut k[1]);
            for i in 0..ell {
                zt[i] = z[i] + step * (3.0 / 32.0 * k[0][i] + 9.0 / 32.0 * k[1][i]);
            }
            rhs(rates, &zt, &mut k[2]);
            for i in 0..ell {
                zt[i] = z[i]
                    + step
                        * (1932.0 / 2197.0 * k[0][i] - 7200.0 / 2197.0 * k[1][i]
                            + 7296.0 / 2197.0 * k[2][i]);
            }
            rhs(rates, &zt, &mut k[3]);
            for i in 0..ell {
                zt[i] = z[i]
                    + step
                        * (439.0 / 216.0 * k[0][i] - 8.0 * k[1][i] + 3680.0 / 513.0 * k[2][i]
                            - 845.0 / 4104.0 * k[3][i]);
            }
            rhs(rates, &zt, &mut k[4]);
            for i in 0..ell {
                zt[i] = z[i]
                    + step
                        * (-8.0 / 27.0 * k[0][i] + 2.0 * k[1][i] - 3544.0 / 2565.0 * k[2][i]
                            + 1859.0 / 4104.0 * k[3][i]
                            - 11.0 / 40.0 * k[4][i]);
            }
            rhs(rates, &zt, &mut k[5]);
            let mut ratio = 0.0f64;
            for i in 0..ell {
                z5[i] = z[i]
                    + step
                        * (16.0 / 135.0 * k[0][i] + 6656.0 / 12825.0 * k[2][i]
                            + 28561.0 / 56430.0 * k[3][i]
                            - 9.0 / 50.0 * k[4][i]
                            + 2.0 / 55.0 * k[5][i]);
                let z4 = z[i]
                    + step
                        * (25.0 / 216.0 * k[0][i] + 1408.0 / 2565.0 * k[2][i]
                            + 2197.0 / 4104.0 * k[3][i]
                            - 0.2 * k[4][i]);
                let err = (z5[i] - z4).abs() / (rtol * (z5[i].abs() + 1.0));
                if !(err <= ratio) {
                    ratio = if err.is_finite() { err } else { f64::INFINITY };
                }
            }
            if ratio <= 1.0 || step <= h_floor * 1.0001 {
                t += step;
                std::mem::swap(&mut z, &mut z5);
                let grow = if ratio > 0.0 { 0.9 * ratio.powf(-0.2) } else { 5.0 };
                h = step * grow.clamp(0.2, 5.0);
            } else {
                let shrink = if ratio.is_finite() { 0.9 * ratio.powf(-0.2) } else { 0.2 };
                h = step * shrink.clamp(0.2, 5.0);
            }
            h = h.max(h_floor);
        }
        out.push((t, z.clone()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::closed_form::closed_form_solution;
    use crate::generators::DegreeProfile;

    fn max_deviation(profile: &DegreeProfile, n: usize, m: usize, rtol: f64) -> f64 {
        let sol = closed_form_solution(profile, n, m).unwrap();
        let path = integrate_z(&sol.rates, &sol.masses, sol.horizon, rtol, 64);
        let mut worst = 0.0f64;
        for (t, zs) in path {
            let exact = sol.z_all(t);
            for (a, b) in zs.iter().zip(&exact) {
                worst = worst.max((a - b).abs());
            }
        }
        worst
    }

    #[test]
    fn single_class_matches_direct_solution() {
        // z(t) = -log((e^{kf} - 1) e^{-kt} + 1)
        let (kf, k) = (1.0f64, 1.0f64);
        let path = integrate_z(&[k], &[kf / k], 1.0, 1e-10, 32);
        for (t, zs) in path {
            let exact = -(((kf.exp() - 1.0) * (-k * t).exp()) + 1.0).ln();
            assert!((zs[0] - exact).abs() < 1e-9, "t={t}: {} vs {exact}", zs[0]);
        }
    }

    #[test]
    fn initial_condition_and_shape() {
        let rates = [0.5, 1.5];
        let masses = [0.4, 0.6];
        let path = integrate_z(&rates, &masses, 1.0, 1e-9, 40);
        assert_eq!(path.len(), 41);
        assert!((path[0].1[0] + 0.5 * 0.4).abs() < 1e-15);
        assert!((path[0].1[1] + 1.5 * 0.6).abs() < 1e-15);
        for w in path.windows(2) {
            for i in 0..2 {
                assert!(w[1].1[i] >= w[0].1[i] - 1e-12, "z must be nondecreasing");
                assert!(w[1].1[i] <= 1e-12, "z must stay nonpositive");
            }
        }
        assert!((path.last().unwrap().0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn multiclass_matches_closed_form_chain() {
        let profile =
            DegreeProfile::Grouped(vec![(1.0, 0.3), (3.0, 0.3), (8.0, 0.4)]);
        let dev = max_deviation(&profile, 100, 100, 1e-9);
        assert!(dev < 1e-6, "max deviation {dev}");
    }

    #[test]
    fn tighter_tolerance_tightens_agreement() {
        // a single sample leaves the step controller free-running over the
        // whole horizon, so the tolerance actually governs step sizes
        let profile = DegreeProfile::Grouped(vec![(0.5, 0.5), (4.0, 0.5)]);
        let sol = closed_form_solution(&profile, 200, 200).unwrap();
        let dev_at_end = |rtol: f64| {
            let path = integrate_z(&sol.rates, &sol.masses, sol.horizon, rtol, 1);
            let (t, zs) = path.last().unwrap();
            let exact = sol.z_all(*t);
            zs.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max)
        };
        let loose = dev_at_end(1e-3);
        let tight = dev_at_end(1e-10);
        assert!(tight < loose, "tight {tight} vs loose {loose}");
        assert!(tight < 1e-8, "tight {tight}");
    }

    #[test]
    fn degenerate_inputs() {
        let path = integrate_z(&[], &[], 1.0, 1e-6, 4);
        assert_eq!(path.len(), 5);
        assert!(path.iter().all(|(_, zs)| zs.is_empty()));
        let frozen = integrate_z(&[1.0], &[1.0], 0.0, 1e-6, 3);
        assert!(frozen.iter().all(|(t, zs)| *t == 0.0 && (zs[0] + 1.0).abs() < 1e-15));
    }
}
