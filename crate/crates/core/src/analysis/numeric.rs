//! Shared numeric primitives: stable log-space helpers and compensated
//! summation used throughout the analytic engine.

/// log(e^x - 1) for x > 0, stable across the whole range.
pub fn log_expm1(x: f64) -> f64 {
    if x > 30.0 {
        x + (-(-x).exp()).ln_1p()
    } else if x <= 1e-8 {
        // expm1(x) = x(1 + x/2 + ...)
        x.ln() + x / 2.0
    } else {
        x.exp_m1().ln()
    }
}

/// log(1 + e^w), stable for any w.
pub fn softplus(w: f64) -> f64 {
    if w > 0.0 {
        w + (-w).exp().ln_1p()
    } else {
        w.exp().ln_1p()
    }
}

/// log(e^a + e^b) without overflow; handles -inf endpoints.
pub fn logaddexp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Neumaier-compensated sum. Infinite inputs propagate as plain summation
/// would (the compensation would otherwise produce spurious NaN).
pub fn kahan_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    if sum.is_finite() {
        sum + comp
    } else {
        sum
    }
}

/// log of the binomial coefficient C(n, k).
pub fn log_binomial(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    libm::lgamma((n + 1) as f64) - libm::lgamma((k + 1) as f64) - libm::lgamma((n - k + 1) as f64)
}
