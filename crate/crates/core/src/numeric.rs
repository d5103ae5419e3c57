//! Small numerical kernels shared by the envelope and geometry code.

/// `∏ x_k^{a_k}` evaluated as `exp(Σ a_k ln x_k)` when every base is strictly
/// positive; returns 0 as soon as one base is 0.
///
/// Callers guarantee `x_k >= 0` and `a_k > 0`.
pub(crate) fn monomial<'a>(terms: impl IntoIterator<Item = (f64, &'a f64)>) -> f64 {
    let mut log_sum = 0.0;
    for (x, &a) in terms {
        if x == 0.0 {
            return 0.0;
        }
        log_sum += a * x.ln();
    }
    log_sum.exp()
}

/// `x^e` for `x >= 0` through the log domain; `0^e = 0` for `e > 0`.
pub(crate) fn pow(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        (e * x.ln()).exp()
    }
}

/// `ln(hi / lo)` for `0 < lo < hi` without forming the quotient, which keeps
/// full relative accuracy when `hi` is barely above `lo`.
pub(crate) fn ln_ratio(lo: f64, hi: f64) -> f64 {
    ((hi - lo) / lo).ln_1p()
}

/// `(e^{k t} - 1) / k`, continuous at `k = 0` where it equals `t`.
pub(crate) fn expm1_over(k: f64, t: f64) -> f64 {
    if k == 0.0 {
        t
    } else {
        (k * t).exp_m1() / k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_matches_direct_product() {
        let a = [1.7, 1.5];
        let x = [2.0_f64, 0.5_f64];
        let direct = x[0].powf(a[0]) * x[1].powf(a[1]);
        let got = monomial(x.iter().copied().zip(a.iter()));
        assert!((got - direct).abs() <= 1e-15 * direct);
    }

    #[test]
    fn zero_base_short_circuits() {
        let a = [1.0, 2.0, 3.0];
        assert_eq!(monomial([1.0, 0.0, 5.0].into_iter().zip(a.iter())), 0.0);
        assert_eq!(pow(0.0, 0.3), 0.0);
    }

    #[test]
    fn ln_ratio_resolves_tiny_gaps() {
        let lo = 0.4;
        let hi = lo * (1.0 + 1e-12);
        let expected = (hi - lo) / lo;
        assert!((ln_ratio(lo, hi) - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn expm1_over_is_continuous_at_zero() {
        let t = 0.7;
        assert_eq!(expm1_over(0.0, t), t);
        assert!((expm1_over(1e-12, t) - t).abs() < 1e-12);
        assert!((expm1_over(1.0, t) - (t.exp() - 1.0)).abs() < 1e-15);
    }
}
