//! Overflow-safe forms of `g(a) = e^{-a} ln(1 + e^{a})` and relatives.
//!
//! The companion `e^{a} ln(1 + e^{-a})` is `g(-a)`.

/// `g(a) = e^{-a} ln(1 + e^{a})`.
pub fn softcap(a: f64) -> f64 {
    if a > 0.0 {
        let y = (-a).exp();
        a * y + y * y.ln_1p()
    } else {
        let y = a.exp();
        if y == 0.0 {
            1.0
        } else {
            y.ln_1p() / y
        }
    }
}

/// `e^{a} ln(1 + e^{-a})`.
pub fn softcap_companion(a: f64) -> f64 {
    softcap(-a)
}

/// `g(a) - 1`, accurate when `g(a)` is close to one (`a` very negative).
pub fn softcap_m1(a: f64) -> f64 {
    if a > -2.5 {
        return softcap(a) - 1.0;
    }
    // ln(1+y)/y - 1 = sum_{n>=1} (-y)^n / (n+1), y = e^a < 0.083
    let y = a.exp();
    let mut term = 1.0;
    let mut sum = 0.0;
    for n in 1..40 {
        term *= -y;
        let c = term / (n as f64 + 1.0);
        sum += c;
        if c.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// The logistic function `1 / (1 + e^{-a})`.
pub fn logistic(a: f64) -> f64 {
    if a >= 0.0 {
        1.0 / (1.0 + (-a).exp())
    } else {
        let e = a.exp();
        e / (1.0 + e)
    }
}

/// `g'(a) = logistic(-a) - g(a)`.
pub fn softcap_d1(a: f64) -> f64 {
    if a > 0.0 {
        logistic(-a) - softcap(a)
    } else {
        // both terms of -(logistic(a)) - (g - 1) are small here
        -logistic(a) - softcap_m1(a)
    }
}

/// `g(a) - g(b)` without cancellation when both arguments are very negative.
pub fn softcap_diff(a: f64, b: f64) -> f64 {
    if a <= 0.0 && b <= 0.0 {
        softcap_m1(a) - softcap_m1(b)
    } else {
        softcap(a) - softcap(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn table_values() {
        assert!((softcap(0.0) - std::f64::consts::LN_2).abs() < 1e-15);
        let big = softcap(500.0);
        assert!(big.is_finite() && big > 0.0);
        // e^{-500} (500 + ln(1 + e^{-500})) to first order
        let want = 500.0 * (-500.0f64).exp();
        assert!((big / want - 1.0).abs() < 1e-13);
        // e^{500} ln(1 + e^{-500}) = 1 - e^{-500}/2 + ...
        assert_eq!(softcap(-500.0), 1.0);
        assert!((softcap_m1(-500.0) / (-0.5 * (-500.0f64).exp()) - 1.0).abs() < 1e-13);
        assert_eq!(softcap_companion(-500.0), softcap(500.0));
        assert!(softcap(700.0).is_finite() && softcap(-700.0).is_finite());
    }

    #[test]
    fn series_branch_is_continuous() {
        for &a in &[-2.5f64 - 1e-12, -3.0, -10.0, -40.0] {
            let direct = (a.exp()).ln_1p() / a.exp() - 1.0;
            let series = softcap_m1(a);
            assert!((direct - series).abs() <= 1e-14 + 1e-8 * series.abs(), "a={a}");
        }
    }

    proptest! {
        #[test]
        fn derivative_matches_differences(a in -30.0f64..30.0) {
            let h = 1e-5;
            let fd = (softcap(a + h) - softcap(a - h)) / (2.0 * h);
            prop_assert!((fd - softcap_d1(a)).abs() <= 1e-9);
        }

        #[test]
        fn matches_naive_in_safe_range(a in -30.0f64..30.0) {
            let naive = (-a).exp() * a.exp().ln_1p();
            prop_assert!((softcap(a) - naive).abs() <= 1e-13 * naive.abs().max(1e-300) + 1e-300);
        }
    }
}
