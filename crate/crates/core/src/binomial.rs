//! Expected value of a binomial count truncated at a cap.

/// Supports up to this size are summed with explicit binomial coefficients.
const DIRECT_LIMIT: u32 = 64;

/// `E[min(X, cap)]` for `X ~ Binomial(n, q)`.
///
/// Small `n` uses the closed-form pmf; larger `n` walks the pmf recurrence
/// in log space so that `(1-q)^n` never underflows.
pub fn capped_binomial_mean(n: u32, q: f64, cap: u32) -> f64 {
    let q = q.clamp(0.0, 1.0);
    if cap >= n {
        return n as f64 * q;
    }
    if q == 0.0 {
        return 0.0;
    }
    if q == 1.0 {
        return cap as f64;
    }
    // E[min(X, c)] = c - sum_{k<c} (c - k) P(X = k)
    let c = cap as f64;
    let mut shortfall = 0.0;
    if n <= DIRECT_LIMIT {
        let mut coeff = 1.0_f64;
        for k in 0..cap {
            let pk = coeff * q.powi(k as i32) * (1.0 - q).powi((n - k) as i32);
            shortfall += (c - k as f64) * pk;
            coeff = coeff * (n - k) as f64 / (k + 1) as f64;
        }
    } else {
        let log_odds = q.ln() - (-q).ln_1p();
        let mut log_pk = n as f64 * (-q).ln_1p();
        for k in 0..cap {
            shortfall += (c - k as f64) * log_pk.exp();
            log_pk += ((n - k) as f64 / (k + 1) as f64).ln() + log_odds;
        }
    }
    (c - shortfall).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_hand_values() {
        // min(Bin(2, 1/2), 1): P(0) = 1/4, so the mean is 3/4
        assert!((capped_binomial_mean(2, 0.5, 1) - 0.75).abs() < 1e-15);
        assert_eq!(capped_binomial_mean(5, 0.3, 5), 5.0 * 0.3);
        assert_eq!(capped_binomial_mean(5, 0.0, 2), 0.0);
        assert_eq!(capped_binomial_mean(5, 1.0, 2), 2.0);
    }

    #[test]
    fn direct_and_log_paths_agree_at_the_seam() {
        for &q in &[0.01, 0.2, 0.5, 0.93] {
            for cap in [1, 3, 10, 40] {
                let a = capped_binomial_mean(64, q, cap);
                let b = capped_binomial_mean(65, q, cap);
                // adding one trial moves the mean by at most q
                assert!(b >= a - 1e-12 && b <= a + q + 1e-12, "q={q} cap={cap}");
            }
        }
    }

    #[test]
    fn large_n_saturates_at_cap() {
        let v = capped_binomial_mean(10_000, 0.5, 20);
        assert!((v - 20.0).abs() < 1e-12);
    }
}
