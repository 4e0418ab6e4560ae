use num_rational::Ratio;
use rand::Rng;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::num::Real;

/// `B(N, p)` with an exact rational success probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinomialSpec {
    pub trials: u64,
    pub success: Ratio<u64>,
}

impl BinomialSpec {
    pub fn new(trials: u64, numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 || numer > denom {
            return Err(Error::InvalidParams(format!("success probability {numer}/{denom}")));
        }
        Ok(Self { trials, success: Ratio::new(numer, denom) })
    }

    pub fn mean<F: Real>(&self) -> F {
        F::count(self.trials) * F::count(*self.success.numer()) / F::count(*self.success.denom())
    }
}

/// Flips a coin landing 1 with probability exactly `numer / denom`.
pub fn bernoulli_ratio<R: Rng + ?Sized>(numer: u64, denom: u64, rng: &mut R) -> bool {
    debug_assert!(denom > 0 && numer <= denom);
    numer == denom || (numer > 0 && rng.random_range(0..denom) < numer)
}

/// Exact inverse-transform draw from `B(N, p)`.
///
/// The pmf is walked upward from zero through its ratio recurrence in log
/// space, so `(1-p)^N` never underflows the accumulation for large `N`.
/// For `p > 1/2` the mirrored distribution is sampled instead.
pub fn sample_binomial<F: Real, R: Rng + ?Sized>(spec: &BinomialSpec, rng: &mut R) -> u64 {
    let n = spec.trials;
    let (num, den) = (*spec.success.numer(), *spec.success.denom());
    if n == 0 || num == 0 {
        return 0;
    }
    if num == den {
        return n;
    }
    if 2 * num > den {
        let mirrored = BinomialSpec { trials: n, success: Ratio::new(den - num, den) };
        return n - sample_binomial::<F, R>(&mirrored, rng);
    }
    let p = F::count(num) / F::count(den);
    let log_q = (-p).ln_1p();
    let log_odds = p.ln() - log_q;
    let u = F::of(rng.random::<f64>());
    if (n as f64) * (num as f64) / (den as f64) > MODE_START_MEAN {
        return from_mode(n, num, den, u, log_odds);
    }

    let mut log_pmf = F::count(n) * log_q;
    let mut cdf = log_pmf.exp();
    let mut k = 0u64;
    while u >= cdf && k < n {
        log_pmf = log_pmf + F::count(n - k).ln() - F::count(k + 1).ln() + log_odds;
        k += 1;
        cdf = cdf + log_pmf.exp();
    }
    k
}

/// Means above this are sampled outward from the mode.
const MODE_START_MEAN: f64 = 64.0;

/// Inverse transform over the support enumerated as `mode, mode + 1, mode - 1,
/// mode + 2, ...`; the expected walk is a few standard deviations long.
fn from_mode<F: Real>(n: u64, num: u64, den: u64, u: F, log_odds: F) -> u64 {
    let p = num as f64 / den as f64;
    let mode = (((n + 1) as f64 * p).floor() as u64).min(n);
    // Anchor in double precision: the gamma terms cancel to a small number.
    let anchor = ln_gamma((n + 1) as f64) - ln_gamma((mode + 1) as f64) - ln_gamma((n - mode + 1) as f64)
        + mode as f64 * p.ln()
        + (n - mode) as f64 * (-p).ln_1p();
    let anchor = F::of(anchor);
    let mut cdf = anchor.exp();
    if u < cdf {
        return mode;
    }
    let (mut up, mut up_log) = (mode, anchor);
    let (mut down, mut down_log) = (mode, anchor);
    loop {
        let can_up = up < n;
        let can_down = down > 0;
        if !can_up && !can_down {
            return mode;
        }
        if can_up {
            up_log = up_log + F::count(n - up).ln() - F::count(up + 1).ln() + log_odds;
            up += 1;
            cdf = cdf + up_log.exp();
            if u < cdf {
                return up;
            }
        }
        if can_down {
            down_log = down_log + F::count(down).ln() - F::count(n - down + 1).ln() - log_odds;
            down -= 1;
            cdf = cdf + down_log.exp();
            if u < cdf {
                return down;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn degenerate_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let zero_trials = BinomialSpec::new(0, 1, 3).unwrap();
        let never = BinomialSpec::new(50, 0, 7).unwrap();
        let always = BinomialSpec::new(50, 7, 7).unwrap();
        for _ in 0..100 {
            assert_eq!(sample_binomial::<f64, _>(&zero_trials, &mut rng), 0);
            assert_eq!(sample_binomial::<f64, _>(&never, &mut rng), 0);
            assert_eq!(sample_binomial::<f64, _>(&always, &mut rng), 50);
        }
    }

    #[test]
    fn invalid_probability_rejected() {
        assert!(BinomialSpec::new(3, 4, 3).is_err());
        assert!(BinomialSpec::new(3, 0, 0).is_err());
    }

    #[test]
    fn mean_of_table_load() {
        // B(255, 1/256): mean 255/256 = 0.996.
        let spec = BinomialSpec::new(255, 1, 256).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 100_000;
        let total: u64 = (0..n).map(|_| sample_binomial::<f64, _>(&spec, &mut rng)).sum();
        let mean = total as f64 / n as f64;
        assert!((mean - 0.996).abs() <= 0.03, "mean {mean}");
        assert!((spec.mean::<f64>() - 0.99609375).abs() < 1e-12);
    }

    /// Exact pmf by direct product evaluation, independent of the sampler's recurrence.
    fn pmf(n: u64, p: f64, k: u64) -> f64 {
        let mut c = 1.0f64;
        for i in 0..k {
            c = c * (n - i) as f64 / (i + 1) as f64;
        }
        c * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
    }

    #[test]
    fn matches_exact_pmf_small() {
        for &(n, num, den) in &[(6u64, 1u64, 3u64), (5, 3, 4), (10, 1, 2)] {
            let spec = BinomialSpec::new(n, num, den).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(n * 31 + num);
            let samples = 200_000;
            let mut counts = vec![0u64; n as usize + 1];
            for _ in 0..samples {
                counts[sample_binomial::<f64, _>(&spec, &mut rng) as usize] += 1;
            }
            let p = num as f64 / den as f64;
            let tv: f64 = (0..=n)
                .map(|k| (counts[k as usize] as f64 / samples as f64 - pmf(n, p, k)).abs())
                .sum::<f64>()
                / 2.0;
            assert!(tv < 0.006, "n={n} p={p} tv={tv}");
        }
    }

    #[test]
    fn matches_exact_pmf_above_mode_start() {
        // Mean 125: drawn outward from the mode.
        let (n, p) = (1000u64, 0.125);
        let spec = BinomialSpec::new(n, 1, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let samples = 200_000;
        let mut counts = vec![0u64; n as usize + 1];
        for _ in 0..samples {
            counts[sample_binomial::<f64, _>(&spec, &mut rng) as usize] += 1;
        }
        let tv: f64 =
            (0..=n).map(|k| (counts[k as usize] as f64 / samples as f64 - pmf(n, p, k)).abs()).sum::<f64>() / 2.0;
        assert!(tv < 0.02, "tv={tv}");
    }

    #[test]
    fn large_trial_count_does_not_underflow() {
        // (1 - 2^-8)^(2^24) underflows a naive pmf start.
        let spec = BinomialSpec::new(1 << 24, 1, 256).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mean = (1u64 << 24) as f64 / 256.0;
        let sd = (mean * (255.0 / 256.0)).sqrt();
        for _ in 0..20 {
            let k = sample_binomial::<f64, _>(&spec, &mut rng) as f64;
            assert!((k - mean).abs() < 6.0 * sd, "k={k}");
        }
    }

    #[test]
    fn works_in_single_precision() {
        let spec = BinomialSpec::new(255, 1, 256).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 50_000;
        let total: u64 = (0..n).map(|_| sample_binomial::<f32, _>(&spec, &mut rng)).sum();
        assert!((total as f64 / n as f64 - 0.996).abs() < 0.03);
    }

    #[test]
    fn rational_coin_is_exact_at_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!((0..100).all(|_| bernoulli_ratio(3, 3, &mut rng)));
        assert!((0..100).all(|_| !bernoulli_ratio(0, 3, &mut rng)));
        let hits = (0..30_000).filter(|_| bernoulli_ratio(1, 3, &mut rng)).count();
        assert!((hits as f64 / 30_000.0 - 1.0 / 3.0).abs() < 0.01);
    }
}
