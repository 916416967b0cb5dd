//! Seeded Monte Carlo checks of the simulators against the analytic oracles.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tailcen_core::distributions::{expected_censor_rate, lambda_prob};
use tailcen_core::montecarlo::{builtin_cases, run_case};
use tailcen_core::special::gamma_p;
use tailcen_core::{CensorModel, TailModel};

fn case1_model() -> CensorModel {
    CensorModel::new(
        TailModel::log_gamma(2.0, 1.2).unwrap(),
        TailModel::log_gamma(2.0, 1.4).unwrap(),
    )
}

/// Empirical CDF of log-draws vs the gamma CDF, Kolmogorov-Smirnov style.
#[test]
fn sampler_log_draws_match_gamma_law() {
    let n = 100_000;
    let model = TailModel::log_gamma(1.0, 1.4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut logs: Vec<f64> = model.sample(n, &mut rng).iter().map(|v| v.ln()).collect();
    logs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());

    let mut distance = 0.0f64;
    for (i, w) in logs.iter().enumerate() {
        let cdf = gamma_p(1.4, *w).unwrap();
        let lo = i as f64 / n as f64;
        let hi = (i + 1) as f64 / n as f64;
        distance = distance.max((cdf - lo).abs()).max((hi - cdf).abs());
    }
    let bound = 1.95 / (n as f64).sqrt();
    assert!(
        distance < bound,
        "KS distance {distance} exceeds {bound}"
    );
}

/// Survival of the simulated minimum factorizes as P_X·P_Y.
#[test]
fn minimum_survival_factorizes() {
    let n = 100_000;
    let cm = case1_model();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let sample = cm.simulate_censored(n, &mut rng).unwrap();
    for x in [1.5, 2.0, 4.0, 10.0] {
        let expected = cm.data().survival(x).unwrap() * cm.censor().survival(x).unwrap();
        let observed =
            sample.z().iter().filter(|z| **z >= x).count() as f64 / n as f64;
        let se = (expected * (1.0 - expected) / n as f64).sqrt();
        assert!(
            (observed - expected).abs() < 3.0 * se,
            "x = {x}: observed {observed}, expected {expected}, se {se}"
        );
    }
}

/// Conditional frequency of δ = 1 given Z in a bin matches λ at the bin's
/// geometric midpoint.
#[test]
fn delta_frequency_matches_lambda() {
    let n = 200_000;
    let cm = case1_model();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let sample = cm.simulate_censored(n, &mut rng).unwrap();

    let edges: Vec<f64> = (0..=8).map(|i| 1.5f64 * 1.6f64.powi(i)).collect();
    for pair in edges.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let mut count = 0usize;
        let mut uncensored = 0usize;
        for (z, d) in sample.z().iter().zip(sample.delta()) {
            if *z >= lo && *z < hi {
                count += 1;
                uncensored += usize::from(*d);
            }
        }
        if count < 200 {
            continue;
        }
        let lambda = lambda_prob(&cm, (lo * hi).sqrt()).unwrap();
        let freq = uncensored as f64 / count as f64;
        let se = (lambda * (1.0 - lambda) / count as f64).sqrt();
        assert!(
            (freq - lambda).abs() < 3.0 * se,
            "bin [{lo}, {hi}): freq {freq}, lambda {lambda}, count {count}"
        );
    }
}

/// Monte Carlo censor rate agrees with the quadrature oracle.
#[test]
fn harness_censor_rate_matches_quadrature_oracle() {
    let mut config = builtin_cases()[1].clone(); // case 2
    config.replications = 10;
    config.beta_grid = vec![config.beta_grid[4]];
    let summary = run_case(&config).unwrap();
    let oracle = expected_censor_rate(&config.model).unwrap();
    let draws = (config.replications * config.n) as f64;
    let se = (oracle * (1.0 - oracle) / draws).sqrt();
    assert!(
        (summary.mean_censor_rate - oracle).abs() < 3.0 * se,
        "harness {summary:.6?} vs oracle {oracle:.6}",
        summary = summary.mean_censor_rate,
    );
}
