use genbound::oracle::{
    exact_expected_gen_error, exact_mutual_information, expected_kl_to_mixture, mc_expected_gen_error,
    output_marginal, ExperimentConfig,
};
use genbound::privacy::Mechanism;
use genbound::types::{SourceDistribution, TypeCap};
use proptest::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn config(seed: u64, mc: u64) -> ExperimentConfig {
    let mech = Mechanism::exponential(3, 5, 0.7, TypeCap::default()).unwrap();
    let src = SourceDistribution::new(vec![0.2, 0.5, 0.3]).unwrap();
    ExperimentConfig::with_default_loss(src, mech, seed, mc, TypeCap::default()).unwrap()
}

#[test]
fn mc_standard_errors_are_calibrated() {
    // sum of squared z-scores over independent seeds is approximately chi-square
    let seeds = 30;
    let exact = exact_expected_gen_error(&config(0, 100)).unwrap();
    let stat: f64 = (0..seeds)
        .map(|s| {
            let est = mc_expected_gen_error(&config(s, 20_000)).unwrap();
            ((est.estimate - exact) / est.standard_error).powi(2)
        })
        .sum();
    let limit = ChiSquared::new(seeds as f64).unwrap().inverse_cdf(0.999);
    assert!(stat <= limit, "chi-square statistic {stat} above {limit}");
}

#[test]
fn mc_is_reproducible_per_seed() {
    let a = mc_expected_gen_error(&config(7, 5_000)).unwrap();
    let b = mc_expected_gen_error(&config(7, 5_000)).unwrap();
    assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
    let c = mc_expected_gen_error(&config(8, 5_000)).unwrap();
    assert_ne!(a.estimate.to_bits(), c.estimate.to_bits());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // E KL(P_{W|S} || Q) >= I(S;W) for every Q, with equality at the marginal.
    #[test]
    fn marginal_minimises_expected_kl(seed in 0u64..1000, raw in prop::collection::vec(0.01f64..1.0, 5)) {
        let cap = TypeCap::default();
        // five types for |Z| = 2, N = 4, one hypothesis each under the default loss
        let mech = Mechanism::random_dirichlet(2, 4, 5, seed, cap).unwrap();
        let cfg = ExperimentConfig::with_default_loss(SourceDistribution::new(vec![0.4, 0.6]).unwrap(), mech, 0, 100, cap).unwrap();
        let h = cfg.mechanism().hypothesis_count();
        let total: f64 = raw[..h].iter().sum();
        let q: Vec<f64> = raw[..h].iter().map(|v| v / total).collect();
        let mi = exact_mutual_information(&cfg).unwrap();
        let at_q = expected_kl_to_mixture(&cfg, &q).unwrap();
        let at_marginal = expected_kl_to_mixture(&cfg, &output_marginal(&cfg)).unwrap();
        prop_assert!(at_q >= mi - 1e-12);
        prop_assert!((at_marginal - mi).abs() <= 1e-12);
    }
}
