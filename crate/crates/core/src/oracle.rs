//! Brute-force oracles over the full type space.
//!
//! Every quantity here is an exact finite sum over types (or a seeded
//! Monte-Carlo estimate of one). Sums run in parallel over types and are
//! reduced with a fixed pairwise tree, so results are bit-identical for any
//! number of worker threads.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::distributions::WeightedIndex;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::Distribution;
use rayon::prelude::*;

use crate::bounds::{self, BoundId};
use crate::covering::{
    all_types_cover, build_full_grid_cover, build_simplex_grid_cover, optimal_grid_parameter, CoverSpec,
    GridRegime,
};
use crate::divergence::{kl_slices, min_bound, neg_log_sum_exp};
use crate::error::{input, Error, Result};
use crate::privacy::{Mechanism, PrivacyParams};
use crate::reduce::{max_f64, pairwise_sum};
use crate::types::{type_distribution, Alphabet, CountVector, LossTable, SourceDistribution, TypeCap, TypeSpace};

/// Absolute tolerance on every exact comparison made by [`run_verification`].
pub const EXACT_TOLERANCE: f64 = 1e-9;

/// Smallest Monte-Carlo sample size accepted.
pub const MIN_MC_SAMPLES: u64 = 100;

/// A complete finite learning problem: source, algorithm and loss.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    alphabet: Alphabet,
    n: u64,
    source: SourceDistribution,
    mechanism: Mechanism,
    loss_table: LossTable,
    sigma: Option<f64>,
    seed: u64,
    mc_samples: u64,
    space: TypeSpace,
    type_probs: Vec<f64>,
}

impl ExperimentConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alphabet: Alphabet,
        source: SourceDistribution,
        mechanism: Mechanism,
        loss_table: LossTable,
        sigma: Option<f64>,
        seed: u64,
        mc_samples: u64,
        cap: TypeCap,
    ) -> Result<Self> {
        let k = alphabet.size();
        if source.dim() != k || mechanism.alphabet_size() != k || loss_table.alphabet_size() != k {
            return input("alphabet, source, mechanism and loss table disagree on |Z|");
        }
        if loss_table.hypothesis_count() != mechanism.hypothesis_count() {
            return input(format!(
                "loss table has {} rows, mechanism has {} hypotheses",
                loss_table.hypothesis_count(),
                mechanism.hypothesis_count()
            ));
        }
        if let Some(s) = sigma {
            if !(s >= 0.0 && s.is_finite()) {
                return input(format!("sigma must be non-negative, got {s}"));
            }
        }
        let n = mechanism.n();
        let space = TypeSpace::new(k, n, cap)?;
        let type_probs = type_distribution(&space, &source)?;
        Ok(ExperimentConfig {
            alphabet,
            n,
            source,
            mechanism,
            loss_table,
            sigma,
            seed,
            mc_samples,
            space,
            type_probs,
        })
    }

    /// Uses the loss `ℓ(w, a) = 1 − T_w(a)`; needs one hypothesis per type.
    pub fn with_default_loss(
        source: SourceDistribution,
        mechanism: Mechanism,
        seed: u64,
        mc_samples: u64,
        cap: TypeCap,
    ) -> Result<Self> {
        let space = TypeSpace::new(source.dim(), mechanism.n(), cap)?;
        if mechanism.hypothesis_count() != space.len() {
            return input("the default loss needs one hypothesis per type; supply a loss table");
        }
        let loss = LossTable::one_minus_type_frequency(&space);
        let alphabet = Alphabet::new(source.dim())?;
        Self::new(alphabet, source, mechanism, loss, None, seed, mc_samples, cap)
    }

    /// Parses `key=value` lines (`#` starts a comment). Relative paths are
    /// resolved against `base_dir`.
    ///
    /// Keys: `alphabet_size`, `n`, `source` (comma list, default uniform),
    /// `mechanism` (`exponential`, `identity`, `constant`, `dirichlet` or a
    /// kernel CSV path), `epsilon` or `mu`, `sigma`, `seed`, `mc_samples`,
    /// `loss` (CSV path).
    pub fn parse(text: &str, base_dir: &Path, cap: TypeCap) -> Result<Self> {
        let mut kv = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Input(format!("line {}: expected key=value", lineno + 1)))?;
            let key = k.trim().to_string();
            const KEYS: [&str; 10] = [
                "alphabet_size",
                "n",
                "source",
                "mechanism",
                "epsilon",
                "mu",
                "sigma",
                "seed",
                "mc_samples",
                "loss",
            ];
            if !KEYS.contains(&key.as_str()) {
                return input(format!("line {}: unknown key {key:?}", lineno + 1));
            }
            if kv.insert(key.clone(), v.trim().to_string()).is_some() {
                return input(format!("line {}: duplicate key {key:?}", lineno + 1));
            }
        }
        let get = |k: &str| kv.get(k).map(String::as_str);
        let num = |k: &str| -> Result<Option<f64>> {
            get(k)
                .map(|v| v.parse::<f64>().map_err(|_| Error::Input(format!("{k}: cannot parse {v:?}"))))
                .transpose()
        };
        let int = |k: &str| -> Result<Option<u64>> {
            get(k)
                .map(|v| v.parse::<u64>().map_err(|_| Error::Input(format!("{k}: cannot parse {v:?}"))))
                .transpose()
        };
        let privacy = match (num("epsilon")?, num("mu")?) {
            (Some(_), Some(_)) => return input("epsilon and mu are mutually exclusive"),
            (Some(e), None) => Some(PrivacyParams::epsilon_dp(e)?),
            (None, Some(m)) => Some(PrivacyParams::mu_gdp(m)?),
            (None, None) => None,
        };
        let seed = int("seed")?.unwrap_or(0);
        let mc_samples = int("mc_samples")?.unwrap_or(10_000);
        let sigma = num("sigma")?;
        let source = match get("source") {
            Some(list) => SourceDistribution::new(
                list.split(',')
                    .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Input(format!("source: bad entry {t:?}"))))
                    .collect::<Result<Vec<_>>>()?,
            )?,
            None => {
                let k = int("alphabet_size")?.ok_or_else(|| Error::Input("missing alphabet_size".into()))?;
                SourceDistribution::uniform(k as usize)?
            }
        };
        let k = source.dim();
        if let Some(declared) = int("alphabet_size")? {
            if declared as usize != k {
                return input(format!("alphabet_size={declared} but source has {k} entries"));
            }
        }
        let mechanism_name = get("mechanism").unwrap_or("exponential");
        let mechanism = match mechanism_name {
            "exponential" | "identity" | "constant" | "dirichlet" => {
                let n = int("n")?.ok_or_else(|| Error::Input("missing n".into()))?;
                let m = match mechanism_name {
                    "exponential" => match privacy {
                        Some(PrivacyParams::EpsilonDp(e)) => Mechanism::exponential(k, n, e, cap)?,
                        _ => return input("the exponential mechanism needs epsilon"),
                    },
                    "identity" => Mechanism::identity(k, n, cap)?,
                    "constant" => Mechanism::constant(k, n, cap.check(k, n)?, cap)?,
                    _ => Mechanism::random_dirichlet(k, n, cap.check(k, n)?, seed, cap)?,
                };
                match privacy {
                    Some(p) => m.with_privacy(p),
                    None => m,
                }
            }
            path => {
                let m = Mechanism::load(&base_dir.join(path))?;
                if let Some(n) = int("n")? {
                    if n != m.n() {
                        return input(format!("n={n} but mechanism file has n={}", m.n()));
                    }
                }
                match privacy {
                    Some(p) => m.with_privacy(p),
                    None => m,
                }
            }
        };
        let alphabet = Alphabet::new(k)?;
        let loss = match get("loss") {
            Some(path) => {
                let full = base_dir.join(path);
                let f = fs::File::open(&full).map_err(|e| Error::Input(format!("{}: {e}", full.display())))?;
                LossTable::from_csv(f)?
            }
            None => {
                let space = TypeSpace::new(k, mechanism.n(), cap)?;
                if mechanism.hypothesis_count() != space.len() {
                    return input("the default loss needs one hypothesis per type; set loss=<csv>");
                }
                LossTable::one_minus_type_frequency(&space)
            }
        };
        Self::new(alphabet, source, mechanism, loss, sigma, seed, mc_samples, cap)
    }

    pub fn from_file(path: &Path, cap: TypeCap) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, base, cap)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn source(&self) -> &SourceDistribution {
        &self.source
    }

    pub fn mechanism(&self) -> &Mechanism {
        &self.mechanism
    }

    pub fn loss_table(&self) -> &LossTable {
        &self.loss_table
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mc_samples(&self) -> u64 {
        self.mc_samples
    }

    pub fn with_mc(mut self, seed: u64, mc_samples: u64) -> Self {
        self.seed = seed;
        self.mc_samples = mc_samples;
        self
    }

    pub fn space(&self) -> &TypeSpace {
        &self.space
    }

    /// `P_S(T)` for every type, in enumeration order.
    pub fn type_probabilities(&self) -> &[f64] {
        &self.type_probs
    }

    /// Sub-Gaussian constant: the configured override, else half the largest loss range.
    pub fn sigma(&self) -> f64 {
        self.sigma.unwrap_or_else(|| self.loss_table.sigma())
    }
}

/// `E_{P_S}[f(T)]` with a deterministic reduction.
fn expectation(cfg: &ExperimentConfig, f: impl Fn(usize) -> f64 + Sync) -> f64 {
    let terms: Vec<f64> = (0..cfg.space.len())
        .into_par_iter()
        .map(|i| {
            let p = cfg.type_probs[i];
            if p == 0.0 {
                0.0
            } else {
                p * f(i)
            }
        })
        .collect();
    pairwise_sum(&terms)
}

/// Output marginal `P_W = Σ_T P_S(T) P_{W|T}`.
pub fn output_marginal(cfg: &ExperimentConfig) -> Vec<f64> {
    let kernel = cfg.mechanism.kernel();
    (0..cfg.mechanism.hypothesis_count())
        .into_par_iter()
        .map(|w| {
            let column: Vec<f64> = kernel.iter().zip(&cfg.type_probs).map(|(row, p)| p * row[w]).collect();
            pairwise_sum(&column)
        })
        .collect()
}

/// `E_{P_S}[KL(P_{W|S} ‖ q)]` for an arbitrary output distribution `q`.
pub fn expected_kl_to_mixture(cfg: &ExperimentConfig, q: &[f64]) -> Result<f64> {
    if q.len() != cfg.mechanism.hypothesis_count() {
        return input("mixture and kernel differ in the number of hypotheses");
    }
    Ok(expectation(cfg, |i| kl_slices(cfg.mechanism.row(i), q)))
}

/// `I(S;W) = E_{P_S}[KL(P_{W|S} ‖ P_W)]`.
pub fn exact_mutual_information(cfg: &ExperimentConfig) -> Result<f64> {
    let marginal = output_marginal(cfg);
    Ok(expected_kl_to_mixture(cfg, &marginal)?.max(0.0))
}

/// Entropy (nats) of the type of an i.i.d. sample, an upper bound on `I(S;W)`.
pub fn type_entropy(cfg: &ExperimentConfig) -> f64 {
    expectation(cfg, |i| -cfg.type_probs[i].ln())
}

/// One dataset's divergence from a cover mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverKlRow {
    pub dataset: CountVector,
    /// `KL(P_{W|S=s} ‖ Q_W)` with `Q_W` the uniform mixture over centres.
    pub exact_kl: f64,
    /// `−log Σ_i ω_i exp(−KL(P_{W|S=s} ‖ P_{W|S=s_i}))`.
    pub logsumexp: f64,
    /// `min_i { KL(P_{W|S=s} ‖ P_{W|S=s_i}) − log ω_i }`.
    pub min: f64,
}

fn center_rows(cfg: &ExperimentConfig, cover: &CoverSpec) -> Result<Vec<usize>> {
    if cover.centers.is_empty() {
        return input("cover has no centres");
    }
    cover
        .centers
        .iter()
        .map(|c| {
            cfg.space
                .index_of(c.counts())
                .ok_or_else(|| Error::Input(format!("centre {c} is not a type of this experiment")))
        })
        .collect()
}

/// Per-dataset KL to the uniform mixture of the centres' output distributions,
/// together with both mixture bounds.
pub fn per_dataset_kl_to_cover_mixture(cfg: &ExperimentConfig, cover: &CoverSpec) -> Result<Vec<CoverKlRow>> {
    let centers = center_rows(cfg, cover)?;
    let kernel = cfg.mechanism.kernel();
    let weight = 1.0 / centers.len() as f64;
    let rows: Vec<&[f64]> = centers.iter().map(|&c| kernel[c].as_slice()).collect();
    let mixture = crate::divergence::mixture_slices(&rows, &vec![weight; rows.len()]);
    let log_w = vec![weight.ln(); rows.len()];
    Ok((0..cfg.space.len())
        .into_par_iter()
        .map(|i| {
            let row = kernel[i].as_slice();
            let kls: Vec<f64> = rows.iter().map(|c| kl_slices(row, c)).collect();
            CoverKlRow {
                dataset: cfg.space.types()[i].clone(),
                exact_kl: kl_slices(row, &mixture),
                logsumexp: neg_log_sum_exp(&log_w, &kls),
                min: min_bound(&log_w, &kls),
            }
        })
        .collect())
}

/// `E_{P_S}` of an arbitrary per-type column, such as entries of [`per_dataset_kl_to_cover_mixture`].
pub fn expectation_over_types(cfg: &ExperimentConfig, values: &[f64]) -> Result<f64> {
    if values.len() != cfg.space.len() {
        return input("one value per type expected");
    }
    Ok(expectation(cfg, |i| values[i]))
}

fn population_risks(cfg: &ExperimentConfig) -> Vec<f64> {
    cfg.loss_table
        .rows()
        .iter()
        .map(|row| row.iter().zip(cfg.source.probs()).map(|(l, p)| l * p).sum())
        .collect()
}

fn empirical_risk(loss_row: &[f64], counts: &[u64], n: u64) -> f64 {
    loss_row
        .iter()
        .zip(counts)
        .map(|(l, &c)| l * c as f64)
        .sum::<f64>()
        / n as f64
}

/// `E[L_{P_Z}(W) − L_S(W)]`, summed exactly over types and hypotheses.
pub fn exact_expected_gen_error(cfg: &ExperimentConfig) -> Result<f64> {
    let pop = population_risks(cfg);
    let losses = cfg.loss_table.rows();
    Ok(expectation(cfg, |i| {
        let counts = cfg.space.types()[i].counts();
        cfg.mechanism
            .row(i)
            .iter()
            .enumerate()
            .filter(|(_, &q)| q > 0.0)
            .map(|(w, &q)| q * (pop[w] - empirical_risk(&losses[w], counts, cfg.n)))
            .sum()
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub standard_error: f64,
    pub samples: u64,
}

/// Sample mean of `gen(W, S)` over `mc_samples` draws `S ~ P_Z^N`, `W ~ P_{W|S}`.
/// Draw `i` uses stream `i` of a ChaCha20 generator keyed by the seed.
pub fn mc_expected_gen_error(cfg: &ExperimentConfig) -> Result<McEstimate> {
    let m = cfg.mc_samples;
    if m < MIN_MC_SAMPLES {
        return input(format!("mc_samples must be >= {MIN_MC_SAMPLES}, got {m}"));
    }
    let symbols = WeightedIndex::new(cfg.source.probs()).map_err(|e| Error::Input(e.to_string()))?;
    let pop = population_risks(cfg);
    let losses = cfg.loss_table.rows();
    let k = cfg.alphabet.size();
    let draws: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i);
            let mut counts = vec![0u64; k];
            for _ in 0..cfg.n {
                counts[symbols.sample(&mut rng)] += 1;
            }
            let t = cfg.space.index_of(&counts).expect("sampled counts form a type");
            let w = WeightedIndex::new(cfg.mechanism.row(t))
                .expect("kernel rows are distributions")
                .sample(&mut rng);
            pop[w] - empirical_risk(&losses[w], &counts, cfg.n)
        })
        .collect();
    let mean = pairwise_sum(&draws) / m as f64;
    let sq: Vec<f64> = draws.iter().map(|g| (g - mean) * (g - mean)).collect();
    let var = pairwise_sum(&sq) / (m - 1) as f64;
    Ok(McEstimate {
        estimate: mean,
        standard_error: (var / m as f64).sqrt(),
        samples: m,
    })
}

/// Outcome of checking one bound against the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub id: BoundId,
    pub value: f64,
    pub applicable: bool,
    /// The exact quantity the bound is compared with: the expected KL to the
    /// bound's own cover mixture for per-dataset bounds, `I(S;W)` otherwise.
    pub compared: f64,
    pub slack: f64,
    /// `value − max_s KL(P_{W|S=s} ‖ Q_W)` for per-dataset bounds.
    pub pointwise_slack: Option<f64>,
    /// Size of the cover the mixture was built from.
    pub cover_centers: Option<usize>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub exact_mi: f64,
    pub checks: Vec<BoundCheck>,
    pub exact_gen_error: f64,
    pub sigma: f64,
    /// `√(2σ² I(S;W) / N)`.
    pub gen_bound: f64,
    pub gen_slack: f64,
    pub all_pass: bool,
}

impl VerificationReport {
    pub fn per_bound_slack(&self) -> BTreeMap<BoundId, f64> {
        self.checks.iter().map(|c| (c.id, c.slack)).collect()
    }

    /// Applicable bounds with negative slack.
    pub fn violations(&self) -> Vec<BoundId> {
        self.checks.iter().filter(|c| c.applicable && !c.pass).map(|c| c.id).collect()
    }
}

/// The cover whose uniform mixture proves bound `id` at these parameters.
pub fn cover_for_bound(id: BoundId, privacy: PrivacyParams, alphabet_size: usize, n: u64, cap: TypeCap) -> Result<Option<CoverSpec>> {
    let grid = |regime: GridRegime, v: f64| optimal_grid_parameter(regime, v, alphabet_size, n).map(|g| g.t);
    Ok(Some(match (id, privacy) {
        (BoundId::Simple | BoundId::RefinedGeneral, _) => all_types_cover(alphabet_size, n, cap)?,
        (BoundId::CoverDp, PrivacyParams::EpsilonDp(e)) => {
            build_full_grid_cover(alphabet_size, n, grid(GridRegime::DpFull, e)?, cap)?
        }
        (BoundId::CoverGdp, PrivacyParams::MuGdp(m)) => {
            build_full_grid_cover(alphabet_size, n, grid(GridRegime::GdpFull, m)?, cap)?
        }
        (BoundId::RefinedDpSmall | BoundId::RefinedGdpSmall, _) => build_simplex_grid_cover(alphabet_size, n, 1, cap)?,
        (BoundId::RefinedDp, PrivacyParams::EpsilonDp(e)) => {
            build_simplex_grid_cover(alphabet_size, n, grid(GridRegime::DpFull, e)?, cap)?
        }
        (BoundId::RefinedGdp, PrivacyParams::MuGdp(m)) => {
            build_simplex_grid_cover(alphabet_size, n, grid(GridRegime::GdpFull, m)?, cap)?
        }
        _ => return Ok(None),
    }))
}

/// Checks every information bound that applies to the mechanism's claimed
/// guarantee, plus the generalization-error conversion.
pub fn run_verification(cfg: &ExperimentConfig, cap: TypeCap) -> Result<VerificationReport> {
    let exact_mi = exact_mutual_information(cfg)?;
    let privacy = cfg.mechanism.privacy();
    let k = cfg.alphabet.size();
    let mut checks = Vec::new();
    for r in bounds::information_bounds(privacy, k, cfg.n)? {
        let cover = if r.applicable {
            cover_for_bound(r.id, privacy, k, cfg.n, cap)?
        } else {
            None
        };
        let (compared, pointwise, centers) = match &cover {
            Some(c) => {
                let rows = per_dataset_kl_to_cover_mixture(cfg, c)?;
                let kls: Vec<f64> = rows.iter().map(|r| r.exact_kl).collect();
                let worst = max_f64(kls.iter().copied());
                (expectation_over_types(cfg, &kls)?, Some(r.value - worst), Some(c.centers.len()))
            }
            None => (exact_mi, None, None),
        };
        let slack = r.value - compared;
        let pass = slack >= -EXACT_TOLERANCE && pointwise.map_or(true, |p| p >= -EXACT_TOLERANCE);
        checks.push(BoundCheck {
            id: r.id,
            value: r.value,
            applicable: r.applicable,
            compared,
            slack,
            pointwise_slack: pointwise,
            cover_centers: centers,
            pass,
        });
    }
    let exact_gen_error = exact_expected_gen_error(cfg)?;
    let sigma = cfg.sigma();
    let gen_bound = bounds::gen_error_from_mi(sigma, cfg.n, exact_mi)?;
    let gen_slack = gen_bound - exact_gen_error.abs();
    let all_pass = checks.iter().filter(|c| c.applicable).all(|c| c.pass) && gen_slack >= -EXACT_TOLERANCE;
    Ok(VerificationReport {
        exact_mi,
        checks,
        exact_gen_error,
        sigma,
        gen_bound,
        gen_slack,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cap() -> TypeCap {
        TypeCap::default()
    }

    fn cfg(mech: Mechanism) -> ExperimentConfig {
        let src = SourceDistribution::uniform(mech.alphabet_size()).unwrap();
        ExperimentConfig::with_default_loss(src, mech, 1, 1000, cap()).unwrap()
    }

    /// Independent oracle: `H(W) − H(W|S)`.
    fn mi_by_entropies(c: &ExperimentConfig) -> f64 {
        let h = |row: &[f64]| -> f64 { row.iter().filter(|&&v| v > 0.0).map(|&v| -v * v.ln()).sum() };
        let p = c.type_probabilities();
        let mut marginal = vec![0.0; c.mechanism().hypothesis_count()];
        let mut cond = 0.0;
        for (i, row) in c.mechanism().kernel().iter().enumerate() {
            for (m, v) in marginal.iter_mut().zip(row) {
                *m += p[i] * v;
            }
            cond += p[i] * h(row);
        }
        h(&marginal) - cond
    }

    #[test]
    fn constant_mechanism_has_zero_information() {
        let c = cfg(Mechanism::constant(3, 4, 15, cap()).unwrap());
        assert!(exact_mutual_information(&c).unwrap().abs() < 1e-15);
        assert!(exact_expected_gen_error(&c).unwrap().abs() < 1e-12);
    }

    #[test]
    fn identity_information_is_type_entropy() {
        let c = cfg(Mechanism::identity(2, 4, cap()).unwrap());
        let mi = exact_mutual_information(&c).unwrap();
        let probs = [1.0, 4.0, 6.0, 4.0, 1.0].map(|v: f64| v / 16.0);
        let h: f64 = probs.iter().map(|p| -p * p.ln()).sum();
        assert!((mi - h).abs() < 1e-12);
        assert!((mi - 1.407_531_740_719_315_3).abs() < 1e-9);
        assert!((type_entropy(&c) - h).abs() < 1e-12);
    }

    #[test]
    fn exact_mi_matches_entropy_route() {
        for seed in 0..10 {
            let m = Mechanism::random_dirichlet(3, 5, 21, seed, cap()).unwrap();
            let c = cfg(m);
            let a = exact_mutual_information(&c).unwrap();
            assert!((a - mi_by_entropies(&c)).abs() < 1e-12);
        }
        let c = cfg(Mechanism::exponential(2, 8, 0.5, cap()).unwrap());
        let mi = exact_mutual_information(&c).unwrap();
        assert!(mi <= 9f64.ln());
        assert!((mi - mi_by_entropies(&c)).abs() < 1e-12);
    }

    #[test]
    fn cover_rows_examples() {
        let c = cfg(Mechanism::identity(3, 3, cap()).unwrap());
        let cover = all_types_cover(3, 3, cap()).unwrap();
        for r in per_dataset_kl_to_cover_mixture(&c, &cover).unwrap() {
            assert!((r.exact_kl - 10f64.ln()).abs() < 1e-12);
            assert!(r.exact_kl <= r.logsumexp + 1e-12 && r.logsumexp <= r.min + 1e-12);
        }
        let c = cfg(Mechanism::exponential(2, 6, 0.5, cap()).unwrap());
        let s = CountVector::new(vec![2, 4]).unwrap();
        let single = CoverSpec {
            centers: vec![s.clone()],
            ..build_full_grid_cover(2, 6, 1, cap()).unwrap()
        };
        let rows = per_dataset_kl_to_cover_mixture(&c, &single).unwrap();
        let own = rows.iter().find(|r| r.dataset == s).unwrap();
        assert_eq!(own.exact_kl, 0.0);
        let bad = CoverSpec {
            centers: vec![CountVector::new(vec![1, 1, 1]).unwrap()],
            ..single
        };
        assert!(per_dataset_kl_to_cover_mixture(&c, &bad).is_err());
    }

    #[test]
    fn cover_dp_average_min_is_below_formula() {
        let (k, n, eps) = (2, 12, 0.5);
        let c = cfg(Mechanism::exponential(k, n, eps, cap()).unwrap());
        let cover = cover_for_bound(BoundId::CoverDp, PrivacyParams::EpsilonDp(eps), k, n, cap())
            .unwrap()
            .unwrap();
        let rows = per_dataset_kl_to_cover_mixture(&c, &cover).unwrap();
        let mins: Vec<f64> = rows.iter().map(|r| r.min).collect();
        let avg = expectation_over_types(&c, &mins).unwrap();
        assert!(avg <= bounds::kl_bound_cover_dp(eps, k, n).unwrap().value);
    }

    #[test]
    fn gen_error_examples() {
        let src = SourceDistribution::uniform(2).unwrap();
        let m = Mechanism::exponential(2, 8, 1.0, cap()).unwrap();
        let c = ExperimentConfig::with_default_loss(src.clone(), m.clone(), 0, 1000, cap()).unwrap();
        let gen = exact_expected_gen_error(&c).unwrap();
        let mi = exact_mutual_information(&c).unwrap();
        assert!(gen.abs() <= bounds::gen_error_from_mi(c.sigma(), 8, mi).unwrap() + 1e-12);
        let flat = LossTable::new(vec![vec![0.3, 0.3]; m.hypothesis_count()]).unwrap();
        let c = ExperimentConfig::new(Alphabet::new(2).unwrap(), src, m, flat, None, 0, 1000, cap()).unwrap();
        assert!(exact_expected_gen_error(&c).unwrap().abs() < 1e-15);
    }

    #[test]
    fn mc_requires_samples_and_is_seeded() {
        let c = cfg(Mechanism::exponential(2, 6, 1.0, cap()).unwrap()).with_mc(3, 99);
        assert!(mc_expected_gen_error(&c).is_err());
        let c = c.with_mc(3, 500);
        let a = mc_expected_gen_error(&c).unwrap();
        let b = mc_expected_gen_error(&c).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        let other = mc_expected_gen_error(&c.clone().with_mc(4, 500)).unwrap();
        assert_ne!(a.estimate.to_bits(), other.estimate.to_bits());
    }

    #[test]
    fn constant_mechanism_mc_is_centred() {
        let c = cfg(Mechanism::constant(2, 6, 7, cap()).unwrap()).with_mc(11, 20_000);
        let est = mc_expected_gen_error(&c).unwrap();
        assert!(est.estimate.abs() <= 4.0 * est.standard_error);
    }

    #[test]
    fn verification_examples() {
        let c = cfg(Mechanism::exponential(2, 12, 0.5, cap()).unwrap());
        let report = run_verification(&c, cap()).unwrap();
        assert!(report.all_pass, "{report:?}");
        let c = cfg(Mechanism::identity(2, 8, cap()).unwrap());
        let report = run_verification(&c, cap()).unwrap();
        let simple = &report.checks[0];
        assert_eq!(simple.id, BoundId::Simple);
        // the all-types mixture meets the bound with equality here
        assert!(simple.slack >= -1e-12);
        assert!((report.exact_mi - type_entropy(&c)).abs() < 1e-12);
        let liar = cfg(Mechanism::identity(2, 12, cap())
            .unwrap()
            .with_privacy(PrivacyParams::EpsilonDp(0.1)));
        let report = run_verification(&liar, cap()).unwrap();
        assert!(!report.all_pass);
        assert!(!report.violations().is_empty());
    }

    #[test]
    fn config_parsing() {
        let dir = tempfile::tempdir().unwrap();
        let text = "# reference\nalphabet_size = 2\nn = 6\nmechanism = exponential\nepsilon = 0.5\nseed = 9\nmc_samples = 200\n";
        let c = ExperimentConfig::parse(text, dir.path(), cap()).unwrap();
        assert_eq!(c.n(), 6);
        assert_eq!(c.seed(), 9);
        assert_eq!(c.mechanism().privacy(), PrivacyParams::EpsilonDp(0.5));

        let m = Mechanism::random_dirichlet(2, 3, 4, 1, cap()).unwrap();
        m.save(&dir.path().join("k.csv")).unwrap();
        fs::write(dir.path().join("loss.csv"), "a,b\n0,1\n1,0\n0.5,0.5\n0.2,0.9\n").unwrap();
        let text = "source=0.3,0.7\nmechanism=k.csv\nloss=loss.csv\nsigma=0.5\n";
        let c = ExperimentConfig::parse(text, dir.path(), cap()).unwrap();
        assert_eq!(c.sigma(), 0.5);
        assert_eq!(c.mechanism(), &m);

        for bad in [
            "alphabet_size=2\nn=4\nepsilon=1\nmu=1\n",
            "alphabet_size=2\nn=4\nmechanism=exponential\n",
            "alphabet_size=2\nn=4\nbogus=1\n",
            "alphabet_size=3\nsource=0.5,0.5\nn=4\nmechanism=identity\n",
            "alphabet_size=2\nn=4\nmechanism=identity\nn=5\n",
        ] {
            assert!(ExperimentConfig::parse(bad, dir.path(), cap()).is_err(), "{bad}");
        }
    }
}
