//! KL-stability of private algorithms and finite mechanisms to test it on.
//!
//! Two datasets at distance `k` differ in `k` instances. Group privacy turns an
//! ε-DP (μ-GDP) guarantee into `kε`-DP (`kμ`-GDP), and the KL divergence
//! between the induced outputs is then at most `kε·tanh(kε/2)` (`k²μ²/2`).

use std::fmt;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::divergence::kl_slices;
use crate::error::{input, Error, Result};
use crate::types::{l1_half, TypeCap, TypeSpace};

/// Tolerance on the row sums of a kernel.
pub const ROW_SUM_TOLERANCE: f64 = 1e-10;

/// Absolute slack allowed when comparing observed KL values against the envelope.
pub const STABILITY_TOLERANCE: f64 = 1e-9;

/// Privacy guarantee of an algorithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrivacyParams {
    None,
    EpsilonDp(f64),
    MuGdp(f64),
}

impl PrivacyParams {
    pub fn epsilon_dp(epsilon: f64) -> Result<Self> {
        positive("epsilon", epsilon).map(PrivacyParams::EpsilonDp)
    }

    pub fn mu_gdp(mu: f64) -> Result<Self> {
        positive("mu", mu).map(PrivacyParams::MuGdp)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            PrivacyParams::None => "none",
            PrivacyParams::EpsilonDp(_) => "eps_dp",
            PrivacyParams::MuGdp(_) => "mu_gdp",
        }
    }

    pub fn value(&self) -> Option<f64> {
        match *self {
            PrivacyParams::None => None,
            PrivacyParams::EpsilonDp(v) | PrivacyParams::MuGdp(v) => Some(v),
        }
    }

    /// Inverse of [`kind`](Self::kind) plus [`value`](Self::value).
    pub fn from_kind(kind: &str, value: Option<f64>) -> Result<Self> {
        match (kind, value) {
            ("none", _) => Ok(PrivacyParams::None),
            ("eps_dp", Some(v)) => Self::epsilon_dp(v),
            ("mu_gdp", Some(v)) => Self::mu_gdp(v),
            (k @ ("eps_dp" | "mu_gdp"), None) => input(format!("privacy kind {k} needs a value")),
            (other, _) => input(format!("unknown privacy kind {other:?}")),
        }
    }
}

impl fmt::Display for PrivacyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrivacyParams::None => f.write_str("none"),
            PrivacyParams::EpsilonDp(e) => write!(f, "eps_dp({e})"),
            PrivacyParams::MuGdp(m) => write!(f, "mu_gdp({m})"),
        }
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        input(format!("{name} must be positive and finite, got {v}"))
    }
}

/// Upper bound on `KL(A(s) ‖ A(s'))` for datasets at distance `k`.
pub fn kl_stability_bound(privacy: PrivacyParams, k: u64) -> Result<f64> {
    let k = k as f64;
    match privacy {
        PrivacyParams::None => Err(Error::Value("no privacy guarantee".into())),
        _ if k == 0.0 => Ok(0.0),
        PrivacyParams::EpsilonDp(eps) => {
            let x = k * eps;
            Ok((x * (x / 2.0).tanh()).min(x * x / 2.0).min(x))
        }
        PrivacyParams::MuGdp(mu) => Ok(k * k * mu * mu / 2.0),
    }
}

/// KL between the outputs of the Gaussian count mechanism `s + N(0, (2/μ²) I)`
/// on two datasets at distance `k` chosen so that `‖Δm‖² = 2k²` (worst case).
pub fn gaussian_mechanism_neighbor_kl(mu: f64, k: u64) -> Result<f64> {
    positive("mu", mu)?;
    let k = k as f64;
    let delta_sq = 2.0 * k * k;
    let variance = 2.0 / (mu * mu);
    Ok(delta_sq / (2.0 * variance))
}

/// GDP parameter of noisy SGD via the central limit theorem:
/// `μ = (B/N)·√(T(e^{1/ν²} − 1))`.
pub fn gdp_param_noisy_sgd(batch: u64, n: u64, iterations: u64, noise_scale: f64) -> Result<f64> {
    if batch == 0 || n == 0 || iterations == 0 {
        return input("batch, n and iterations must be positive");
    }
    positive("noise_scale", noise_scale)?;
    let growth = (1.0 / (noise_scale * noise_scale)).exp_m1();
    Ok(batch as f64 / n as f64 * (iterations as f64 * growth).sqrt())
}

/// A randomized learning algorithm `P_{W|S}` on a finite alphabet, given by its
/// kernel over types. Row `i` is the output distribution on the `i`-th type in
/// lexicographic order; the algorithm is assumed to depend on the data through
/// its type only.
#[derive(Debug, Clone, PartialEq)]
pub struct Mechanism {
    alphabet_size: usize,
    n: u64,
    kernel: Vec<Vec<f64>>,
    privacy: PrivacyParams,
    description: String,
}

impl Mechanism {
    pub fn new(
        alphabet_size: usize,
        n: u64,
        kernel: Vec<Vec<f64>>,
        privacy: PrivacyParams,
        description: impl Into<String>,
    ) -> Result<Self> {
        let rows = crate::types::num_types(alphabet_size, n);
        if rows != kernel.len().into() {
            return input(format!(
                "kernel has {} rows but (|Z|={alphabet_size}, N={n}) has {rows} types",
                kernel.len()
            ));
        }
        let width = kernel[0].len();
        if width == 0 {
            return input("kernel rows must be non-empty");
        }
        for (i, row) in kernel.iter().enumerate() {
            if row.len() != width {
                return input(format!("kernel row {i} has {} entries, expected {width}", row.len()));
            }
            if row.iter().any(|&v| !(v >= 0.0 && v.is_finite())) {
                return input(format!("kernel row {i} has a negative or non-finite entry"));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                return input(format!("kernel row {i} sums to {sum}"));
            }
        }
        Ok(Mechanism {
            alphabet_size,
            n,
            kernel,
            privacy,
            description: description.into(),
        })
    }

    /// Exponential mechanism with hypotheses = types and utility `−d(s, w)`:
    /// row `s` is proportional to `exp(−ε d(s, w) / 2)`.
    pub fn exponential(alphabet_size: usize, n: u64, epsilon: f64, cap: TypeCap) -> Result<Self> {
        let privacy = PrivacyParams::epsilon_dp(epsilon)?;
        let space = TypeSpace::new(alphabet_size, n, cap)?;
        let kernel = space
            .types()
            .par_iter()
            .map(|s| {
                let weights: Vec<f64> = space
                    .types()
                    .iter()
                    .map(|w| (-epsilon * l1_half(s.counts(), w.counts()) as f64 / 2.0).exp())
                    .collect();
                let total: f64 = weights.iter().sum();
                weights.into_iter().map(|w| w / total).collect()
            })
            .collect();
        Mechanism::new(
            alphabet_size,
            n,
            kernel,
            privacy,
            format!("exponential mechanism over types, epsilon={epsilon}"),
        )
    }

    /// Deterministic release of the type itself.
    pub fn identity(alphabet_size: usize, n: u64, cap: TypeCap) -> Result<Self> {
        let len = cap.check(alphabet_size, n)?;
        let kernel = (0..len)
            .map(|i| {
                let mut row = vec![0.0; len];
                row[i] = 1.0;
                row
            })
            .collect();
        Mechanism::new(alphabet_size, n, kernel, PrivacyParams::None, "identity")
    }

    /// Output independent of the data, uniform over `hypotheses` values.
    pub fn constant(alphabet_size: usize, n: u64, hypotheses: usize, cap: TypeCap) -> Result<Self> {
        if hypotheses == 0 {
            return input("constant mechanism needs at least one hypothesis");
        }
        let len = cap.check(alphabet_size, n)?;
        let row = vec![1.0 / hypotheses as f64; hypotheses];
        Mechanism::new(alphabet_size, n, vec![row; len], PrivacyParams::None, "constant")
    }

    /// Rows drawn independently from the symmetric Dirichlet(1) distribution.
    /// Row `i` uses stream `i` of a ChaCha20 generator keyed by `seed`.
    pub fn random_dirichlet(
        alphabet_size: usize,
        n: u64,
        hypotheses: usize,
        seed: u64,
        cap: TypeCap,
    ) -> Result<Self> {
        if hypotheses == 0 {
            return input("random mechanism needs at least one hypothesis");
        }
        let len = cap.check(alphabet_size, n)?;
        let kernel = (0..len)
            .map(|i| {
                let mut rng = ChaCha20Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                let draws: Vec<f64> = (0..hypotheses).map(|_| Exp1.sample(&mut rng)).collect();
                let total: f64 = draws.iter().sum();
                draws.into_iter().map(|d: f64| d / total).collect()
            })
            .collect();
        Mechanism::new(
            alphabet_size,
            n,
            kernel,
            PrivacyParams::None,
            format!("dirichlet(1) rows, seed={seed}"),
        )
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn kernel(&self) -> &[Vec<f64>] {
        &self.kernel
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.kernel[i]
    }

    pub fn type_count(&self) -> usize {
        self.kernel.len()
    }

    pub fn hypothesis_count(&self) -> usize {
        self.kernel[0].len()
    }

    pub fn privacy(&self) -> PrivacyParams {
        self.privacy
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// Same kernel, different claimed guarantee.
    pub fn with_privacy(mut self, privacy: PrivacyParams) -> Self {
        self.privacy = privacy;
        self
    }

    /// Writes the kernel as CSV (header `w0,w1,…`) and the metadata to `<path>.meta`.
    pub fn save(&self, path: &Path) -> Result<()> {
        let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
        self.write_kernel_csv(file)?;
        fs::write(meta_path(path), self.meta_text()).map_err(|e| io_err(&meta_path(path), e))
    }

    /// Reads a kernel saved by [`save`](Self::save).
    pub fn load(path: &Path) -> Result<Self> {
        let meta = fs::read_to_string(meta_path(path)).map_err(|e| io_err(&meta_path(path), e))?;
        let file = fs::File::open(path).map_err(|e| io_err(path, e))?;
        Self::from_parts(file, &meta)
    }

    pub fn write_kernel_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let header: Vec<String> = (0..self.hypothesis_count()).map(|j| format!("w{j}")).collect();
        w.write_record(&header).map_err(csv_err)?;
        for row in &self.kernel {
            w.write_record(row.iter().map(|v| v.to_string())).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::Input(e.to_string()))
    }

    pub fn meta_text(&self) -> String {
        let mut text = format!(
            "alphabet_size={}\nn={}\nprivacy={}\n",
            self.alphabet_size,
            self.n,
            self.privacy.kind()
        );
        if let Some(v) = self.privacy.value() {
            text.push_str(&format!("value={v}\n"));
        }
        text.push_str(&format!("description={}\n", self.description.replace('\n', " ")));
        text
    }

    /// Builds a mechanism from a kernel CSV stream and metadata text.
    pub fn from_parts<R: Read>(kernel_csv: R, meta: &str) -> Result<Self> {
        let mut alphabet_size = None;
        let mut n = None;
        let mut kind = "none".to_string();
        let mut value = None;
        let mut description = String::new();
        for line in meta.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (key, val) = line
                .split_once('=')
                .ok_or_else(|| Error::Input(format!("metadata line {line:?} is not key=value")))?;
            let val = val.trim();
            match key.trim() {
                "alphabet_size" => alphabet_size = Some(parse_num::<usize>("alphabet_size", val)?),
                "n" => n = Some(parse_num::<u64>("n", val)?),
                "privacy" => kind = val.to_string(),
                "value" => value = Some(parse_num::<f64>("value", val)?),
                "description" => description = val.to_string(),
                other => return input(format!("unknown metadata key {other:?}")),
            }
        }
        let alphabet_size = alphabet_size.ok_or_else(|| Error::Input("metadata lacks alphabet_size".into()))?;
        let n = n.ok_or_else(|| Error::Input("metadata lacks n".into()))?;
        let privacy = PrivacyParams::from_kind(&kind, value)?;
        let mut reader = csv::Reader::from_reader(kernel_csv);
        let mut kernel = Vec::new();
        for record in reader.records() {
            let record = record.map_err(csv_err)?;
            let row = record
                .iter()
                .map(|v| parse_num::<f64>("kernel entry", v.trim()))
                .collect::<Result<Vec<f64>>>()?;
            kernel.push(row);
        }
        if kernel.is_empty() {
            return input("kernel file has no rows");
        }
        Mechanism::new(alphabet_size, n, kernel, privacy, description)
    }
}

fn meta_path(path: &Path) -> PathBuf {
    let mut p = path.as_os_str().to_owned();
    p.push(".meta");
    PathBuf::from(p)
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Input(format!("{}: {e}", path.display()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Input(format!("csv: {e}"))
}

fn parse_num<T: std::str::FromStr>(what: &str, raw: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| Error::Input(format!("{what}: cannot parse {raw:?}")))
}

/// One line of a stability audit.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRow {
    pub k: u64,
    pub max_kl: f64,
    pub bound: f64,
    pub pass: bool,
    /// Row indices `(s, s')` attaining `max_kl`.
    pub worst_pair: Option<(usize, usize)>,
}

/// For every distance `k = 1..=N`, the largest `KL(row_s ‖ row_s')` over
/// ordered type pairs at distance exactly `k`, checked against the envelope.
pub fn verify_kl_stability(mech: &Mechanism, cap: TypeCap) -> Result<Vec<StabilityRow>> {
    if mech.privacy == PrivacyParams::None {
        return Err(Error::Value("no privacy guarantee".into()));
    }
    let space = TypeSpace::new(mech.alphabet_size, mech.n, cap)?;
    let diameter = space.diameter() as usize;
    let types = space.types();
    // per-row maxima, merged in row order so ties resolve identically on any pool
    let per_row: Vec<Vec<(f64, usize)>> = (0..types.len())
        .into_par_iter()
        .map(|i| {
            let mut best = vec![(f64::NEG_INFINITY, usize::MAX); diameter + 1];
            for (j, other) in types.iter().enumerate() {
                let d = l1_half(types[i].counts(), other.counts()) as usize;
                if d == 0 {
                    continue;
                }
                let kl = kl_slices(&mech.kernel[i], &mech.kernel[j]);
                if kl > best[d].0 || best[d].1 == usize::MAX {
                    best[d] = (kl, j);
                }
            }
            best
        })
        .collect();
    (1..=diameter)
        .map(|k| {
            let mut max_kl = f64::NEG_INFINITY;
            let mut pair = None;
            for (i, row) in per_row.iter().enumerate() {
                let (kl, j) = row[k];
                if j != usize::MAX && (pair.is_none() || kl > max_kl) {
                    max_kl = kl;
                    pair = Some((i, j));
                }
            }
            let bound = kl_stability_bound(mech.privacy, k as u64)?;
            Ok(StabilityRow {
                k: k as u64,
                max_kl,
                bound,
                pass: max_kl <= bound + STABILITY_TOLERANCE,
                worst_pair: pair,
            })
        })
        .collect()
}
