//! Closed-form bound catalog.
//!
//! KL/MI bounds are in nats; generalization-error bounds are in loss units.
//! Regime boundaries are closed on the side the inequalities are stated
//! (`ε ≤ 1` includes `ε = 1`). Asymptotic expressions carry unspecified
//! constants and are reported with `asymptotic_only = true`; they never take
//! part in [`best_bound`] or in any assertion.

use std::f64::consts::{E, PI};
use std::fmt;

use crate::error::{input, Error, Result};
use crate::privacy::PrivacyParams;

/// Every bound branch, in tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundId {
    /// `(|Z|−1) log(N+1)`, any algorithm.
    Simple,
    /// Full-grid cover, ε-DP, `ε ≤ 1`.
    CoverDp,
    /// Full-grid cover, μ-GDP, `μ ≤ 1/√(|Z|−1)`.
    CoverGdp,
    /// Simplex cover with a single cell, ε-DP, `ε ≤ 1/N`.
    RefinedDpSmall,
    /// Simplex cover, ε-DP, `1/N < ε ≤ 1`.
    RefinedDp,
    /// Simplex cover with a single cell, μ-GDP, `μ ≤ 1/(N√(|Z|−1))`.
    RefinedGdpSmall,
    /// Simplex cover, μ-GDP, `1/(N√(|Z|−1)) < μ ≤ 1/√(|Z|−1)`.
    RefinedGdp,
    /// One centre per type with exact type count, any algorithm.
    RefinedGeneral,
    /// Typical-set cover, ε-DP, `ε ≤ 2`.
    TypicalDp,
    /// Typical-set cover, ε-DP, `ε > 2`.
    TypicalDpLarge,
    /// Typical-set cover, μ-GDP, `μ ≤ 2/√|Z|`.
    TypicalGdp,
    /// Typical-set cover, μ-GDP, `μ > 2/√|Z|`.
    TypicalGdpLarge,
    /// `√(2σ² I / N)` for σ-sub-Gaussian losses.
    GenErrorFromMi,
    /// `√((2σ²/N)(KL + log(1/β)))` with probability `1 − β`.
    PacBayes,
    /// `√(2σ²(|Z|−1) log(N+1)/N)`.
    GenSimple,
    /// `√(2σ²|Z| log(γ√(N log N))/N)`, shape only.
    GenPrivateTypical,
    /// `√(2σ²(|Z|−1) log(γN)/N)`, shape only.
    GenPrivateCover,
    /// `((|Z|−1)/2) log(N/|Z|) + 2|Z|` for large `N`.
    MultinomialEntropy,
}

impl BoundId {
    pub const ALL: [BoundId; 18] = [
        BoundId::Simple,
        BoundId::CoverDp,
        BoundId::CoverGdp,
        BoundId::RefinedDpSmall,
        BoundId::RefinedDp,
        BoundId::RefinedGdpSmall,
        BoundId::RefinedGdp,
        BoundId::RefinedGeneral,
        BoundId::TypicalDp,
        BoundId::TypicalDpLarge,
        BoundId::TypicalGdp,
        BoundId::TypicalGdpLarge,
        BoundId::GenErrorFromMi,
        BoundId::PacBayes,
        BoundId::GenSimple,
        BoundId::GenPrivateTypical,
        BoundId::GenPrivateCover,
        BoundId::MultinomialEntropy,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::Simple => "simple",
            BoundId::CoverDp => "cover_dp",
            BoundId::CoverGdp => "cover_gdp",
            BoundId::RefinedDpSmall => "refined_dp_small",
            BoundId::RefinedDp => "refined_dp",
            BoundId::RefinedGdpSmall => "refined_gdp_small",
            BoundId::RefinedGdp => "refined_gdp",
            BoundId::RefinedGeneral => "refined_general",
            BoundId::TypicalDp => "typical_dp",
            BoundId::TypicalDpLarge => "typical_dp_large",
            BoundId::TypicalGdp => "typical_gdp",
            BoundId::TypicalGdpLarge => "typical_gdp_large",
            BoundId::GenErrorFromMi => "gen_error_from_mi",
            BoundId::PacBayes => "pac_bayes",
            BoundId::GenSimple => "gen_simple",
            BoundId::GenPrivateTypical => "gen_private_typical",
            BoundId::GenPrivateCover => "gen_private_cover",
            BoundId::MultinomialEntropy => "multinomial_entropy",
        }
    }

    /// True for the expressions stated only up to unspecified constants.
    pub fn is_asymptotic(self) -> bool {
        matches!(
            self,
            BoundId::GenSimple | BoundId::GenPrivateTypical | BoundId::GenPrivateCover | BoundId::MultinomialEntropy
        )
    }

    /// True for bounds on a KL divergence or on `I(S;W)` (nats).
    pub fn is_information_bound(self) -> bool {
        !self.is_asymptotic() && !matches!(self, BoundId::GenErrorFromMi | BoundId::PacBayes)
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Inputs a bound was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub alphabet_size: usize,
    pub n: u64,
    pub privacy: PrivacyParams,
    pub sigma: Option<f64>,
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub id: BoundId,
    pub value: f64,
    pub applicable: bool,
    pub asymptotic_only: bool,
    pub regime_note: String,
    pub params: BoundParams,
}

fn report(id: BoundId, value: f64, applicable: bool, note: impl Into<String>, params: BoundParams) -> BoundReport {
    BoundReport {
        id,
        value,
        applicable,
        asymptotic_only: id.is_asymptotic(),
        regime_note: note.into(),
        params,
    }
}

fn check_space(alphabet_size: usize, n: u64) -> Result<()> {
    if alphabet_size < 2 {
        return input(format!("alphabet size must be >= 2, got {alphabet_size}"));
    }
    if n < 1 {
        return input("n must be >= 1");
    }
    Ok(())
}

fn params(alphabet_size: usize, n: u64, privacy: PrivacyParams) -> BoundParams {
    BoundParams {
        alphabet_size,
        n,
        privacy,
        sigma: None,
        beta: None,
    }
}

/// Stirling correction `½ log(2πK)`.
fn stirling(k: f64) -> f64 {
    0.5 * (2.0 * PI * k).ln()
}

/// `(|Z|−1) log(N+1)` for any algorithm.
pub fn kl_bound_simple(alphabet_size: usize, n: u64) -> Result<BoundReport> {
    check_space(alphabet_size, n)?;
    let k = (alphabet_size - 1) as f64;
    Ok(report(
        BoundId::Simple,
        k * (n as f64).ln_1p(),
        true,
        "any algorithm",
        params(alphabet_size, n, PrivacyParams::None),
    ))
}

/// `(|Z|−1) log(1 + eεN)` for ε-DP algorithms with `ε ≤ 1`.
pub fn kl_bound_cover_dp(epsilon: f64, alphabet_size: usize, n: u64) -> Result<BoundReport> {
    check_space(alphabet_size, n)?;
    let privacy = PrivacyParams::epsilon_dp(epsilon)?;
    let k = (alphabet_size - 1) as f64;
    let value = k * (E * epsilon * n as f64).ln_1p();
    let applicable = epsilon <= 1.0;
    let note = if applicable {
        "epsilon <= 1"
    } else {
        "epsilon > 1: no better than the simple bound"
    };
    Ok(report(BoundId::CoverDp, value, applicable, note, params(alphabet_size, n, privacy)))
}

/// `½(|Z|−1) log(1 + e(|Z|−1)μ²N²)` for μ-GDP algorithms with `μ ≤ 1/√(|Z|−1)`.
pub fn kl_bound_cover_gdp(mu: f64, alphabet_size: usize, n: u64) -> Result<BoundReport> {
    check_space(alphabet_size, n)?;
    let privacy = PrivacyParams::mu_gdp(mu)?;
    let k = (alphabet_size - 1) as f64;
    let nf = n as f64;
    let value = 0.5 * k * (E * k * mu * mu * nf * nf).ln_1p();
    let applicable = mu <= 1.0 / k.sqrt();
    let note = if applicable {
        "mu <= 1/sqrt(|Z|-1)"
    } else {
        "mu > 1/sqrt(|Z|-1): no better than the simple bound"
    };
    Ok(report(BoundId::CoverGdp, value, applicable, note, params(alphabet_size, n, privacy)))
}

/// Simplex-restricted cover bound; the branch is selected by the privacy regime.
pub fn kl_bound_refined(privacy: PrivacyParams, alphabet_size: usize, n: u64) -> Result<BoundReport> {
    check_space(alphabet_size, n)?;
    let k = (alphabet_size - 1) as f64;
    let nf = n as f64;
    let stir = stirling(k);
    let general = || k * (nf / k).ln_1p() + k - stir;
    let (id, value, note) = match privacy {
        PrivacyParams::EpsilonDp(eps) if eps <= 1.0 / nf => (
            BoundId::RefinedDpSmall,
            k * (1.0 + eps * nf) - stir,
            "epsilon <= 1/N: single cell",
        ),
        PrivacyParams::EpsilonDp(eps) if eps <= 1.0 => (
            BoundId::RefinedDp,
            k * (2.0 * eps * nf / k).ln_1p() + k * (E * E / 2.0).ln() - stir,
            "1/N < epsilon <= 1",
        ),
        PrivacyParams::MuGdp(mu) if mu <= 1.0 / (nf * k.sqrt()) => (
            BoundId::RefinedGdpSmall,
            k * (1.0 + k / 2.0 * mu * mu * nf * nf) - stir,
            "mu <= 1/(N sqrt(|Z|-1)): single cell",
        ),
        PrivacyParams::MuGdp(mu) if mu <= 1.0 / k.sqrt() => (
            BoundId::RefinedGdp,
            k * (2.0 * mu * nf / k.sqrt()).ln_1p() + k * (E.powf(1.5) / 2.0).ln() - stir,
            "1/(N sqrt(|Z|-1)) < mu <= 1/sqrt(|Z|-1)",
        ),
        PrivacyParams::None => (BoundId::RefinedGeneral, general(), "any algorithm: one centre per type"),
        _ => (
            BoundId::RefinedGeneral,
            general(),
            "privacy too weak for the grid: one centre per type",
        ),
    };
    Ok(report(id, value, true, note, params(alphabet_size, n, privacy)))
}

/// Bound on `I(S;W)` from a cover of the strong typical set. Valid for the
/// first moment of the per-dataset KL only.
pub fn mi_bound_typical(privacy: PrivacyParams, alphabet_size: usize, n: u64) -> Result<BoundReport> {
    check_space(alphabet_size, n)?;
    if n < 2 {
        return input("typical-set bound needs n >= 2");
    }
    let z = alphabet_size as f64;
    let nf = n as f64;
    let root = (nf * nf.ln()).sqrt();
    let (id, value, note) = match privacy {
        PrivacyParams::None => {
            return Err(Error::Value("typical-set bound requires a privacy guarantee".into()));
        }
        PrivacyParams::EpsilonDp(eps) if eps <= 2.0 => (
            BoundId::TypicalDp,
            z * (E * eps * root).ln_1p() + 2.0 * z * eps / nf,
            "epsilon <= 2; only valid for the first moment",
        ),
        PrivacyParams::EpsilonDp(eps) => (
            BoundId::TypicalDpLarge,
            z * (2.0 * root).ln_1p() + 2.0 * z * eps / nf,
            "epsilon > 2; only valid for the first moment",
        ),
        PrivacyParams::MuGdp(mu) if mu <= 2.0 / z.sqrt() => (
            BoundId::TypicalGdp,
            z / 2.0 * (E * z * mu * mu * nf * nf.ln()).ln_1p() + z * mu * mu,
            "mu <= 2/sqrt(|Z|); only valid for the first moment",
        ),
        PrivacyParams::MuGdp(mu) => (
            BoundId::TypicalGdpLarge,
            z * (2.0 * root).ln_1p() + z * mu * mu,
            "mu > 2/sqrt(|Z|); only valid for the first moment",
        ),
    };
    Ok(report(id, value, true, note, params(alphabet_size, n, privacy)))
}

/// `√(2σ² b / N)` for a σ-sub-Gaussian loss and `I(S;W) ≤ b`.
pub fn gen_error_from_mi(sigma: f64, n: u64, bound: f64) -> Result<f64> {
    if !(sigma >= 0.0) || !(bound >= 0.0) {
        return input(format!("sigma and bound must be non-negative, got {sigma} and {bound}"));
    }
    if n < 1 {
        return input("n must be >= 1");
    }
    Ok((2.0 * sigma * sigma * bound / n as f64).sqrt())
}

/// High-probability bound `√((2σ²/N)(KL + log(1/β)))`.
pub fn pac_bayes_gen_bound(sigma: f64, n: u64, kl_value: f64, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return input(format!("beta must lie in (0, 1), got {beta}"));
    }
    if !(sigma >= 0.0) || !(kl_value >= 0.0) {
        return input("sigma and kl must be non-negative");
    }
    if n < 1 {
        return input("n must be >= 1");
    }
    Ok((2.0 * sigma * sigma / n as f64 * (kl_value - beta.ln())).sqrt())
}

/// Asymptotic expressions, evaluated for reporting only.
pub fn asymptotic_report(sigma: f64, gamma: f64, alphabet_size: usize, n: u64) -> Result<Vec<BoundReport>> {
    check_space(alphabet_size, n)?;
    if n < 2 {
        return input("asymptotic report needs n >= 2");
    }
    if !(sigma >= 0.0) || !(gamma > 0.0) {
        return input("sigma must be non-negative and gamma positive");
    }
    let z = alphabet_size as f64;
    let k = z - 1.0;
    let nf = n as f64;
    let var2 = 2.0 * sigma * sigma;
    let p = BoundParams {
        alphabet_size,
        n,
        privacy: PrivacyParams::None,
        sigma: Some(sigma),
        beta: None,
    };
    let private = BoundParams {
        privacy: PrivacyParams::EpsilonDp(gamma),
        ..p
    };
    let sqrt_pos = |x: f64| x.max(0.0).sqrt();
    Ok(vec![
        report(
            BoundId::GenSimple,
            (var2 * k * nf.ln_1p() / nf).sqrt(),
            true,
            "exact composition of the simple bound; reported with the asymptotic family",
            p,
        ),
        report(
            BoundId::GenPrivateTypical,
            sqrt_pos(var2 * z * (gamma * (nf * nf.ln()).sqrt()).ln() / nf),
            false,
            "shape only: constant unspecified; gamma-DP with gamma <= 2 or gamma-GDP with gamma <= 2/sqrt(|Z|)",
            private,
        ),
        report(
            BoundId::GenPrivateCover,
            sqrt_pos(var2 * k * (gamma * nf).ln() / nf),
            false,
            "shape only: constant unspecified",
            private,
        ),
        report(
            BoundId::MultinomialEntropy,
            k / 2.0 * (nf / z).ln() + 2.0 * z,
            false,
            "for N sufficiently large; threshold unspecified",
            p,
        ),
    ])
}

/// The information bounds that apply to `privacy`, in tie-break order.
pub fn information_bounds(privacy: PrivacyParams, alphabet_size: usize, n: u64) -> Result<Vec<BoundReport>> {
    let mut out = vec![kl_bound_simple(alphabet_size, n)?];
    match privacy {
        PrivacyParams::EpsilonDp(eps) => out.push(kl_bound_cover_dp(eps, alphabet_size, n)?),
        PrivacyParams::MuGdp(mu) => out.push(kl_bound_cover_gdp(mu, alphabet_size, n)?),
        PrivacyParams::None => {}
    }
    out.push(kl_bound_refined(privacy, alphabet_size, n)?);
    if privacy != PrivacyParams::None && n >= 2 {
        out.push(mi_bound_typical(privacy, alphabet_size, n)?);
    }
    for r in &mut out {
        r.params.privacy = privacy;
    }
    Ok(out)
}

/// Winner of [`best_bound`] plus its generalization-error conversion.
#[derive(Debug, Clone, PartialEq)]
pub struct BestBound {
    pub winner: BoundReport,
    pub gen_error: f64,
}

/// Smallest applicable non-asymptotic information bound, converted to a
/// generalization-error bound. Ties go to the earlier [`BoundId`].
pub fn best_bound(privacy: PrivacyParams, sigma: f64, alphabet_size: usize, n: u64) -> Result<BestBound> {
    let mut best: Option<BoundReport> = None;
    for r in information_bounds(privacy, alphabet_size, n)? {
        if !r.applicable || r.asymptotic_only {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => r.value < b.value || (r.value == b.value && r.id < b.id),
        };
        if better {
            best = Some(r);
        }
    }
    let mut winner = best.expect("the simple bound always applies");
    winner.regime_note = format!("winner: {} ({})", winner.id, winner.regime_note);
    winner.params.sigma = Some(sigma);
    let gen_error = gen_error_from_mi(sigma, n, winner.value)?;
    Ok(BestBound { winner, gen_error })
}

/// Limit of `[cover_dp − refined_dp]` as `εN → ∞`:
/// `(|Z|−1) log((|Z|−1)/e) + ½ log(2π(|Z|−1))`.
pub fn cover_gap_constant(alphabet_size: usize) -> f64 {
    let k = (alphabet_size - 1) as f64;
    k * (k / E).ln() + stirling(k)
}

/// One documented branch of the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: BoundId,
    pub formula: &'static str,
    pub regime: &'static str,
    pub quantity: &'static str,
    pub asymptotic: bool,
}

/// Every bound branch with its formula and regime, in [`BoundId`] order.
pub fn catalog() -> Vec<CatalogEntry> {
    BoundId::ALL
        .iter()
        .map(|&id| {
            let (formula, regime, quantity) = match id {
                BoundId::Simple => ("(|Z|-1) log(N+1)", "any algorithm", "KL(P_W|S=s || Q_W)"),
                BoundId::CoverDp => ("(|Z|-1) log(1 + e eps N)", "eps-DP, eps <= 1", "KL(P_W|S=s || Q_W)"),
                BoundId::CoverGdp => (
                    "(1/2)(|Z|-1) log(1 + e (|Z|-1) mu^2 N^2)",
                    "mu-GDP, mu <= 1/sqrt(|Z|-1)",
                    "KL(P_W|S=s || Q_W)",
                ),
                BoundId::RefinedDpSmall => (
                    "(|Z|-1)(1 + eps N) - (1/2) log(2 pi (|Z|-1))",
                    "eps-DP, eps <= 1/N",
                    "KL(P_W|S=s || Q_W)",
                ),
                BoundId::RefinedDp => (
                    "(|Z|-1) log(1 + 2 eps N/(|Z|-1)) + (|Z|-1) log(e^2/2) - (1/2) log(2 pi (|Z|-1))",
                    "eps-DP, 1/N < eps <= 1",
                    "KL(P_W|S=s || Q_W)",
                ),
                BoundId::RefinedGdpSmall => (
                    "(|Z|-1)(1 + ((|Z|-1)/2) mu^2 N^2) - (1/2) log(2 pi (|Z|-1))",
                    "mu-GDP, mu <= 1/(N sqrt(|Z|-1))",
                    "KL(P_W|S=s || Q_W)",
                ),
                BoundId::RefinedGdp => (
                    "(|Z|-1) log(1 + 2 mu N/sqrt(|Z|-1)) + (|Z|-1) log(e^(3/2)/2) - (1/2) log(2 pi (|Z|-1))",
                    "mu-GDP, 1/(N sqrt(|Z|-1)) < mu <= 1/sqrt(|Z|-1)",
                    "KL(P_W|S=s || Q_W)",
                ),
                BoundId::RefinedGeneral => (
                    "(|Z|-1) log(1 + N/(|Z|-1)) + (|Z|-1) - (1/2) log(2 pi (|Z|-1))",
                    "any algorithm, or eps > 1, or mu > 1/sqrt(|Z|-1)",
                    "KL(P_W|S=s || Q_W)",
                ),
                BoundId::TypicalDp => (
                    "|Z| log(1 + e eps sqrt(N log N)) + 2 |Z| eps/N",
                    "eps-DP, eps <= 2",
                    "I(S;W)",
                ),
                BoundId::TypicalDpLarge => (
                    "|Z| log(1 + 2 sqrt(N log N)) + 2 |Z| eps/N",
                    "eps-DP, eps > 2",
                    "I(S;W)",
                ),
                BoundId::TypicalGdp => (
                    "(|Z|/2) log(1 + e |Z| mu^2 N log N) + |Z| mu^2",
                    "mu-GDP, mu <= 2/sqrt(|Z|)",
                    "I(S;W)",
                ),
                BoundId::TypicalGdpLarge => (
                    "|Z| log(1 + 2 sqrt(N log N)) + |Z| mu^2",
                    "mu-GDP, mu > 2/sqrt(|Z|)",
                    "I(S;W)",
                ),
                BoundId::GenErrorFromMi => (
                    "sqrt(2 sigma^2 I(S;W) / N)",
                    "loss sigma-sub-Gaussian for every hypothesis",
                    "|E gen(W,S)|",
                ),
                BoundId::PacBayes => (
                    "sqrt((2 sigma^2/N)(KL + log(1/beta)))",
                    "with probability >= 1 - beta, 0 < beta < 1",
                    "gen(W,S)",
                ),
                BoundId::GenSimple => (
                    "sqrt(2 sigma^2 (|Z|-1) log(N+1)/N)",
                    "any algorithm",
                    "|E gen(W,S)|",
                ),
                BoundId::GenPrivateTypical => (
                    "sqrt(2 sigma^2 |Z| log(gamma sqrt(N log N))/N)",
                    "gamma-DP with gamma <= 2, or gamma-GDP with gamma <= 2/sqrt(|Z|); up to constants",
                    "|E gen(W,S)|",
                ),
                BoundId::GenPrivateCover => (
                    "sqrt(2 sigma^2 (|Z|-1) log(gamma N)/N)",
                    "gamma-DP or gamma-GDP; up to constants",
                    "|E gen(W,S)|",
                ),
                BoundId::MultinomialEntropy => (
                    "((|Z|-1)/2) log(N/|Z|) + 2|Z|",
                    "any algorithm, N sufficiently large",
                    "I(S;W)",
                ),
            };
            CatalogEntry {
                id,
                formula,
                regime,
                quantity,
                asymptotic: id.is_asymptotic(),
            }
        })
        .collect()
}
