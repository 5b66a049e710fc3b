//! KL divergence on finite outcome sets and the mixture variational bounds.
//!
//! For a mixture `Q = Σ_b ω_b Q_b`:
//!
//! ```text
//! D(P‖Q) ≤ −log Σ_b ω_b exp(−D(P‖Q_b)) ≤ min_b { D(P‖Q_b) − log ω_b }
//! ```
//!
//! The middle term is the value of the Jensen objective
//! `Σ_b φ_b (log φ_b − log ω_b + D(P‖Q_b))` at its minimiser, the softmax
//! responsibilities of [`optimal_responsibilities`].
//!
//! Support violations are values, not errors: `D(P‖Q) = +∞` whenever `P`
//! puts mass where `Q` does not.

use crate::error::{input, Error, Result};

const SUM_TOLERANCE: f64 = 1e-12;

/// Probability vector over `m` outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(probs, SUM_TOLERANCE)
    }

    /// Like [`new`](Self::new) but with a caller-chosen normalisation tolerance.
    pub fn with_tolerance(probs: Vec<f64>, tolerance: f64) -> Result<Self> {
        if probs.is_empty() {
            return input("distribution over an empty outcome set");
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return input("probabilities must be finite and non-negative");
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > tolerance {
            return input(format!("probabilities sum to {total}, not 1"));
        }
        Ok(DiscreteDistribution { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Finite mixture `Σ_b ω_b Q_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSpec {
    components: Vec<DiscreteDistribution>,
    weights: Vec<f64>,
}

impl MixtureSpec {
    pub fn new(components: Vec<DiscreteDistribution>, weights: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return input("mixture needs at least one component");
        }
        if components.len() != weights.len() {
            return input(format!(
                "{} components but {} weights",
                components.len(),
                weights.len()
            ));
        }
        let m = components[0].len();
        if components.iter().any(|c| c.len() != m) {
            return input("mixture components have different outcome counts");
        }
        if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return input("mixture weights must be positive");
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return input(format!("mixture weights sum to {total}, not 1"));
        }
        Ok(MixtureSpec {
            components,
            weights,
        })
    }

    /// Equal weights over the given components.
    pub fn uniform(components: Vec<DiscreteDistribution>) -> Result<Self> {
        let b = components.len().max(1);
        MixtureSpec::new(components, vec![1.0 / b as f64; b])
    }

    pub fn components(&self) -> &[DiscreteDistribution] {
        &self.components
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn outcome_count(&self) -> usize {
        self.components[0].len()
    }
}

/// `Σ_{i: p_i > 0} p_i log(p_i / q_i)` on raw slices; `+∞` on support violations.
pub(crate) fn kl_slices(p: &[f64], q: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi > 0.0 {
            if qi <= 0.0 {
                return f64::INFINITY;
            }
            acc += pi * (pi / qi).ln();
        }
    }
    // rounding can push a true zero slightly negative
    acc.max(0.0)
}

/// Kullback–Leibler divergence `D(p‖q)` in nats.
pub fn kl_divergence(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    if p.len() != q.len() {
        return input(format!("KL between sizes {} and {}", p.len(), q.len()));
    }
    Ok(kl_slices(p.probs(), q.probs()))
}

pub(crate) fn mixture_slices(components: &[&[f64]], weights: &[f64]) -> Vec<f64> {
    let m = components[0].len();
    let mut out = vec![0.0; m];
    for (c, &w) in components.iter().zip(weights) {
        for (o, &v) in out.iter_mut().zip(c.iter()) {
            *o += w * v;
        }
    }
    out
}

/// Pointwise weighted sum of the mixture components.
pub fn mixture_distribution(mix: &MixtureSpec) -> Result<DiscreteDistribution> {
    let rows: Vec<&[f64]> = mix.components.iter().map(|c| c.probs()).collect();
    DiscreteDistribution::with_tolerance(mixture_slices(&rows, &mix.weights), 1e-10)
}

fn check_dims(p: &DiscreteDistribution, mix: &MixtureSpec) -> Result<()> {
    if p.len() != mix.outcome_count() {
        return input(format!(
            "distribution has {} outcomes, mixture has {}",
            p.len(),
            mix.outcome_count()
        ));
    }
    Ok(())
}

fn component_kls(p: &DiscreteDistribution, mix: &MixtureSpec) -> Vec<f64> {
    mix.components
        .iter()
        .map(|c| kl_slices(p.probs(), c.probs()))
        .collect()
}

/// `−log Σ_b exp(log ω_b − D_b)`, shifted by the maximum exponent.
pub(crate) fn neg_log_sum_exp(log_weights: &[f64], kls: &[f64]) -> f64 {
    let exponents: Vec<f64> = log_weights.iter().zip(kls).map(|(lw, d)| lw - d).collect();
    let top = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    let s: f64 = exponents.iter().map(|e| (e - top).exp()).sum();
    -(top + s.ln())
}

pub(crate) fn min_bound(log_weights: &[f64], kls: &[f64]) -> f64 {
    log_weights
        .iter()
        .zip(kls)
        .map(|(lw, d)| d - lw)
        .fold(f64::INFINITY, f64::min)
}

/// `−log Σ_b ω_b exp(−D(p‖Q_b))`.
pub fn mixture_kl_bound_logsumexp(p: &DiscreteDistribution, mix: &MixtureSpec) -> Result<f64> {
    check_dims(p, mix)?;
    let log_w: Vec<f64> = mix.weights.iter().map(|w| w.ln()).collect();
    Ok(neg_log_sum_exp(&log_w, &component_kls(p, mix)))
}

/// `min_b { D(p‖Q_b) − log ω_b }`.
pub fn mixture_kl_bound_min(p: &DiscreteDistribution, mix: &MixtureSpec) -> Result<f64> {
    check_dims(p, mix)?;
    let log_w: Vec<f64> = mix.weights.iter().map(|w| w.ln()).collect();
    Ok(min_bound(&log_w, &component_kls(p, mix)))
}

/// Responsibilities `φ*_b ∝ ω_b exp(−D(p‖Q_b))` minimising the Jensen objective.
pub fn optimal_responsibilities(p: &DiscreteDistribution, mix: &MixtureSpec) -> Result<Vec<f64>> {
    check_dims(p, mix)?;
    let kls = component_kls(p, mix);
    let exponents: Vec<f64> = mix
        .weights
        .iter()
        .zip(&kls)
        .map(|(w, d)| w.ln() - d)
        .collect();
    let top = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return Err(Error::Value("no absolutely continuous component".into()));
    }
    let unnorm: Vec<f64> = exponents.iter().map(|e| (e - top).exp()).collect();
    let z: f64 = unnorm.iter().sum();
    Ok(unnorm.into_iter().map(|u| u / z).collect())
}

/// Jensen upper bound on `D(p‖Q)` for arbitrary responsibilities `phi` on the simplex:
/// `Σ_b φ_b (log φ_b − log ω_b + D(p‖Q_b))`, with `0·(…) = 0`.
pub fn variational_objective(
    p: &DiscreteDistribution,
    mix: &MixtureSpec,
    phi: &[f64],
) -> Result<f64> {
    check_dims(p, mix)?;
    if phi.len() != mix.weights.len() {
        return input("responsibilities and weights differ in length");
    }
    if phi.iter().any(|f| !f.is_finite() || *f < 0.0) {
        return input("responsibilities must be non-negative");
    }
    let kls = component_kls(p, mix);
    Ok(phi
        .iter()
        .zip(&mix.weights)
        .zip(&kls)
        .map(|((&f, &w), &d)| if f == 0.0 { 0.0 } else { f * (f.ln() - w.ln() + d) })
        .sum())
}
