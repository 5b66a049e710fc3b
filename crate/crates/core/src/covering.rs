//! Covers of the count lattice by a regular grid of cells.
//!
//! Each coordinate range is split into `t` contiguous integer intervals
//! `[lo + ⌈j·A/t⌉, lo + ⌈(j+1)·A/t⌉)` over its `A` atoms. An interval with
//! `m` atoms has its centre at offset `⌊m/2⌋` (the central atom when `m` is
//! odd, the centre of the interval enlarged by one atom when `m` is even), so
//! every atom is within `m/2 ≤ N/(2t) + 1/2` of the centre.
//!
//! Three constructions are provided:
//!
//! - [`build_full_grid_cover`]: all `t^(|Z|−1)` cells over the first `|Z|−1` counts.
//! - [`build_simplex_grid_cover`]: only cells that contain a feasible dataset
//!   (at most `S_{|Z|−1}(t)` of them).
//! - [`build_typical_cover`]: a `|Z|`-dimensional grid over the strong typical set.
//!
//! Grid centres whose first `|Z|−1` counts overshoot `N` are lowered one unit
//! at a time on the largest coordinate. Lowering coordinates never increases
//! the distance to any feasible dataset in the cell, and [`verify_cover`]
//! re-checks the certified radius exhaustively anyway.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use num_integer::binomial;
use rayon::prelude::*;

use crate::error::{input, Result};
use crate::reduce::pairwise_sum;
use crate::types::{
    l1_half, type_distribution, CountVector, SourceDistribution, TypeCap, TypeSpace,
};

/// Which construction produced a cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoverKind {
    FullGrid,
    SimplexGrid,
    TypicalGrid,
}

impl CoverKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CoverKind::FullGrid => "full_grid",
            CoverKind::SimplexGrid => "simplex_grid",
            CoverKind::TypicalGrid => "typical_grid",
        }
    }
}

impl std::str::FromStr for CoverKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full_grid" | "full" => Ok(CoverKind::FullGrid),
            "simplex_grid" | "simplex" => Ok(CoverKind::SimplexGrid),
            "typical_grid" | "typical" => Ok(CoverKind::TypicalGrid),
            other => input(format!("unknown cover kind {other:?}")),
        }
    }
}

/// Strong typical set `{ s : |T_s(a) − P_Z(a)| ≤ ε where P_Z(a) > 0, N(a|s) = 0 otherwise }`.
#[derive(Debug, Clone, PartialEq)]
pub struct TypicalSetSpec {
    epsilon: f64,
    source: SourceDistribution,
    n: u64,
}

impl TypicalSetSpec {
    pub fn new(epsilon: f64, source: SourceDistribution, n: u64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return input(format!("typical-set epsilon must be positive, got {epsilon}"));
        }
        if n < 1 {
            return input("typical set needs n >= 1");
        }
        Ok(TypicalSetSpec { epsilon, source, n })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn source(&self) -> &SourceDistribution {
        &self.source
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn contains(&self, s: &CountVector) -> bool {
        s.n() == self.n && typical_counts(s.counts(), self.source.probs(), self.epsilon)
    }
}

fn typical_counts(counts: &[u64], probs: &[f64], epsilon: f64) -> bool {
    let n: u64 = counts.iter().sum();
    counts.iter().zip(probs).all(|(&c, &p)| {
        if p > 0.0 {
            (c as f64 / n as f64 - p).abs() <= epsilon
        } else {
            c == 0
        }
    })
}

/// A set of centre datasets plus the analytic radius guaranteed by the construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverSpec {
    pub kind: CoverKind,
    pub alphabet_size: usize,
    pub n: u64,
    /// Grid parameter (cells per dimension).
    pub t: u64,
    pub centers: Vec<CountVector>,
    /// Analytic covering radius; this is the value bound formulas use.
    pub certified_radius: f64,
    /// `ε` of the typical set for typical covers, 0 otherwise.
    pub typical_epsilon: f64,
    /// The set that is covered, for typical covers.
    pub typical_set: Option<TypicalSetSpec>,
}

/// Outcome of an exhaustive radius check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverCheck {
    /// `max_s min_i d(s, s_i)` over the covered datasets.
    pub achieved_radius: u64,
    pub covered: usize,
    pub verified: bool,
}

/// Number of grid cells of a `t^K` grid needed to cover the region under the
/// `(K−1)`-simplex: `(t+K−1)! / (K! (t−1)!)`.
pub fn simplex_hypercube_count(k: u64, t: u64) -> BigUint {
    binomial(BigUint::from(t + k - 1), BigUint::from(k))
}

/// `(t + (K−1)/2)^K / K!`, an upper bound on [`simplex_hypercube_count`].
pub fn simplex_hypercube_count_upper(k: u64, t: u64) -> f64 {
    let base = t as f64 + (k as f64 - 1.0) / 2.0;
    let factorial: f64 = (1..=k).map(|j| j as f64).product();
    base.powi(k as i32) / factorial
}

/// Checks `(t+M)!/(t−1)! ≤ (t + M/2)^(M+1)` exactly, after scaling both
/// sides by `2^(M+1)`.
pub fn rising_factorial_bound_holds(t: u64, m: u64) -> bool {
    assert!(t >= 1, "t must be positive");
    let lhs: BigUint = (t..=t + m).map(BigUint::from).product::<BigUint>() << (m + 1);
    let rhs = num_traits::pow(BigUint::from(2 * t + m), (m + 1) as usize);
    lhs <= rhs
}

/// `ε = √(log N / N)`.
pub fn typical_epsilon(n: u64) -> Result<f64> {
    if n < 2 {
        return input(format!("typical epsilon needs n >= 2, got {n}"));
    }
    let n = n as f64;
    Ok((n.ln() / n).sqrt())
}

/// Membership in the strong typical set.
pub fn is_typical(s: &CountVector, source: &SourceDistribution, epsilon: f64) -> Result<bool> {
    if s.dim() != source.dim() {
        return input(format!("type has {} symbols, source has {}", s.dim(), source.dim()));
    }
    Ok(typical_counts(s.counts(), source.probs(), epsilon))
}

/// Exact probability of the strong typical set under `source^n`.
pub fn typical_mass(source: &SourceDistribution, n: u64, epsilon: f64, cap: TypeCap) -> Result<f64> {
    let space = TypeSpace::new(source.dim(), n, cap)?;
    let probs = type_distribution(&space, source)?;
    let masses: Vec<f64> = space
        .types()
        .iter()
        .zip(&probs)
        .map(|(t, &p)| if typical_counts(t.counts(), source.probs(), epsilon) { p } else { 0.0 })
        .collect();
    Ok(pairwise_sum(&masses))
}

/// Split of the atoms `lo, lo+1, …, lo+atoms−1` into `parts` contiguous intervals.
#[derive(Debug, Clone, Copy)]
struct Partition {
    lo: u64,
    atoms: u64,
    parts: u64,
}

impl Partition {
    fn start(&self, j: u64) -> u64 {
        self.lo + ((j as u128 * self.atoms as u128).div_ceil(self.parts as u128)) as u64
    }

    fn interval(&self, j: u64) -> (u64, u64) {
        (self.start(j), self.start(j + 1))
    }

    fn center(&self, j: u64) -> u64 {
        let (a, b) = self.interval(j);
        a + (b - a) / 2
    }

    fn cell_of(&self, x: u64) -> u64 {
        (((x - self.lo) as u128 * self.parts as u128) / self.atoms as u128) as u64
    }
}

fn check_grid_args(alphabet_size: usize, n: u64, t: u64) -> Result<()> {
    if alphabet_size < 2 {
        return input("covers need an alphabet of size >= 2");
    }
    if n < 1 {
        return input("covers need n >= 1");
    }
    if t < 1 || t > n {
        return input(format!("grid parameter t={t} outside [1, {n}]"));
    }
    Ok(())
}

/// Lowers the largest coordinates (lowest index on ties) until they sum to at most `n`.
fn project_to_feasible(coords: &mut [u64], n: u64) {
    let mut total: u64 = coords.iter().sum();
    while total > n {
        let (idx, _) = coords
            .iter()
            .enumerate()
            .fold((0, 0), |best, (i, &c)| if c > best.1 { (i, c) } else { best });
        coords[idx] -= 1;
        total -= 1;
    }
}

fn grid_cover(alphabet_size: usize, n: u64, t: u64, simplex_only: bool, cap: TypeCap) -> Result<CoverSpec> {
    check_grid_args(alphabet_size, n, t)?;
    let dims = alphabet_size - 1;
    if !simplex_only {
        let cells = num_traits::pow(BigUint::from(t), dims);
        if cells > BigUint::from(cap.0) {
            return Err(crate::Error::Resource {
                requested: cells.to_string(),
                cap: cap.0,
            });
        }
    } else if simplex_hypercube_count(dims as u64, t) > BigUint::from(cap.0) {
        return Err(crate::Error::Resource {
            requested: simplex_hypercube_count(dims as u64, t).to_string(),
            cap: cap.0,
        });
    }
    let part = Partition {
        lo: 0,
        atoms: n + 1,
        parts: t,
    };
    let mut seen = HashSet::new();
    let mut centers = Vec::new();
    let mut cell = vec![0u64; dims];
    // odometer over cell indices; in simplex mode a cell is kept only when its
    // lowest corner is feasible
    loop {
        let corner: u64 = cell.iter().map(|&j| part.start(j)).sum();
        if !simplex_only || corner <= n {
            let mut coords: Vec<u64> = cell.iter().map(|&j| part.center(j)).collect();
            project_to_feasible(&mut coords, n);
            let rest = n - coords.iter().sum::<u64>();
            coords.push(rest);
            if seen.insert(coords.clone()) {
                centers.push(CountVector::new(coords)?);
            }
        }
        let mut d = dims;
        loop {
            if d == 0 {
                let certified = (n as f64 / (2.0 * t as f64) + 0.5) * dims as f64;
                return Ok(CoverSpec {
                    kind: if simplex_only { CoverKind::SimplexGrid } else { CoverKind::FullGrid },
                    alphabet_size,
                    n,
                    t,
                    centers,
                    certified_radius: certified,
                    typical_epsilon: 0.0,
                    typical_set: None,
                });
            }
            d -= 1;
            cell[d] += 1;
            if cell[d] < t {
                break;
            }
            cell[d] = 0;
        }
    }
}

/// Full `t^(|Z|−1)` grid over the first `|Z|−1` counts.
pub fn build_full_grid_cover(alphabet_size: usize, n: u64, t: u64, cap: TypeCap) -> Result<CoverSpec> {
    grid_cover(alphabet_size, n, t, false, cap)
}

/// Grid restricted to the cells that intersect the feasible region `Σ_{i<|Z|} N_i ≤ N`.
pub fn build_simplex_grid_cover(alphabet_size: usize, n: u64, t: u64, cap: TypeCap) -> Result<CoverSpec> {
    grid_cover(alphabet_size, n, t, true, cap)
}

/// The degenerate cover with every type as a centre (one atom per cell, `t = N + 1`).
pub fn all_types_cover(alphabet_size: usize, n: u64, cap: TypeCap) -> Result<CoverSpec> {
    let space = TypeSpace::new(alphabet_size, n, cap)?;
    Ok(CoverSpec {
        kind: CoverKind::SimplexGrid,
        alphabet_size,
        n,
        t: n + 1,
        centers: space.types().to_vec(),
        certified_radius: 0.0,
        typical_epsilon: 0.0,
        typical_set: None,
    })
}

/// Largest admissible grid parameter of the typical cover, `⌊2√(N log N)⌋`.
pub fn typical_grid_limit(n: u64) -> u64 {
    let n = n as f64;
    (2.0 * (n * n.ln()).sqrt()).floor() as u64
}

/// Grid of `t^|Z|` cells over the bounding box of the strong typical set with
/// `ε = √(log N / N)`; each non-empty cell contributes the typical type nearest
/// (in L1) to its geometric centre.
pub fn build_typical_cover(source: &SourceDistribution, n: u64, t: u64, cap: TypeCap) -> Result<CoverSpec> {
    let epsilon = typical_epsilon(n)?;
    let limit = typical_grid_limit(n);
    if t < 1 || t > limit {
        return input(format!("grid parameter t={t} outside [1, {limit}]"));
    }
    let k = source.dim();
    let space = TypeSpace::new(k, n, cap)?;
    let typical: Vec<&CountVector> = space
        .types()
        .iter()
        .filter(|s| typical_counts(s.counts(), source.probs(), epsilon))
        .collect();
    if typical.is_empty() {
        return input("typical set is empty");
    }
    let partitions: Vec<Partition> = (0..k)
        .map(|a| {
            let lo = typical.iter().map(|s| s.counts()[a]).min().unwrap();
            let hi = typical.iter().map(|s| s.counts()[a]).max().unwrap();
            Partition {
                lo,
                atoms: hi - lo + 1,
                parts: t,
            }
        })
        .collect();
    let mut cells: BTreeMap<Vec<u64>, (u64, &CountVector)> = BTreeMap::new();
    for s in typical {
        let cell: Vec<u64> = s
            .counts()
            .iter()
            .zip(&partitions)
            .map(|(&c, p)| p.cell_of(c))
            .collect();
        let offset: u64 = s
            .counts()
            .iter()
            .zip(&partitions)
            .zip(&cell)
            .map(|((&c, p), &j)| c.abs_diff(p.center(j)))
            .sum();
        // types arrive in lexicographic order, so strict < keeps the smallest on ties
        cells
            .entry(cell)
            .and_modify(|best| {
                if offset < best.0 {
                    *best = (offset, s);
                }
            })
            .or_insert((offset, s));
    }
    let centers = cells.into_values().map(|(_, s)| s.clone()).collect();
    let nf = n as f64;
    Ok(CoverSpec {
        kind: CoverKind::TypicalGrid,
        alphabet_size: k,
        n,
        t,
        centers,
        certified_radius: (nf * nf.ln()).sqrt() * k as f64 / t as f64,
        typical_epsilon: epsilon,
        typical_set: Some(TypicalSetSpec::new(epsilon, source.clone(), n)?),
    })
}

/// Exhaustively measures the covering radius over the datasets the cover is
/// meant to cover (all types, or the typical ones for typical covers).
pub fn verify_cover(cover: &CoverSpec, cap: TypeCap) -> Result<CoverCheck> {
    if cover.centers.is_empty() {
        return input("cover has no centres");
    }
    let space = TypeSpace::new(cover.alphabet_size, cover.n, cap)?;
    for c in &cover.centers {
        if c.dim() != cover.alphabet_size || c.n() != cover.n {
            return input(format!("centre {c} is not a type of (|Z|={}, N={})", cover.alphabet_size, cover.n));
        }
    }
    let covered: Vec<&CountVector> = match &cover.typical_set {
        Some(set) => space.types().iter().filter(|s| set.contains(s)).collect(),
        None => space.types().iter().collect(),
    };
    let achieved = covered
        .par_iter()
        .map(|s| {
            cover
                .centers
                .iter()
                .map(|c| l1_half(s.counts(), c.counts()))
                .min()
                .unwrap()
        })
        .max()
        .unwrap_or(0);
    Ok(CoverCheck {
        achieved_radius: achieved,
        covered: covered.len(),
        verified: achieved as f64 <= cover.certified_radius + 1e-9,
    })
}

/// Regimes with a closed-form optimal grid parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridRegime {
    /// `t = εN`, valid range `[1, N]`.
    DpFull,
    /// `t = √(|Z|−1) μN`, valid range `[1, N]`.
    GdpFull,
    /// `t = √(N log N) ε`, valid range `[1, 2√(N log N)]`.
    DpTypical,
    /// `t = √(|Z| N log N) μ`, valid range `[1, 2√(N log N)]`.
    GdpTypical,
}

/// Rounded, clamped grid parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridChoice {
    pub t: u64,
    /// Unrounded optimiser.
    pub raw: f64,
    pub clamped: bool,
}

pub fn optimal_grid_parameter(
    regime: GridRegime,
    privacy_parameter: f64,
    alphabet_size: usize,
    n: u64,
) -> Result<GridChoice> {
    if !(privacy_parameter > 0.0 && privacy_parameter.is_finite()) {
        return input(format!("privacy parameter must be positive, got {privacy_parameter}"));
    }
    if n < 1 {
        return input("grid parameter needs n >= 1");
    }
    let nf = n as f64;
    let nlogn = nf * nf.ln();
    let (raw, upper) = match regime {
        GridRegime::DpFull => (privacy_parameter * nf, n),
        GridRegime::GdpFull => ((alphabet_size as f64 - 1.0).sqrt() * privacy_parameter * nf, n),
        GridRegime::DpTypical | GridRegime::GdpTypical => {
            if n < 2 {
                return input("typical grid parameter needs n >= 2");
            }
            let raw = match regime {
                GridRegime::DpTypical => nlogn.sqrt() * privacy_parameter,
                _ => (alphabet_size as f64 * nlogn).sqrt() * privacy_parameter,
            };
            (raw, typical_grid_limit(n).max(1))
        }
    };
    let rounded = raw.round();
    let t = rounded.clamp(1.0, upper as f64) as u64;
    Ok(GridChoice {
        t,
        raw,
        clamped: rounded < 1.0 || rounded > upper as f64,
    })
}
