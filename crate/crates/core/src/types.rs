//! Method-of-types primitives.
//!
//! A dataset of `n` instances over an alphabet of size `k` is identified with
//! its count vector (the type scaled by `n`). Everything combinatorial is kept
//! in integers; frequencies are a derived view.

use std::collections::HashMap;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{ToPrimitive, Zero};

use crate::error::{input, Error, Result};

/// Default cap on the number of types any exhaustive routine will enumerate.
pub const DEFAULT_TYPE_CAP: u64 = 10_000_000;

/// Environment variable overriding [`DEFAULT_TYPE_CAP`].
pub const TYPE_CAP_ENV: &str = "GENBOUND_TYPE_CAP";

/// Upper limit on the size of an exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypeCap(pub u64);

impl Default for TypeCap {
    fn default() -> Self {
        TypeCap(DEFAULT_TYPE_CAP)
    }
}

impl TypeCap {
    /// Reads [`TYPE_CAP_ENV`], falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TYPE_CAP_ENV) {
            Ok(raw) => raw
                .trim()
                .parse::<u64>()
                .map(TypeCap)
                .map_err(|_| Error::Input(format!("{TYPE_CAP_ENV}={raw:?} is not an integer"))),
            Err(_) => Ok(TypeCap::default()),
        }
    }

    /// Returns the number of types as a `usize` when it fits under the cap.
    pub fn check(self, alphabet_size: usize, n: u64) -> Result<usize> {
        let count = num_types(alphabet_size, n);
        match count.to_u64() {
            Some(c) if c <= self.0 => Ok(c as usize),
            _ => Err(Error::Resource {
                requested: count.to_string(),
                cap: self.0,
            }),
        }
    }
}

/// Finite alphabet `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    size: usize,
    labels: Vec<String>,
}

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 {
            return input(format!("alphabet size must be at least 2, got {size}"));
        }
        Ok(Alphabet {
            size,
            labels: (0..size).map(|i| i.to_string()).collect(),
        })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut alphabet = Alphabet::new(labels.len())?;
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return input(format!("duplicate alphabet label {l:?}"));
            }
        }
        alphabet.labels = labels;
        Ok(alphabet)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Histogram of a dataset over the alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CountVector {
    counts: Vec<u64>,
    n: u64,
}

impl CountVector {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return input("count vector must have at least one entry");
        }
        let n = counts.iter().sum();
        if n == 0 {
            return input("count vector must describe a non-empty dataset");
        }
        Ok(CountVector { counts, n })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    /// The empirical distribution `counts / n`.
    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.n as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }
}

impl fmt::Display for CountVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for CountVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let counts = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Input(format!("bad count {tok:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        CountVector::new(counts)
    }
}

/// The i.i.d. source `P_Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceDistribution {
    probs: Vec<f64>,
}

impl SourceDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return input("source distribution needs at least two symbols");
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return input("source probabilities must be finite and non-negative");
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return input(format!("source probabilities sum to {total}, not 1"));
        }
        Ok(SourceDistribution { probs })
    }

    pub fn uniform(size: usize) -> Result<Self> {
        if size < 2 {
            return input("source distribution needs at least two symbols");
        }
        Ok(SourceDistribution {
            probs: vec![1.0 / size as f64; size],
        })
    }

    /// Loads a two-line CSV: a header naming the symbols, then the probabilities.
    pub fn from_csv<R: Read>(reader: R) -> Result<(Alphabet, Self)> {
        let (labels, rows) = read_labelled_csv(reader)?;
        if rows.len() != 1 {
            return input(format!("source CSV must have exactly one data row, found {}", rows.len()));
        }
        let alphabet = Alphabet::with_labels(labels)?;
        let source = SourceDistribution::new(rows.into_iter().next().unwrap())?;
        Ok((alphabet, source))
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }
}

/// Loss values `ℓ(w, a)`, one row per hypothesis and one column per symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct LossTable {
    rows: Vec<Vec<f64>>,
}

impl LossTable {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        validate_loss_rows(&rows)?;
        Ok(LossTable { rows })
    }

    /// `ℓ(w, a) = 1 − T_w(a)`, where hypothesis `w` is identified with the
    /// `w`-th type of the lexicographic enumeration.
    pub fn one_minus_type_frequency(space: &TypeSpace) -> Self {
        let rows = space
            .types()
            .iter()
            .map(|t| t.frequencies().iter().map(|f| 1.0 - f).collect())
            .collect();
        LossTable { rows }
    }

    /// Loads a CSV with a header naming the symbols and one row per hypothesis.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let (_, rows) = read_labelled_csv(reader)?;
        LossTable::new(rows)
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn hypothesis_count(&self) -> usize {
        self.rows.len()
    }

    pub fn alphabet_size(&self) -> usize {
        self.rows[0].len()
    }

    pub fn sigma(&self) -> f64 {
        sigma_sub_gaussian(&self.rows).expect("validated at construction")
    }
}

fn validate_loss_rows(rows: &[Vec<f64>]) -> Result<()> {
    if rows.is_empty() {
        return input("loss table has no hypotheses");
    }
    let width = rows[0].len();
    if width < 2 {
        return input("loss table needs at least two symbols");
    }
    for (w, row) in rows.iter().enumerate() {
        if row.len() != width {
            return input(format!("loss row {w} has {} entries, expected {width}", row.len()));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return input(format!("loss row {w} has a non-finite entry"));
        }
    }
    Ok(())
}

fn read_labelled_csv<R: Read>(reader: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let labels: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Input(format!("csv header: {e}")))?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Input(format!("csv: {e}")))?;
        let row = record
            .iter()
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| Error::Input(format!("csv value {v:?} is not a number")))
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != labels.len() {
            return input("csv row length differs from header");
        }
        rows.push(row);
    }
    Ok((labels, rows))
}

/// Type of a sequence of symbol indices.
pub fn type_of(sequence: &[usize], alphabet: &Alphabet) -> Result<CountVector> {
    if sequence.is_empty() {
        return input("sequence must be non-empty");
    }
    let mut counts = vec![0u64; alphabet.size()];
    for &a in sequence {
        if a >= alphabet.size() {
            return input(format!("symbol index {a} out of range for |Z|={}", alphabet.size()));
        }
        counts[a] += 1;
    }
    CountVector::new(counts)
}

/// Minimum number of instances to change to turn `s` into `s2`:
/// half the L1 distance between the count vectors.
pub fn dataset_distance(s: &CountVector, s2: &CountVector) -> Result<u64> {
    if s.dim() != s2.dim() || s.n() != s2.n() {
        return input(format!(
            "distance needs equal dimension and size, got ({}, n={}) vs ({}, n={})",
            s.dim(),
            s.n(),
            s2.dim(),
            s2.n()
        ));
    }
    Ok(l1_half(s.counts(), s2.counts()))
}

pub(crate) fn l1_half(a: &[u64], b: &[u64]) -> u64 {
    // the two vectors share a total, so the L1 distance is even
    a.iter().zip(b).map(|(&x, &y)| x.abs_diff(y)).sum::<u64>() / 2
}

/// Exact number of types: `binom(n + k − 1, k − 1)`.
pub fn num_types(alphabet_size: usize, n: u64) -> BigUint {
    if alphabet_size == 0 {
        return BigUint::zero();
    }
    let k = BigUint::from(alphabet_size - 1);
    binomial(BigUint::from(n) + &k, k)
}

/// `(n + 1)^(k − 1)`, the classical upper bound on the number of types.
pub fn num_types_upper_bound(alphabet_size: usize, n: u64) -> BigUint {
    num_traits::pow(BigUint::from(n + 1), alphabet_size.saturating_sub(1))
}

/// Lexicographically ordered stream of all count vectors with `k` entries summing to `n`.
#[derive(Debug, Clone)]
pub struct TypeIter {
    next: Option<Vec<u64>>,
}

impl Iterator for TypeIter {
    type Item = CountVector;

    fn next(&mut self) -> Option<CountVector> {
        let current = self.next.take()?;
        let k = current.len();
        // rightmost position (before the last) whose suffix still holds mass
        let mut successor = None;
        let mut suffix = current[k - 1];
        for i in (0..k - 1).rev() {
            if suffix > 0 {
                let mut s = current.clone();
                s[i] += 1;
                for c in &mut s[i + 1..] {
                    *c = 0;
                }
                s[k - 1] = suffix - 1;
                successor = Some(s);
                break;
            }
            suffix += current[i];
        }
        self.next = successor;
        let n = current.iter().sum();
        Some(CountVector { counts: current, n })
    }
}

/// Enumerates every type of size `n`, failing when the count exceeds `cap`.
pub fn enumerate_types(alphabet_size: usize, n: u64, cap: TypeCap) -> Result<TypeIter> {
    if alphabet_size < 1 || n < 1 {
        return input("enumeration needs alphabet_size >= 1 and n >= 1");
    }
    cap.check(alphabet_size, n)?;
    let mut first = vec![0u64; alphabet_size];
    first[alphabet_size - 1] = n;
    Ok(TypeIter { next: Some(first) })
}

/// All types of a fixed `(k, n)` in lexicographic order, with reverse lookup.
///
/// Row `i` of any mechanism kernel corresponds to `types()[i]`.
#[derive(Debug, Clone)]
pub struct TypeSpace {
    alphabet_size: usize,
    n: u64,
    types: Vec<CountVector>,
    index: HashMap<Vec<u64>, usize>,
}

impl TypeSpace {
    pub fn new(alphabet_size: usize, n: u64, cap: TypeCap) -> Result<Self> {
        let types: Vec<CountVector> = enumerate_types(alphabet_size, n, cap)?.collect();
        let index = types
            .iter()
            .enumerate()
            .map(|(i, t)| (t.counts.clone(), i))
            .collect();
        Ok(TypeSpace {
            alphabet_size,
            n,
            types,
            index,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn types(&self) -> &[CountVector] {
        &self.types
    }

    pub fn index_of(&self, counts: &[u64]) -> Option<usize> {
        self.index.get(counts).copied()
    }

    /// Largest dataset distance between two types of this space.
    pub fn diameter(&self) -> u64 {
        self.n
    }
}

/// Table of `ln(j!)` for `j = 0..=n`.
#[derive(Debug, Clone)]
pub(crate) struct LnFactorials(Vec<f64>);

impl LnFactorials {
    pub(crate) fn new(n: u64) -> Self {
        let mut table = Vec::with_capacity(n as usize + 1);
        let mut acc = 0.0;
        table.push(0.0);
        for j in 1..=n {
            acc += (j as f64).ln();
            table.push(acc);
        }
        LnFactorials(table)
    }

    pub(crate) fn get(&self, j: u64) -> f64 {
        self.0[j as usize]
    }

    pub(crate) fn type_probability(&self, counts: &[u64], p: &[f64]) -> f64 {
        let n: u64 = counts.iter().sum();
        let mut log_mass = self.get(n);
        for (&c, &pa) in counts.iter().zip(p) {
            if c == 0 {
                continue;
            }
            if pa == 0.0 {
                return 0.0;
            }
            log_mass += c as f64 * pa.ln() - self.get(c);
        }
        log_mass.exp()
    }
}

/// Multinomial probability that an i.i.d. sample of size `n` from `p` has type `s`.
pub fn type_probability(s: &CountVector, p: &SourceDistribution) -> Result<f64> {
    if s.dim() != p.dim() {
        return input(format!("type has {} symbols, source has {}", s.dim(), p.dim()));
    }
    Ok(LnFactorials::new(s.n()).type_probability(s.counts(), p.probs()))
}

/// Probabilities of every type in `space`, in enumeration order.
pub fn type_distribution(space: &TypeSpace, p: &SourceDistribution) -> Result<Vec<f64>> {
    if space.alphabet_size() != p.dim() {
        return input("source dimension differs from type space alphabet");
    }
    let table = LnFactorials::new(space.n());
    Ok(space
        .types()
        .iter()
        .map(|t| table.type_probability(t.counts(), p.probs()))
        .collect())
}

/// Sub-Gaussian parameter certified by Hoeffding's lemma:
/// the largest per-hypothesis loss range, halved.
pub fn sigma_sub_gaussian(loss_table: &[Vec<f64>]) -> Result<f64> {
    validate_loss_rows(loss_table)?;
    Ok(loss_table
        .iter()
        .map(|row| {
            let (lo, hi) = row
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
            (hi - lo) / 2.0
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cv(c: &[u64]) -> CountVector {
        CountVector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn type_of_counts_and_is_order_free() {
        let z2 = Alphabet::new(2).unwrap();
        assert_eq!(type_of(&[0, 0, 1], &z2).unwrap(), cv(&[2, 1]));
        assert_eq!(type_of(&[1, 0, 0], &z2).unwrap(), cv(&[2, 1]));
        let z3 = Alphabet::new(3).unwrap();
        assert_eq!(type_of(&[2, 2, 2, 2], &z3).unwrap(), cv(&[0, 0, 4]));
        assert!(matches!(type_of(&[0, 2], &z2), Err(Error::Input(_))));
        assert!(type_of(&[], &z2).is_err());
    }

    #[test]
    fn alphabet_validation() {
        assert!(Alphabet::new(1).is_err());
        let a = Alphabet::with_labels(vec!["x".into(), "y".into()]).unwrap();
        assert_eq!(a.labels(), ["x", "y"]);
        assert!(Alphabet::with_labels(vec!["x".into(), "x".into()]).is_err());
    }

    #[test]
    fn distance_examples() {
        assert_eq!(dataset_distance(&cv(&[2, 1]), &cv(&[2, 1])).unwrap(), 0);
        assert_eq!(dataset_distance(&cv(&[2, 1]), &cv(&[1, 2])).unwrap(), 1);
        assert_eq!(dataset_distance(&cv(&[3, 0, 0]), &cv(&[0, 0, 3])).unwrap(), 3);
        assert!(dataset_distance(&cv(&[3, 0]), &cv(&[2, 0])).is_err());
        assert!(dataset_distance(&cv(&[3, 0]), &cv(&[1, 1, 1])).is_err());
    }

    #[test]
    fn counting_examples() {
        assert_eq!(num_types(2, 5), BigUint::from(6u32));
        assert_eq!(num_types(3, 5), BigUint::from(21u32));
        assert_eq!(num_types_upper_bound(2, 5), BigUint::from(6u32));
        assert_eq!(num_types_upper_bound(3, 5), BigUint::from(36u32));
        assert_eq!(num_types_upper_bound(4, 1), BigUint::from(8u32));
        assert_eq!(num_types(4, 1), BigUint::from(4u32));
        for n in 1..40 {
            assert_eq!(num_types(2, n), num_types_upper_bound(2, n));
        }
    }

    #[test]
    fn enumeration_order() {
        let got: Vec<String> = enumerate_types(2, 2, TypeCap::default())
            .unwrap()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(got, ["0,2", "1,1", "2,0"]);
        let got: Vec<String> = enumerate_types(3, 1, TypeCap::default())
            .unwrap()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(got, ["0,0,1", "0,1,0", "1,0,0"]);
        assert_eq!(enumerate_types(3, 5, TypeCap::default()).unwrap().count(), 21);
    }

    #[test]
    fn enumeration_is_sorted_complete_and_unique() {
        for k in 1..=5 {
            for n in 1..=7 {
                let all: Vec<_> = enumerate_types(k, n, TypeCap::default()).unwrap().collect();
                assert_eq!(BigUint::from(all.len()), num_types(k, n));
                assert!(all.windows(2).all(|w| w[0].counts() < w[1].counts()));
                assert!(all.iter().all(|t| t.n() == n && t.dim() == k));
            }
        }
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let err = enumerate_types(3, 5, TypeCap(20)).unwrap_err();
        assert_eq!(
            err,
            Error::Resource {
                requested: "21".into(),
                cap: 20
            }
        );
        assert!(err.to_string().contains("20"));
        assert!(enumerate_types(3, 5, TypeCap(21)).is_ok());
    }

    #[test]
    fn probability_examples() {
        let p = SourceDistribution::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(type_probability(&cv(&[2, 0]), &p).unwrap(), 1.0);
        assert_eq!(type_probability(&cv(&[1, 1]), &p).unwrap(), 0.0);
        let half = SourceDistribution::uniform(2).unwrap();
        assert!((type_probability(&cv(&[1, 1]), &half).unwrap() - 0.5).abs() < 1e-15);
        assert!(type_probability(&cv(&[1, 1, 0]), &half).is_err());

        let p = SourceDistribution::new(vec![0.2, 0.3, 0.5]).unwrap();
        let total: f64 = enumerate_types(3, 4, TypeCap::default())
            .unwrap()
            .map(|t| type_probability(&t, &p).unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn source_validation() {
        assert!(SourceDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(SourceDistribution::new(vec![-0.5, 1.5]).is_err());
        assert!(SourceDistribution::new(vec![1.0]).is_err());
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_sub_gaussian(&[vec![0.3, 0.3, 0.3]]).unwrap(), 0.0);
        assert_eq!(sigma_sub_gaussian(&[vec![0.0, 1.0]]).unwrap(), 0.5);
        assert_eq!(sigma_sub_gaussian(&[vec![0.0, 1.0], vec![0.0, 0.4]]).unwrap(), 0.5);
        assert!(sigma_sub_gaussian(&[]).is_err());
        assert!(sigma_sub_gaussian(&[vec![1.0]]).is_err());
    }

    #[test]
    fn csv_loading() {
        let (alphabet, source) =
            SourceDistribution::from_csv("a,b,c\n0.2,0.3,0.5\n".as_bytes()).unwrap();
        assert_eq!(alphabet.labels(), ["a", "b", "c"]);
        assert_eq!(source.probs(), [0.2, 0.3, 0.5]);
        let loss = LossTable::from_csv("a,b\n0,1\n0,0.4\n".as_bytes()).unwrap();
        assert_eq!(loss.hypothesis_count(), 2);
        assert_eq!(loss.sigma(), 0.5);
        assert!(LossTable::from_csv("a,b\n0,x\n".as_bytes()).is_err());
    }

    #[test]
    fn count_vector_text_form() {
        let v: CountVector = "2, 1,0".parse().unwrap();
        assert_eq!(v, cv(&[2, 1, 0]));
        assert_eq!(v.to_string(), "2,1,0");
        assert!("0,0".parse::<CountVector>().is_err());
        assert!("1,-1".parse::<CountVector>().is_err());
    }

    #[test]
    fn type_space_lookup() {
        let space = TypeSpace::new(3, 4, TypeCap::default()).unwrap();
        for (i, t) in space.types().iter().enumerate() {
            assert_eq!(space.index_of(t.counts()), Some(i));
        }
        assert_eq!(space.index_of(&[5, 0, 0]), None);
    }

    #[test]
    fn claim1_holds_on_grid() {
        for k in 2..=8 {
            for n in 1..=50 {
                let exact = num_types(k, n);
                let bound = num_types_upper_bound(k, n);
                assert!(exact <= bound);
                assert_eq!(exact == bound, k == 2, "k={k} n={n}");
            }
        }
    }

    proptest! {
        #[test]
        fn type_of_is_permutation_invariant(
            seq in prop::collection::vec(0usize..4, 1..40),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let alphabet = Alphabet::new(4).unwrap();
            let mut shuffled = seq.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(type_of(&seq, &alphabet).unwrap(), type_of(&shuffled, &alphabet).unwrap());
        }

        #[test]
        fn distance_is_a_metric(
            a in prop::collection::vec(0u64..6, 4),
            b in prop::collection::vec(0u64..6, 4),
            c in prop::collection::vec(0u64..6, 4),
        ) {
            // pad the last coordinate so all three share the same n
            let n = 20u64;
            let fix = |mut v: Vec<u64>| { let s: u64 = v[..3].iter().sum(); v[3] = n - s; CountVector::new(v).unwrap() };
            let (a, b, c) = (fix(a), fix(b), fix(c));
            let ab = dataset_distance(&a, &b).unwrap();
            let ba = dataset_distance(&b, &a).unwrap();
            let bc = dataset_distance(&b, &c).unwrap();
            let ac = dataset_distance(&a, &c).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert_eq!(ab == 0, a == b);
            prop_assert!(ac <= ab + bc);
        }
    }
}
