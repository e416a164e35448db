//! Weighted iterated function systems of similitudes on the real line.
//!
//! Maps are `S(x) = r x + b` with `r`, `b` in the ℚ-span of a
//! [`BasisContext`]; weights are exact positive rationals summing to one.
//! All values are immutable after construction.

mod derive;
mod hull;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num::{BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::algebraic::{format_rational, same_context, AlgebraicError, AlgebraicReal, BasisContext};

pub use derive::{check_derived_weights, derive, is_derived_from, DerivedCandidate, DerivedVerdict};
pub use hull::{attractor_hull, check_ssc, Interval, SscVerdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IfsError {
    #[error("contraction ratio {0} must satisfy 0 < |r| < 1")]
    InvalidRatio(String),
    #[error("a weighted IFS needs at least 2 maps, got {0}")]
    TooFewMaps(usize),
    #[error("{maps} maps but {weights} weights")]
    LengthMismatch { maps: usize, weights: usize },
    #[error("weight {index} is {weight}, weights must be strictly positive")]
    NonPositiveWeight { index: usize, weight: String },
    #[error("weights sum to {0}, not 1")]
    WeightSum(String),
    #[error("maps {0} and {1} are identical")]
    DuplicateMap(usize, usize),
    #[error("iteration count must be at least 1")]
    ZeroIterations,
    #[error("word list is empty")]
    EmptyWords,
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("the IFS is not homogeneous")]
    NotHomogeneous,
    #[error("word {word} does not produce map {index} of the candidate")]
    WitnessMismatch { index: usize, word: String },
    #[error(transparent)]
    Algebraic(#[from] AlgebraicError),
}

pub type Result<T> = std::result::Result<T, IfsError>;

/// `x ↦ ratio·x + translation` with `0 < |ratio| < 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Similitude {
    ratio: AlgebraicReal,
    translation: AlgebraicReal,
}

impl Similitude {
    pub fn new(ratio: AlgebraicReal, translation: AlgebraicReal) -> Result<Self> {
        if !same_context(ratio.ctx(), translation.ctx()) {
            return Err(AlgebraicError::ContextMismatch.into());
        }
        if ratio.is_zero() {
            return Err(IfsError::InvalidRatio(ratio.to_string()));
        }
        // Certified comparison; near |r| = 1 an irrational ratio may be undecidable.
        if !ratio.abs_lt_one().map_err(|_| IfsError::InvalidRatio(ratio.to_string()))? {
            return Err(IfsError::InvalidRatio(ratio.to_string()));
        }
        Ok(Self { ratio, translation })
    }

    /// Rational-coefficient similitude, mainly for tests and examples.
    pub fn rational(ctx: &Arc<BasisContext>, ratio: (i64, i64), translation: (i64, i64)) -> Result<Self> {
        Self::new(
            AlgebraicReal::from_ratio(ctx, ratio.0, ratio.1),
            AlgebraicReal::from_ratio(ctx, translation.0, translation.1),
        )
    }

    pub fn ratio(&self) -> &AlgebraicReal {
        &self.ratio
    }

    pub fn translation(&self) -> &AlgebraicReal {
        &self.translation
    }

    pub fn ctx(&self) -> &Arc<BasisContext> {
        self.ratio.ctx()
    }

    /// `self ∘ inner`, i.e. `x ↦ r_s (r_i x + b_i) + b_s`.
    pub fn compose(&self, inner: &Similitude) -> Result<Similitude> {
        let ratio = self.ratio.try_mul(&inner.ratio)?;
        let translation = self.ratio.try_mul(&inner.translation)?.try_add(&self.translation)?;
        Ok(Similitude { ratio, translation })
    }

    pub fn apply(&self, x: &AlgebraicReal) -> Result<AlgebraicReal> {
        Ok(self.ratio.try_mul(x)?.try_add(&self.translation)?)
    }

    /// `b / (1 - r)`; needs a rational ratio to stay in the span.
    pub fn fixed_point(&self) -> Result<AlgebraicReal> {
        let one = AlgebraicReal::one(self.ctx());
        Ok(self.translation.try_div(&one.try_sub(&self.ratio)?)?)
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.translation
            .total_cmp(&other.translation)
            .then_with(|| self.ratio.total_cmp(&other.ratio))
    }
}

impl fmt::Display for Similitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={} b={}", self.ratio, self.translation)
    }
}

/// Finite list of distinct similitudes with a strictly positive probability vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedIFS {
    ctx: Arc<BasisContext>,
    maps: Vec<Similitude>,
    weights: Vec<BigRational>,
}

impl WeightedIFS {
    pub fn new(maps: Vec<Similitude>, weights: Vec<BigRational>) -> Result<Self> {
        if maps.len() != weights.len() {
            return Err(IfsError::LengthMismatch { maps: maps.len(), weights: weights.len() });
        }
        if maps.len() < 2 {
            return Err(IfsError::TooFewMaps(maps.len()));
        }
        let ctx = maps[0].ctx().clone();
        if maps.iter().any(|m| !same_context(m.ctx(), &ctx)) {
            return Err(AlgebraicError::ContextMismatch.into());
        }
        for (index, w) in weights.iter().enumerate() {
            if !w.is_positive() {
                return Err(IfsError::NonPositiveWeight { index, weight: format_rational(w) });
            }
        }
        let sum: BigRational = weights.iter().sum();
        if !sum.is_one() {
            return Err(IfsError::WeightSum(format_rational(&sum)));
        }
        let mut seen: HashMap<&Similitude, usize> = HashMap::new();
        for (i, m) in maps.iter().enumerate() {
            if let Some(&j) = seen.get(m) {
                return Err(IfsError::DuplicateMap(j, i));
            }
            seen.insert(m, i);
        }
        Ok(Self { ctx, maps, weights })
    }

    /// Like [`WeightedIFS::new`] after discarding maps whose weight is exactly zero.
    pub fn new_dropping_zero_weights(maps: Vec<Similitude>, weights: Vec<BigRational>) -> Result<Self> {
        if maps.len() != weights.len() {
            return Err(IfsError::LengthMismatch { maps: maps.len(), weights: weights.len() });
        }
        let (maps, weights) = maps.into_iter().zip(weights).filter(|(_, w)| !w.is_zero()).unzip();
        Self::new(maps, weights)
    }

    /// Builds an IFS over ℚ from `(ratio, translation, weight)` triples of
    /// `(numerator, denominator)` pairs.
    pub fn rational(spec: &[((i64, i64), (i64, i64), (i64, i64))]) -> Result<Self> {
        let ctx = BasisContext::rational();
        let mut maps = Vec::new();
        let mut weights = Vec::new();
        for &(r, b, p) in spec {
            maps.push(Similitude::rational(&ctx, r, b)?);
            weights.push(BigRational::new(p.0.into(), p.1.into()));
        }
        Self::new(maps, weights)
    }

    pub fn ctx(&self) -> &Arc<BasisContext> {
        &self.ctx
    }

    pub fn maps(&self) -> &[Similitude] {
        &self.maps
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// The common ratio when all ratios are exactly equal.
    pub fn common_ratio(&self) -> Option<&AlgebraicReal> {
        let r = self.maps[0].ratio();
        self.maps.iter().all(|m| m.ratio() == r).then_some(r)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.common_ratio().is_some()
    }

    /// True when every ratio and translation is rational.
    pub fn is_rational(&self) -> bool {
        self.maps.iter().all(|m| m.ratio().is_rational() && m.translation().is_rational())
    }

    /// Copy sorted by `(translation, ratio)`.
    pub fn canonical(&self) -> Self {
        let mut pairs: Vec<(Similitude, BigRational)> =
            self.maps.iter().cloned().zip(self.weights.iter().cloned()).collect();
        pairs.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        let (maps, weights) = pairs.into_iter().unzip();
        Self { ctx: self.ctx.clone(), maps, weights }
    }

    /// Equality of the map/weight multisets, ignoring order.
    pub fn same_system(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }

    /// Largest `|r_j|` as a float.
    pub fn max_abs_ratio(&self) -> f64 {
        self.maps.iter().map(|m| m.ratio().to_f64().abs()).fold(0.0, f64::max)
    }
}

impl fmt::Display for WeightedIFS {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, w) in self.maps.iter().zip(&self.weights) {
            writeln!(f, "{m} p={}", format_rational(w))?;
        }
        Ok(())
    }
}

/// Appends `(map, weight)` unless the map is already present, in which case
/// the weights are summed.
fn push_merged(maps: &mut Vec<Similitude>, weights: &mut Vec<BigRational>, index: &mut HashMap<Similitude, usize>, m: Similitude, w: BigRational) {
    match index.get(&m) {
        Some(&i) => weights[i] += w,
        None => {
            index.insert(m.clone(), maps.len());
            maps.push(m);
            weights.push(w);
        }
    }
}

/// `{S_j ∘ T_i}` with weights `p_j q_i`, in lexicographic `(j, i)` order.
/// Coinciding composites are merged by summing their weights.
pub fn compose(left: &WeightedIFS, right: &WeightedIFS) -> Result<WeightedIFS> {
    if !same_context(left.ctx(), right.ctx()) {
        return Err(AlgebraicError::ContextMismatch.into());
    }
    let mut maps = Vec::with_capacity(left.len() * right.len());
    let mut weights = Vec::with_capacity(left.len() * right.len());
    let mut index = HashMap::new();
    for (s, p) in left.maps.iter().zip(&left.weights) {
        for (t, q) in right.maps.iter().zip(&right.weights) {
            push_merged(&mut maps, &mut weights, &mut index, s.compose(t)?, p * q);
        }
    }
    WeightedIFS::new(maps, weights)
}

/// `n`-fold self-composition; `iterate(Φ, 1) = Φ`.
pub fn iterate(ifs: &WeightedIFS, n: u32) -> Result<WeightedIFS> {
    if n == 0 {
        return Err(IfsError::ZeroIterations);
    }
    let mut acc = ifs.clone();
    for _ in 1..n {
        acc = compose(ifs, &acc)?;
    }
    Ok(acc)
}

/// A nonempty sequence of map indices, read left to right as
/// `φ_w = φ_{w_1} ∘ ... ∘ φ_{w_m}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>, alphabet: usize) -> Result<Self> {
        if letters.is_empty() {
            return Err(IfsError::InvalidWord("empty word".into()));
        }
        if let Some(&bad) = letters.iter().find(|&&l| l >= alphabet) {
            return Err(IfsError::InvalidWord(format!("letter {} out of range 1..={alphabet}", bad + 1)));
        }
        Ok(Self(letters))
    }

    /// Parses one-based letters: `"12"` for alphabets up to 9, or dotted
    /// `"1.10.2"` for larger ones.
    pub fn parse(text: &str, alphabet: usize) -> Result<Self> {
        let bad = || IfsError::InvalidWord(text.to_string());
        let letters: Vec<usize> = if text.contains('.') {
            text.split('.').map(|t| t.parse::<usize>().map_err(|_| bad())).collect::<Result<_>>()?
        } else {
            text.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect::<Result<_>>()?
        };
        if letters.contains(&0) {
            return Err(bad());
        }
        Self::new(letters.into_iter().map(|l| l - 1).collect(), alphabet)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The composite map of the word over `ifs`.
    pub fn map_over(&self, ifs: &WeightedIFS) -> Result<Similitude> {
        let mut it = self.0.iter().rev();
        let mut acc = ifs.maps()[*it.next().expect("nonempty")].clone();
        for &l in it {
            acc = ifs.maps()[l].compose(&acc)?;
        }
        Ok(acc)
    }

    /// `p_{w_1} ··· p_{w_m}`.
    pub fn weight_over(&self, ifs: &WeightedIFS) -> BigRational {
        self.0.iter().map(|&l| ifs.weights()[l].clone()).product()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&l| l < 9) {
            for l in &self.0 {
                write!(f, "{}", l + 1)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|l| (l + 1).to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

/// All words of exactly length `m`, in lexicographic order.
pub fn all_words(alphabet: usize, m: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|w: Vec<usize>| {
                (0..alphabet).map(move |l| {
                    let mut w = w.clone();
                    w.push(l);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(Word).collect()
}
