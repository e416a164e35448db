//! Word-derived systems: building them, recognising them, and checking
//! their weights against the product weights of the base.

use std::collections::HashMap;

use num::{BigInt, BigRational, One, Signed};

use super::hull::{attractor_hull, exact_points, MapEnclosure};
use super::{IfsError, Interval, Result, Similitude, WeightedIFS, Word};
use crate::algebraic::rational_log_ratio;

/// Raw output of [`derive`]: the composite maps with product weights and a
/// few diagnostics. The weights need not sum to one.
#[derive(Clone, Debug)]
pub struct DerivedCandidate {
    pub maps: Vec<Similitude>,
    pub weights: Vec<BigRational>,
    pub words: Vec<Word>,
    pub weight_sum: BigRational,
    /// The candidate as a weighted IFS, or the invariant it violates.
    pub ifs: std::result::Result<WeightedIFS, IfsError>,
    /// Whether the candidate's maps, taken as an IFS, have the same hull as the base.
    pub hull_matches: Option<bool>,
}

/// `{φ_w}` with weights `p_w = p_{w_1} ··· p_{w_m}` for the given words.
pub fn derive(ifs: &WeightedIFS, words: &[Word]) -> Result<DerivedCandidate> {
    if words.is_empty() {
        return Err(IfsError::EmptyWords);
    }
    let mut maps = Vec::with_capacity(words.len());
    let mut weights = Vec::with_capacity(words.len());
    let mut seen: HashMap<Similitude, usize> = HashMap::new();
    for (i, w) in words.iter().enumerate() {
        if let Some(&bad) = w.letters().iter().find(|&&l| l >= ifs.len()) {
            return Err(IfsError::InvalidWord(format!("{w}: letter {} out of range", bad + 1)));
        }
        let m = w.map_over(ifs)?;
        if let Some(&j) = seen.get(&m) {
            return Err(IfsError::DuplicateMap(j, i));
        }
        seen.insert(m.clone(), i);
        maps.push(m);
        weights.push(w.weight_over(ifs));
    }
    let weight_sum: BigRational = weights.iter().sum();
    let hull_matches = if maps.len() >= 2 {
        hulls_agree(ifs, &maps)?
    } else {
        None
    };
    let candidate = WeightedIFS::new(maps.clone(), weights.clone());
    Ok(DerivedCandidate { maps, weights, words: words.to_vec(), weight_sum, ifs: candidate, hull_matches })
}

fn hull_tolerance() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << 80)
}

fn hull_of_maps(maps: &[Similitude]) -> Result<Interval> {
    // Weights do not affect the attractor; use uniform ones.
    let n = maps.len();
    let w = BigRational::new(BigInt::one(), BigInt::from(n));
    let ifs = WeightedIFS::new(maps.to_vec(), vec![w; n])?;
    attractor_hull(&ifs, &hull_tolerance())
}

/// `Some(true)` / `Some(false)` when decidable; `None` when only numeric
/// enclosures are available and they neither separate nor certify.
fn hulls_agree(base: &WeightedIFS, maps: &[Similitude]) -> Result<Option<bool>> {
    let a = attractor_hull(base, &hull_tolerance())?;
    let b = hull_of_maps(maps)?;
    if a.exact && b.exact {
        return Ok(Some(a.lo == b.lo && a.hi == b.hi));
    }
    if let (Some(ea), Some(eb)) = (&a.endpoints, &b.endpoints) {
        return Ok(Some(ea == eb));
    }
    let slack = hull_tolerance() * BigRational::from_integer(4.into());
    let close = (&a.lo - &b.lo).abs() <= slack && (&a.hi - &b.hi).abs() <= slack;
    Ok(if close { None } else { Some(false) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DerivedVerdict {
    /// Every candidate map is `φ_w` for the listed word, and the attractor
    /// checks found no disagreement.
    Yes(Vec<Word>),
    No(String),
    Unknown(String),
}

const MAX_WORDS: usize = 1 << 20;

/// First (shortest, then lexicographic) word of length `≤ max_depth` for
/// every composite map reachable with ratio not smaller than `min_ratio`.
/// The flag is set when the search stopped early at [`MAX_WORDS`].
fn word_table(base: &WeightedIFS, max_depth: usize, min_ratio: f64) -> Result<(HashMap<Similitude, Word>, bool)> {
    let mut table = HashMap::new();
    let mut frontier: Vec<(Vec<usize>, Similitude)> = Vec::new();
    for (i, m) in base.maps().iter().enumerate() {
        table.entry(m.clone()).or_insert_with(|| Word(vec![i]));
        frontier.push((vec![i], m.clone()));
    }
    let mut visited = frontier.len();
    for _ in 1..max_depth {
        let mut next = Vec::new();
        for (letters, m) in &frontier {
            for (i, s) in base.maps().iter().enumerate() {
                let c = m.compose(s)?;
                if c.ratio().to_f64().abs() < min_ratio * (1.0 - 1e-9) {
                    continue;
                }
                let mut w = letters.clone();
                w.push(i);
                table.entry(c.clone()).or_insert_with(|| Word(w.clone()));
                next.push((w, c));
            }
        }
        visited += next.len();
        if visited > MAX_WORDS {
            return Ok((table, true));
        }
        frontier = next;
    }
    Ok((table, false))
}

/// Whether no word longer than `max_depth` can reach `|ratio|`.
fn ratio_unreachable(base: &WeightedIFS, target: &Similitude, max_depth: usize) -> bool {
    let rho = base.max_abs_ratio();
    let t = target.ratio().to_f64().abs();
    if t > rho.powi(max_depth as i32 + 1) * (1.0 + 1e-9) {
        return true;
    }
    // Homogeneous rational base: reachable ratios are exactly |r|^m.
    let (Some(r), Some(tr)) = (base.common_ratio().and_then(|r| r.as_rational()), target.ratio().as_rational()) else {
        return false;
    };
    let (a, b) = (r.abs().recip(), tr.abs().recip());
    match rational_log_ratio(&a, &b) {
        Ok(Some((_, q))) => q != 1,
        Ok(None) => true,
        Err(_) => false,
    }
}

/// Decides, at desk scale, whether `candidate` is derived from `base`.
///
/// `Yes` requires exact word matches for every map plus two necessary
/// attractor checks: equal hulls, and every exactly known attractor point
/// of the base lies in an interval cover of the candidate's attractor.
/// Equality of attractors itself is not decided.
pub fn is_derived_from(candidate: &WeightedIFS, base: &WeightedIFS, max_depth: usize) -> Result<DerivedVerdict> {
    if max_depth == 0 {
        return Err(IfsError::InvalidWord("max_depth must be positive".into()));
    }
    let min_ratio = candidate.maps().iter().map(|m| m.ratio().to_f64().abs()).fold(f64::INFINITY, f64::min);
    let (table, truncated) = word_table(base, max_depth, min_ratio)?;
    let mut words = Vec::with_capacity(candidate.len());
    let mut unmatched = Vec::new();
    for (i, m) in candidate.maps().iter().enumerate() {
        match table.get(m) {
            Some(w) => words.push(w.clone()),
            None => unmatched.push(i),
        }
    }
    if truncated && !unmatched.is_empty() {
        return Ok(DerivedVerdict::Unknown(format!("word search stopped after {MAX_WORDS} words")));
    }
    if let Some(&i) = unmatched.iter().find(|&&i| ratio_unreachable(base, &candidate.maps()[i], max_depth)) {
        return Ok(DerivedVerdict::No(format!(
            "map {} ({}) is not a composite of base maps: its ratio is out of reach",
            i + 1,
            candidate.maps()[i]
        )));
    }
    if !unmatched.is_empty() {
        let list: Vec<String> = unmatched.iter().map(|i| (i + 1).to_string()).collect();
        return Ok(DerivedVerdict::Unknown(format!("maps {} match no word up to length {max_depth}", list.join(", "))));
    }
    match hulls_agree(base, candidate.maps())? {
        Some(false) => return Ok(DerivedVerdict::No("attractor hulls differ".into())),
        None => return Ok(DerivedVerdict::Unknown("attractor hulls agree only numerically".into())),
        Some(true) => {}
    }
    if let Some(point) = base_point_outside(candidate, base)? {
        return Ok(DerivedVerdict::No(format!("base attractor point {point} is outside the candidate attractor")));
    }
    Ok(DerivedVerdict::Yes(words))
}

/// An exact attractor point of `base` provably outside the candidate's attractor.
fn base_point_outside(candidate: &WeightedIFS, base: &WeightedIFS) -> Result<Option<String>> {
    let Some(points) = exact_points(base, 2) else {
        return Ok(None);
    };
    let hull = attractor_hull(candidate, &hull_tolerance())?;
    let encl = MapEnclosure::of(candidate);
    let n = candidate.len().max(2);
    let depth = (12.0 / (n as f64).log2()).floor().clamp(1.0, 8.0) as usize;
    let mut pieces = vec![(hull.lo.clone(), hull.hi.clone())];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(pieces.len() * encl.len());
        for e in &encl {
            for (l, h) in &pieces {
                next.push(e.image(l, h));
            }
        }
        pieces = next;
    }
    for x in points {
        let (lo, hi) = x.enclosure();
        let inside = pieces.iter().any(|(l, h)| lo <= *h && *l <= hi);
        if !inside {
            return Ok(Some(x.to_string()));
        }
    }
    Ok(None)
}

/// Whether each candidate weight equals the product weight of its witness word.
pub fn check_derived_weights(candidate: &WeightedIFS, base: &WeightedIFS, words: &[Word]) -> Result<bool> {
    if words.len() != candidate.len() {
        return Err(IfsError::LengthMismatch { maps: candidate.len(), weights: words.len() });
    }
    for (i, (w, m)) in words.iter().zip(candidate.maps()).enumerate() {
        if w.letters().iter().any(|&l| l >= base.len()) || &w.map_over(base)? != m {
            return Err(IfsError::WitnessMismatch { index: i + 1, word: w.to_string() });
        }
    }
    Ok(words.iter().zip(candidate.weights()).all(|(w, q)| w.weight_over(base) == *q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs_core::{all_words, iterate};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn cantor() -> WeightedIFS {
        WeightedIFS::rational(&[((1, 3), (0, 1), (1, 2)), ((1, 3), (2, 3), (1, 2))]).unwrap()
    }

    fn words(ws: &[&str], n: usize) -> Vec<Word> {
        ws.iter().map(|w| Word::parse(w, n).unwrap()).collect()
    }

    #[test]
    fn derive_all_length_two_words_is_iteration() {
        let d = derive(&cantor(), &all_words(2, 2)).unwrap();
        assert_eq!(d.ifs.unwrap(), iterate(&cantor(), 2).unwrap());
        assert_eq!(d.weight_sum, q(1, 1));
        assert_eq!(d.hull_matches, Some(true));
    }

    #[test]
    fn derive_example_four_maps() {
        let base = WeightedIFS::rational(&[((1, 3), (0, 1), (2, 3)), ((1, 3), (2, 3), (1, 3))]).unwrap();
        let d = derive(&base, &words(&["1", "11", "12", "2"], 2)).unwrap();
        assert_eq!(d.weights, vec![q(2, 3), q(4, 9), q(2, 9), q(1, 3)]);
        let trans: Vec<String> = d.maps.iter().map(|m| m.translation().to_string()).collect();
        assert_eq!(trans, ["0", "0", "2/9", "2/3"]);
        // Raw weights overshoot 1, so the candidate is not a valid weighted IFS.
        assert!(matches!(d.ifs, Err(IfsError::WeightSum(_))));
    }

    #[test]
    fn derive_single_word_is_degenerate() {
        let d = derive(&cantor(), &words(&["1"], 2)).unwrap();
        assert!(matches!(d.ifs, Err(IfsError::TooFewMaps(1))));
        assert_eq!(d.hull_matches, None);
    }

    #[test]
    fn derive_rejects_duplicates() {
        let halves = WeightedIFS::rational(&[((1, 2), (0, 1), (1, 2)), ((1, 2), (1, 2), (1, 2))]).unwrap();
        assert!(derive(&halves, &words(&["1", "1"], 2)).is_err());
        assert!(derive(&cantor(), &[]).is_err());
    }

    #[test]
    fn derived_from_examples() {
        let c2 = iterate(&cantor(), 2).unwrap();
        match is_derived_from(&c2, &cantor(), 2).unwrap() {
            DerivedVerdict::Yes(ws) => {
                let s: Vec<String> = ws.iter().map(Word::to_string).collect();
                assert_eq!(s, ["11", "12", "21", "22"]);
            }
            other => panic!("{other:?}"),
        }
        let halves = WeightedIFS::rational(&[((1, 2), (0, 1), (1, 2)), ((1, 2), (1, 2), (1, 2))]).unwrap();
        assert!(matches!(is_derived_from(&cantor(), &halves, 3).unwrap(), DerivedVerdict::No(_)));
    }

    #[test]
    fn derived_from_rejects_smaller_attractor() {
        // Only the left half of the Cantor construction: hull [0, 1/3] differs.
        let left = WeightedIFS::rational(&[((1, 9), (0, 1), (1, 2)), ((1, 9), (2, 9), (1, 2))]).unwrap();
        assert!(matches!(is_derived_from(&left, &cantor(), 2).unwrap(), DerivedVerdict::No(_)));
    }

    #[test]
    fn derived_weight_checks() {
        let c2 = iterate(&cantor(), 2).unwrap();
        let ws = words(&["11", "12", "21", "22"], 2);
        assert!(check_derived_weights(&c2, &cantor(), &ws).unwrap());
        let skewed = WeightedIFS::new(c2.maps().to_vec(), vec![q(1, 2), q(1, 6), q(1, 6), q(1, 6)]).unwrap();
        assert!(!check_derived_weights(&skewed, &cantor(), &ws).unwrap());
        let three = words(&["11", "12", "2"], 2);
        let d = derive(&cantor(), &three).unwrap().ifs.unwrap();
        assert_eq!(d.weights(), &[q(1, 4), q(1, 4), q(1, 2)]);
        assert!(check_derived_weights(&d, &cantor(), &three).unwrap());
        assert!(check_derived_weights(&d, &cantor(), &ws[..2]).is_err());
    }
}
