use std::cmp::Ordering;
use std::collections::BTreeSet;

use num::BigRational;

use super::{rational_log_ratio, AlgebraicReal, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Commensurability {
    /// The truncated orbits agree and `a^p = b^q`.
    ConsistentWith { p: u64, q: u64 },
    /// The truncated orbits differ on the window where both are complete.
    Inconsistent,
    /// The truncated orbits agree but `log b / log a` is irrational.
    NoRationalPower,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommensurabilityVerdict {
    pub kind: Commensurability,
    /// Both sets are `{0}` (or empty), so the orbit union carries no
    /// information about the scales.
    pub zero_only: bool,
    /// Half-width of the comparison window, `None` when zero-only.
    pub window: Option<AlgebraicReal>,
    /// Number of nonzero orbit points compared inside the window.
    pub compared: usize,
}

fn min_abs(xs: &[AlgebraicReal]) -> Result<AlgebraicReal> {
    let mut best: Option<AlgebraicReal> = None;
    for x in xs {
        let ax = x.abs()?;
        best = Some(match best {
            Some(b) if b.cmp_value(&ax)? != Ordering::Greater => b,
            _ => ax,
        });
    }
    Ok(best.expect("nonempty"))
}

fn truncated_orbit(
    xs: &[AlgebraicReal],
    scale: &BigRational,
    k_max: u32,
    window: &AlgebraicReal,
) -> Result<BTreeSet<AlgebraicReal>> {
    let mut out = BTreeSet::new();
    for x in xs {
        let mut y = x.clone();
        for _ in 0..=k_max {
            if y.abs()?.cmp_value(window)? == Ordering::Greater {
                break;
            }
            out.insert(y.clone());
            y = y.scale(scale);
        }
    }
    Ok(out)
}

/// Desk-scale check of the hypothesis `∪_k a^k A = ∪_k b^k B` and of its
/// conclusion that `b` is a rational power of `a`.
///
/// Orbits are truncated at `k ≤ k_max`. Every orbit point of absolute value
/// at most `W = min(a^k_max · min|A|, b^k_max · min|B|)` is then present in
/// both truncations, so the comparison is made on `[-W, W]`.
pub fn commensurability_witness(
    a_set: &[AlgebraicReal],
    b_set: &[AlgebraicReal],
    a: &BigRational,
    b: &BigRational,
    k_max: u32,
) -> Result<CommensurabilityVerdict> {
    let ratio = rational_log_ratio(a, b)?;
    let with_ratio = |zero_only, window, compared| CommensurabilityVerdict {
        kind: match ratio {
            Some((p, q)) => Commensurability::ConsistentWith { p, q },
            None => Commensurability::NoRationalPower,
        },
        zero_only,
        window,
        compared,
    };
    let inconsistent = |window, compared| CommensurabilityVerdict {
        kind: Commensurability::Inconsistent,
        zero_only: false,
        window,
        compared,
    };

    let nz_a: Vec<AlgebraicReal> = a_set.iter().filter(|x| !x.is_zero()).cloned().collect();
    let nz_b: Vec<AlgebraicReal> = b_set.iter().filter(|x| !x.is_zero()).cloned().collect();
    let zero_a = nz_a.len() < a_set.len();
    let zero_b = nz_b.len() < b_set.len();
    if zero_a != zero_b {
        return Ok(inconsistent(None, 0));
    }
    match (nz_a.is_empty(), nz_b.is_empty()) {
        (true, true) => return Ok(with_ratio(true, None, 0)),
        (true, false) | (false, true) => return Ok(inconsistent(None, 0)),
        _ => {}
    }

    let pow = |s: &BigRational| num::pow(s.clone(), k_max as usize);
    let wa = min_abs(&nz_a)?.scale(&pow(a));
    let wb = min_abs(&nz_b)?.scale(&pow(b));
    let window = if wa.cmp_value(&wb)? == Ordering::Greater { wb } else { wa };
    let orbit_a = truncated_orbit(&nz_a, a, k_max, &window)?;
    let orbit_b = truncated_orbit(&nz_b, b, k_max, &window)?;
    if orbit_a != orbit_b {
        let compared = orbit_a.union(&orbit_b).count();
        return Ok(inconsistent(Some(window), compared));
    }
    Ok(with_ratio(false, Some(window), orbit_a.len()))
}
