//! Attractor hulls and the strong separation check.

use std::cmp::Ordering;
use std::collections::HashMap;

use num::{BigInt, BigRational, One, Signed, ToPrimitive};

use super::{Result, WeightedIFS};
use crate::algebraic::AlgebraicReal;

/// Closed rational interval. `exact` means `[lo, hi]` is the hull itself and
/// not only an outer enclosure of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
    pub exact: bool,
    /// Exact endpoints when they are known but irrational.
    pub endpoints: Option<(AlgebraicReal, AlgebraicReal)>,
}

impl Interval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, lo: &BigRational, hi: &BigRational) -> bool {
        &self.lo <= lo && hi <= &self.hi
    }
}

/// Grid used when rounding outward; fine enough to be invisible next to
/// the declared-symbol precision.
const GRID_BITS: u32 = 192;

fn round_down(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    BigRational::new((x * BigRational::from_integer(scale.clone())).floor().to_integer(), scale)
}

fn round_up(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    BigRational::new((x * BigRational::from_integer(scale.clone())).ceil().to_integer(), scale)
}

/// Rational interval enclosures of a map's coefficients.
#[derive(Clone, Debug)]
pub(crate) struct MapEnclosure {
    r: (BigRational, BigRational),
    b: (BigRational, BigRational),
    exact: bool,
}

impl MapEnclosure {
    pub(crate) fn of(ifs: &WeightedIFS) -> Vec<MapEnclosure> {
        ifs.maps()
            .iter()
            .map(|m| {
                let exact = m.ratio().is_rational() && m.translation().is_rational();
                MapEnclosure { r: m.ratio().enclosure(), b: m.translation().enclosure(), exact }
            })
            .collect()
    }

    fn abs_ratio_hi(&self) -> BigRational {
        self.r.0.abs().max(self.r.1.abs())
    }

    /// Enclosure of `S([lo, hi])`, rounded outward when the map is inexact.
    pub(crate) fn image(&self, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
        let products = [&self.r.0 * lo, &self.r.0 * hi, &self.r.1 * lo, &self.r.1 * hi];
        let mut pmin = products[0].clone();
        let mut pmax = products[0].clone();
        for p in &products[1..] {
            if *p < pmin {
                pmin = p.clone();
            }
            if *p > pmax {
                pmax = p.clone();
            }
        }
        let (l, h) = (pmin + &self.b.0, pmax + &self.b.1);
        if self.exact {
            (l, h)
        } else {
            (round_down(&l, GRID_BITS), round_up(&h, GRID_BITS))
        }
    }
}

fn exact_positive_hull(ifs: &WeightedIFS) -> Option<(AlgebraicReal, AlgebraicReal)> {
    let mut lo: Option<AlgebraicReal> = None;
    let mut hi: Option<AlgebraicReal> = None;
    for m in ifs.maps() {
        if m.ratio().sign().ok()? != Ordering::Greater {
            return None;
        }
        let fp = m.fixed_point().ok()?;
        lo = Some(match lo {
            Some(l) if l.cmp_value(&fp).ok()? != Ordering::Greater => l,
            _ => fp.clone(),
        });
        hi = Some(match hi {
            Some(h) if h.cmp_value(&fp).ok()? != Ordering::Less => h,
            _ => fp,
        });
    }
    Some((lo?, hi?))
}

/// Outer interval of the attractor's convex hull.
///
/// With all ratios positive and rational the hull is `[min_j b_j/(1-r_j),
/// max_j b_j/(1-r_j)]` and is returned exactly. Otherwise the coupled
/// endpoint map is iterated from an invariant interval with outward
/// rounding, and the result is an enclosure whose width exceeds the hull
/// width by at most `tolerance` (given adequate symbol precision).
pub fn attractor_hull(ifs: &WeightedIFS, tolerance: &BigRational) -> Result<Interval> {
    if let Some((lo_e, hi_e)) = exact_positive_hull(ifs) {
        if let (Some(lo), Some(hi)) = (lo_e.as_rational(), hi_e.as_rational()) {
            return Ok(Interval { lo: lo.clone(), hi: hi.clone(), exact: true, endpoints: None });
        }
        let lo = round_down(&lo_e.enclosure().0, GRID_BITS);
        let hi = round_up(&hi_e.enclosure().1, GRID_BITS);
        return Ok(Interval { lo, hi, exact: false, endpoints: Some((lo_e, hi_e)) });
    }
    Ok(iterated_hull(ifs, tolerance))
}

fn iterated_hull(ifs: &WeightedIFS, tolerance: &BigRational) -> Interval {
    let encl = MapEnclosure::of(ifs);
    let rho = encl.iter().map(MapEnclosure::abs_ratio_hi).max().expect("nonempty");
    let one = BigRational::one();
    // [-R, R] is invariant once |r| R + |b| <= R for every map.
    let radius = encl
        .iter()
        .map(|e| {
            let b = e.b.0.abs().max(e.b.1.abs());
            b / (&one - e.abs_ratio_hi())
        })
        .max()
        .expect("nonempty");
    let radius = round_up(&radius, 32) + BigRational::new(1.into(), 1u32.into());
    let mut lo = -radius.clone();
    let mut hi = radius.clone();

    let rho_f = rho.to_f64().unwrap_or(1.0).min(1.0 - 1e-12);
    let tol_f = tolerance.to_f64().unwrap_or(1e-12).max(1e-100);
    let r_f = radius.to_f64().unwrap_or(1.0);
    let bits = ((8.0 / (tol_f * (1.0 - rho_f))).log2().ceil() as i64).clamp(8, GRID_BITS as i64) as u32;
    let steps = ((tol_f / (8.0 * r_f)).ln() / rho_f.ln()).ceil().clamp(1.0, 100_000.0) as usize;

    for _ in 0..steps {
        let mut nlo: Option<BigRational> = None;
        let mut nhi: Option<BigRational> = None;
        for e in &encl {
            let (l, h) = e.image(&lo, &hi);
            if nlo.as_ref().is_none_or(|x| l < *x) {
                nlo = Some(l);
            }
            if nhi.as_ref().is_none_or(|x| h > *x) {
                nhi = Some(h);
            }
        }
        let nlo = round_down(&nlo.unwrap(), bits);
        let nhi = round_up(&nhi.unwrap(), bits);
        let next_lo = nlo.max(lo.clone());
        let next_hi = nhi.min(hi.clone());
        if next_lo == lo && next_hi == hi {
            break;
        }
        lo = next_lo;
        hi = next_hi;
    }
    Interval { lo, hi, exact: false, endpoints: None }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SscVerdict {
    /// The first-level images are disjoint, certified by interval covers at
    /// the given refinement depth.
    Verified { depth: usize },
    /// Two first-level images share an exactly computed attractor point.
    Refuted { point: AlgebraicReal, maps: (usize, usize) },
    Unknown,
}

const MAX_PIECES: usize = 1 << 14;

/// One refinement step: images of every piece under every map, clipped to
/// the hull and merged. Merging is exact for the union, so covers stay outer.
fn refine(encl: &[MapEnclosure], hull: &Interval, pieces: &[(BigRational, BigRational)]) -> Vec<(BigRational, BigRational)> {
    let mut next = Vec::with_capacity(pieces.len() * encl.len());
    for e in encl {
        for (l, h) in pieces {
            let (il, ih) = e.image(l, h);
            next.push((il.max(hull.lo.clone()), ih.min(hull.hi.clone())));
        }
    }
    merged(next)
}

fn merged(mut xs: Vec<(BigRational, BigRational)>) -> Vec<(BigRational, BigRational)> {
    xs.sort();
    let mut out: Vec<(BigRational, BigRational)> = Vec::new();
    for (l, h) in xs {
        match out.last_mut() {
            Some(last) if l <= last.1 => {
                if h > last.1 {
                    last.1 = h;
                }
            }
            _ => out.push((l, h)),
        }
    }
    out
}

/// Whether the images of `inner` under distinct first-level maps are disjoint.
fn first_level_disjoint(encl: &[MapEnclosure], hull: &Interval, inner: &[(BigRational, BigRational)]) -> bool {
    let mut components: Vec<(BigRational, BigRational, usize)> = Vec::new();
    for (j, e) in encl.iter().enumerate() {
        let images = inner
            .iter()
            .map(|(l, h)| {
                let (il, ih) = e.image(l, h);
                (il.max(hull.lo.clone()), ih.min(hull.hi.clone()))
            })
            .collect();
        components.extend(merged(images).into_iter().map(|(l, h)| (l, h, j)));
    }
    components.sort();
    let mut max_hi: Option<&BigRational> = None;
    for (l, h, _) in &components {
        if let Some(m) = max_hi {
            if l <= m {
                return false;
            }
        }
        max_hi = Some(match max_hi {
            Some(m) if m > h => m,
            _ => h,
        });
    }
    true
}

/// Smallest refinement depth `≤ depth` whose covers certify disjointness.
fn covers_disjoint(ifs: &WeightedIFS, hull: &Interval, depth: usize) -> Option<usize> {
    let encl = MapEnclosure::of(ifs);
    let mut inner = vec![(hull.lo.clone(), hull.hi.clone())];
    for d in 0..=depth {
        if first_level_disjoint(&encl, hull, &inner) {
            return Some(d);
        }
        if d == depth || inner.len() * encl.len() > MAX_PIECES {
            break;
        }
        inner = refine(&encl, hull, &inner);
    }
    None
}

/// Exact attractor points: fixed points and their images under words of
/// length up to `depth`. `None` when a fixed point leaves the span.
pub(crate) fn exact_points(ifs: &WeightedIFS, depth: usize) -> Option<Vec<AlgebraicReal>> {
    let mut points: Vec<AlgebraicReal> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for m in ifs.maps() {
        let fp = m.fixed_point().ok()?;
        if seen.insert(fp.clone()) {
            points.push(fp);
        }
    }
    let mut frontier = points.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        for x in &frontier {
            for m in ifs.maps() {
                let y = m.apply(x).ok()?;
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        points.extend(next.iter().cloned());
        frontier = next;
        if points.len() > MAX_PIECES {
            break;
        }
    }
    Some(points)
}

/// Exact points used for refutation; the search stops early at this many.
const MAX_REFUTATION_POINTS: usize = 1 << 12;

fn shared_image_point(ifs: &WeightedIFS, depth: usize) -> Option<(AlgebraicReal, (usize, usize))> {
    let mut depth = depth;
    while depth > 0 && ifs.len().checked_pow(depth as u32).is_none_or(|c| c > MAX_REFUTATION_POINTS) {
        depth -= 1;
    }
    let points = exact_points(ifs, depth)?;
    let mut owner: HashMap<AlgebraicReal, usize> = HashMap::new();
    for (j, m) in ifs.maps().iter().enumerate() {
        for x in &points {
            let y = m.apply(x).ok()?;
            match owner.get(&y) {
                Some(&k) if k != j => return Some((y, (k, j))),
                Some(_) => {}
                None => {
                    owner.insert(y, j);
                }
            }
        }
    }
    None
}

/// Three-valued strong separation check.
///
/// `Verified` is sound: covers of the first-level images built from an outer
/// hull are pairwise disjoint. `Refuted` is sound: two first-level images
/// contain a common exactly computed attractor point. Covers are refined up
/// to `depth` levels or 2^14 pieces; `Verified` reports the first depth that
/// sufficed.
pub fn check_ssc(ifs: &WeightedIFS, depth: usize) -> Result<SscVerdict> {
    let tol = BigRational::new(BigInt::one(), BigInt::one() << 100);
    let hull = attractor_hull(ifs, &tol)?;
    if let Some(d) = covers_disjoint(ifs, &hull, depth) {
        return Ok(SscVerdict::Verified { depth: d });
    }
    if let Some((point, maps)) = shared_image_point(ifs, depth) {
        return Ok(SscVerdict::Refuted { point, maps });
    }
    Ok(SscVerdict::Unknown)
}
