//! Fourier transform `μ̂(ξ) = ∫ e^{-2πixξ} dμ(x)` of self-similar measures,
//! moments, and measure-equality checks.
//!
//! `μ̂` satisfies `μ̂(ξ) = Σ_j p_j e^{-2πi b_j ξ} μ̂(r_j ξ)`. For homogeneous
//! systems this unrolls to the product `Π_k m(r^k ξ)`; in general the
//! recursion is unfolded down to small arguments and closed with a
//! second-order Taylor expansion built from exact moments.

mod moments;

use std::f64::consts::PI;
use std::fmt;

use num::complex::Complex64;
use num::{BigRational, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::algebraic::{format_rational, BasisContext};
use crate::exppoly::{ExpPolyError, ExponentialPolynomial};
use crate::ifs_core::{attractor_hull, IfsError, Similitude, WeightedIFS};

pub use moments::{moments, Iv, Moment, MomentVector, SymPoly};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FourierError {
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("the product formula needs a homogeneous IFS")]
    NotHomogeneous,
    #[error("symbol precision is too low to separate a moment denominator from zero")]
    Precision,
    #[error("evaluation needs more than {0} leaves; raise the tolerance")]
    Budget(usize),
    #[error("parameters must satisfy 0 < p < 1 and 0 <= q <= p, got p={p} q={q}")]
    Parameters { p: String, q: String },
    #[error(transparent)]
    Ifs(#[from] IfsError),
    #[error(transparent)]
    ExpPoly(#[from] ExpPolyError),
}

pub type Result<T> = std::result::Result<T, FourierError>;

/// `μ̂(ξ)` with a bound on `|value - μ̂(ξ)|` covering truncation and rounding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourierSample {
    pub xi: f64,
    pub value: Complex64,
    pub error_bound: f64,
}

/// Floating-point copy of the map data: `(r_j, b_j, p_j)`.
fn numeric(ifs: &WeightedIFS) -> Vec<(f64, f64, f64)> {
    ifs.maps()
        .iter()
        .zip(ifs.weights())
        .map(|(m, p)| (m.ratio().to_f64(), m.translation().to_f64(), p.to_f64().unwrap_or(f64::NAN)))
        .collect()
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(FourierError::BadTolerance(tol))
    }
}

fn exact_one(xi: f64) -> FourierSample {
    FourierSample { xi, value: Complex64::new(1.0, 0.0), error_bound: 0.0 }
}

/// `m(η) = Σ_j p_j e^{-2πi b_j η}`.
fn mask(maps: &[(f64, f64, f64)], eta: f64) -> Complex64 {
    maps.iter().map(|&(_, b, p)| p * Complex64::from_polar(1.0, -2.0 * PI * b * eta)).sum()
}

const MAX_FACTORS: usize = 100_000;

/// `Π_{k<K} m(r^k ξ)` with `K` chosen so that the neglected tail moves the
/// value by less than `tol`.
pub fn fourier_product(ifs: &WeightedIFS, xi: f64, tol: f64) -> Result<FourierSample> {
    check_tol(tol)?;
    let signed = ifs.common_ratio().ok_or(FourierError::NotHomogeneous)?.to_f64();
    let r = signed.abs();
    if xi == 0.0 {
        return Ok(exact_one(xi));
    }
    let maps = numeric(ifs);
    // |m(η) - 1| <= 2π B |η|, so the tail product differs from 1 by at most e^S - 1.
    let b: f64 = maps.iter().map(|&(_, b, p)| p * b.abs()).sum();
    let target = (tol / 2.0).ln_1p();
    let mut k = 0;
    let mut tail = 2.0 * PI * b * xi.abs() / (1.0 - r);
    let mut value = Complex64::new(1.0, 0.0);
    let mut eta = xi;
    while tail > target && k < MAX_FACTORS {
        value *= mask(&maps, eta);
        eta *= signed;
        tail *= r;
        k += 1;
    }
    let rounding = (k as f64 + 1.0) * (maps.len() as f64 + 8.0) * f64::EPSILON;
    Ok(FourierSample { xi, value, error_bound: tail.exp_m1() + rounding })
}

const MAX_LEAVES: usize = 50_000_000;

/// Moment data for the Taylor closure.
struct Closure {
    m1: f64,
    m2: f64,
    /// Bound on `E|X|^3`.
    abs3: f64,
}

impl Closure {
    fn new(ifs: &WeightedIFS) -> Result<Self> {
        let m = moments(ifs, 4)?;
        let hull = attractor_hull(ifs, &BigRational::new(1.into(), 1_000_000_000_000u64.into()))?;
        let radius = hull.lo.abs().max(hull.hi.abs()).to_f64().unwrap_or(f64::INFINITY);
        let abs3 = radius.powi(3).min((m.to_f64(2) * m.to_f64(4)).sqrt());
        Ok(Self { m1: m.to_f64(1), m2: m.to_f64(2), abs3 })
    }

    fn value(&self, eta: f64) -> Complex64 {
        Complex64::new(1.0 - 2.0 * PI * PI * self.m2 * eta * eta, -2.0 * PI * self.m1 * eta)
    }

    fn error(&self, eta: f64) -> f64 {
        (2.0 * PI * eta.abs()).powi(3) * self.abs3 / 6.0
    }
}

struct Unfold<'a> {
    maps: &'a [(f64, f64, f64)],
    closure: Closure,
    cutoff: f64,
    leaves: usize,
    depth: usize,
}

impl Unfold<'_> {
    /// Returns the weighted value and the weighted closure error.
    fn eval(&mut self, eta: f64, level: usize) -> Result<(Complex64, f64)> {
        if eta.abs() < self.cutoff {
            self.leaves += 1;
            self.depth = self.depth.max(level);
            if self.leaves > MAX_LEAVES {
                return Err(FourierError::Budget(MAX_LEAVES));
            }
            return Ok((self.closure.value(eta), self.closure.error(eta)));
        }
        let mut value = Complex64::zero();
        let mut err = 0.0;
        for &(r, b, p) in self.maps {
            let (v, e) = self.eval(r * eta, level + 1)?;
            value += p * Complex64::from_polar(1.0, -2.0 * PI * b * eta) * v;
            err += p * e;
        }
        Ok((value, err))
    }
}

/// `μ̂(ξ)` for any IFS by unfolding the functional equation until the
/// argument drops below a cutoff, then closing with
/// `1 - 2πi M_1 η - 2π² M_2 η²`.
pub fn fourier_recursive(ifs: &WeightedIFS, xi: f64, tol: f64) -> Result<FourierSample> {
    check_tol(tol)?;
    if xi == 0.0 {
        return Ok(exact_one(xi));
    }
    let maps = numeric(ifs);
    let closure = Closure::new(ifs)?;
    let cutoff = if closure.abs3 > 0.0 {
        (3.0 * tol / closure.abs3).cbrt() / (2.0 * PI)
    } else {
        f64::INFINITY
    };
    let mut unfold = Unfold { maps: &maps, closure, cutoff, leaves: 0, depth: 0 };
    let (value, err) = unfold.eval(xi, 0)?;
    let rounding = (unfold.depth as f64 + 4.0) * (maps.len() as f64 + 8.0) * f64::EPSILON;
    Ok(FourierSample { xi, value, error_bound: err + rounding })
}

/// Product formula for homogeneous systems, recursive evaluation otherwise.
pub fn fourier_auto(ifs: &WeightedIFS, xi: f64, tol: f64) -> Result<FourierSample> {
    if ifs.is_homogeneous() {
        fourier_product(ifs, xi, tol)
    } else {
        fourier_recursive(ifs, xi, tol)
    }
}

/// `n` equally spaced points from `lo` to `hi` inclusive.
pub fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Rows `xi,re,im,abs,error_bound`.
pub fn samples_to_csv(samples: &[FourierSample]) -> String {
    let mut out = String::from("xi,re,im,abs,error_bound\n");
    for s in samples {
        out.push_str(&format!("{:e},{:e},{:e},{:e},{:e}\n", s.xi, s.value.re, s.value.im, s.value.norm(), s.error_bound));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Moment { index: usize, a: String, b: String },
    Fourier { xi: f64, a: Complex64, b: Complex64, bound: f64 },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Moment { index, a, b } => write!(f, "M_{index}: {a} vs {b}"),
            Self::Fourier { xi, a, b, bound } => write!(
                f,
                "xi={xi:e}: {:e}{:+e}i vs {:e}{:+e}i, difference {:e} exceeds bound {bound:e}",
                a.re,
                a.im,
                b.re,
                b.im,
                (a - b).norm()
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Equality {
    /// Every exact moment up to the order and every grid value agreed.
    /// `unresolved` counts moments whose enclosures overlap without an
    /// exact comparison being possible.
    EqualUpToChecks { moments: usize, grid: usize, unresolved: usize },
    Distinct(Witness),
}

impl fmt::Display for Equality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EqualUpToChecks { moments, grid, unresolved } => {
                write!(f, "EqualUpToChecks moments=0..{moments} grid_points={grid} unresolved_moments={unresolved}")
            }
            Self::Distinct(w) => write!(f, "Distinct witness=\"{w}\""),
        }
    }
}

/// Compares exact moments `M_0..M_order`, then Fourier values on `grid`.
/// Agreement is a necessary condition for equality, checked to finite order.
pub fn measures_equal(a: &WeightedIFS, b: &WeightedIFS, order: usize, grid: &[f64], tol: f64) -> Result<Equality> {
    check_tol(tol)?;
    let (ma, mb) = (moments(a, order)?, moments(b, order)?);
    let mut unresolved = 0;
    for n in 0..=order {
        match ma.compare(&mb, n) {
            Some(true) => {}
            Some(false) => {
                return Ok(Equality::Distinct(Witness::Moment { index: n, a: ma.render(n), b: mb.render(n) }));
            }
            None => unresolved += 1,
        }
    }
    for &xi in grid {
        let (fa, fb) = (fourier_auto(a, xi, tol)?, fourier_auto(b, xi, tol)?);
        let bound = fa.error_bound + fb.error_bound;
        if (fa.value - fb.value).norm() > bound {
            return Ok(Equality::Distinct(Witness::Fourier { xi, a: fa.value, b: fb.value, bound }));
        }
    }
    Ok(Equality::EqualUpToChecks { moments: order, grid: grid.len(), unresolved })
}

/// The two-map base `{x/3 w. p, x/3 + 2/3 w. 1-p}` and the four-map system
/// `{f, f∘f, f∘g, g}` with weights `q, p(p-q), (1-p)(p-q), 1-p`, zero-weight
/// maps dropped.
pub fn four_map_systems(p: &BigRational, q: &BigRational) -> Result<(WeightedIFS, WeightedIFS)> {
    let one = BigRational::one();
    if !(p.is_positive() && p < &one && !q.is_negative() && q <= p) {
        return Err(FourierError::Parameters { p: format_rational(p), q: format_rational(q) });
    }
    let ctx = BasisContext::rational();
    let sim = |r: (i64, i64), b: (i64, i64)| Similitude::rational(&ctx, r, b);
    let base = WeightedIFS::new(vec![sim((1, 3), (0, 1))?, sim((1, 3), (2, 3))?], vec![p.clone(), &one - p])?;
    let four = WeightedIFS::new_dropping_zero_weights(
        vec![sim((1, 3), (0, 1))?, sim((1, 9), (0, 1))?, sim((1, 9), (2, 9))?, sim((1, 3), (2, 3))?],
        vec![q.clone(), p * (p - q), (&one - p) * (p - q), &one - p],
    )?;
    Ok((base, four))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FourMapReport {
    /// The ratio-1/9 block of the four-map mask equals `(p-q) m̃(z/3)`.
    pub shift: bool,
    /// The ratio-1/3 block plus `p-q` equals the base mask `p + (1-p)E`.
    pub collapse: bool,
    pub equality: Equality,
}

impl FourMapReport {
    pub fn holds(&self) -> bool {
        self.shift && self.collapse && matches!(self.equality, Equality::EqualUpToChecks { .. })
    }
}

impl fmt::Display for FourMapReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} shift={} collapse={} equality=\"{}\"", self.holds(), self.shift, self.collapse, self.equality)
    }
}

/// Checks that the four-map system generates the same measure as its base.
///
/// Writing the functional equation of the four-map system in `z = -2πiξ`,
/// the maps of ratio 1/9 contribute `Σ w_j e^{b_j z} μ̂(ξ/9)`. Symbolically
/// this block equals `c·m̃(z/3)` with `c = p - q`, and `m̃(z/3) μ̂(ξ/9) = μ̂(ξ/3)`
/// is the base equation at `ξ/3`. The remaining ratio-1/3 terms plus `c`
/// must then equal `m̃(z)`. Both identities are decided exactly; the
/// measures are also compared by moments to order 20 and on a grid.
pub fn verify_section4_example(p: &BigRational, q: &BigRational) -> Result<FourMapReport> {
    let (base, four) = four_map_systems(p, q)?;
    let ctx = base.ctx().clone();
    let mask = ExponentialPolynomial::from_weighted_ifs(&base)?;
    let (third, ninth) = (BigRational::new(1.into(), 3.into()), BigRational::new(1.into(), 9.into()));
    let mut block3 = Vec::new();
    let mut block9 = Vec::new();
    let mut other = false;
    for (m, w) in four.maps().iter().zip(four.weights()) {
        let term = (w.clone(), m.translation().clone());
        match m.ratio().as_rational() {
            Some(r) if *r == third => block3.push(term),
            Some(r) if *r == ninth => block9.push(term),
            _ => other = true,
        }
    }
    let c: BigRational = block9.iter().map(|(w, _)| w.clone()).sum();
    let shift = !other
        && c == p - q
        && if block9.is_empty() {
            true
        } else {
            let scaled = mask.scale_argument_rational(&third)?;
            let cm = ExponentialPolynomial::new(&ctx, scaled.terms().iter().map(|t| (&t.coeff * &c, t.freq.clone())).collect())?;
            ExponentialPolynomial::new(&ctx, block9)? == cm
        };
    let mut collapsed = block3;
    collapsed.push((c, crate::algebraic::AlgebraicReal::zero(&ctx)));
    let collapse = ExponentialPolynomial::new(&ctx, collapsed)? == mask;
    let equality = measures_equal(&four, &base, 20, &grid(-10.0, 10.0, 21), 1e-10)?;
    Ok(FourMapReport { shift, collapse, equality })
}
