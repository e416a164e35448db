//! Zero location for exponential polynomials: a dominance strip for the
//! real parts, winding numbers by adaptive Gauss-Kronrod quadrature of
//! `f'/f`, rectangle subdivision and Newton refinement.
//!
//! Counts are validated only by integer snapping and parent/child
//! consistency; there is no interval certification.

use std::f64::consts::PI;

use num::complex::Complex64;
use num::Zero as _;

use super::{ExpPolyError, ExponentialPolynomial, Numeric, Result};
use crate::ifs_core::WeightedIFS;

pub const DEFAULT_TOL: f64 = 1e-9;

/// Real parts of all zeros lie in `[re_lo, re_hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Strip {
    pub re_lo: f64,
    pub re_hi: f64,
    /// Single-term input: there are no zeros and the bounds are meaningless.
    pub degenerate: bool,
}

/// Closed axis-parallel rectangle in the `z`-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
}

impl Window {
    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.re_lo - slack && z.re <= self.re_hi + slack && z.im >= self.im_lo - slack && z.im <= self.im_hi + slack
    }

    fn width(&self) -> f64 {
        self.re_hi - self.re_lo
    }

    fn height(&self) -> f64 {
        self.im_hi - self.im_lo
    }

    fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_lo + self.re_hi), 0.5 * (self.im_lo + self.im_hi))
    }

    /// Splits the longer side at fraction `t`.
    fn split(&self, t: f64) -> (Window, Window) {
        if self.width() >= self.height() {
            let x = self.re_lo + t * self.width();
            (Window { re_hi: x, ..*self }, Window { re_lo: x, ..*self })
        } else {
            let y = self.im_lo + t * self.height();
            (Window { im_hi: y, ..*self }, Window { im_lo: y, ..*self })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Zero {
    pub z: Complex64,
    pub multiplicity: u32,
    /// `|f(z)|`.
    pub residual: f64,
}

impl Zero {
    /// The same point in the Fourier variable, `ξ = iz / (2π)`.
    pub fn xi(&self) -> Complex64 {
        xi_of(self.z)
    }
}

pub fn xi_of(z: Complex64) -> Complex64 {
    Complex64::new(-z.im, z.re) / (2.0 * PI)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroReport {
    /// Sorted by `(Im z, Re z)`.
    pub zeros: Vec<Zero>,
    pub window: Window,
    pub strip: Strip,
    pub complete_in_window: bool,
}

impl ZeroReport {
    /// Zeros counted with multiplicity.
    pub fn total_multiplicity(&self) -> u32 {
        self.zeros.iter().map(|z| z.multiplicity).sum()
    }

    /// Header plus one row per zero: `re,im,multiplicity,residual,xi_re,xi_im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,multiplicity,residual,xi_re,xi_im\n");
        for z in &self.zeros {
            let xi = z.xi();
            out.push_str(&format!(
                "{:.15e},{:.15e},{},{:.3e},{:.15e},{:.15e}\n",
                z.z.re, z.z.im, z.multiplicity, z.residual, xi.re, xi.im
            ));
        }
        out
    }
}

/// Bisection for the root of a monotone function on a bracket grown from `[-1, 1]`.
fn monotone_root(h: impl Fn(f64) -> f64, increasing: bool) -> f64 {
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    let below = |v: f64| if increasing { v < 0.0 } else { v > 0.0 };
    while !below(h(lo)) {
        lo *= 2.0;
        if lo < -1e300 {
            break;
        }
    }
    while below(h(hi)) {
        hi *= 2.0;
        if hi > 1e300 {
            break;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if below(h(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Real-part bounds for the zeros, from the two dominance inequalities
/// `|a_n| e^{α_n x} > Σ_{j<n} |a_j| e^{α_j x}` and
/// `|a_0| e^{α_0 x} > Σ_{j>0} |a_j| e^{α_j x}`.
pub fn zero_strip(f: &ExponentialPolynomial) -> Strip {
    if f.len() < 2 {
        return Strip { re_lo: 0.0, re_hi: 0.0, degenerate: true };
    }
    let t = f.numeric().terms;
    let n = t.len() - 1;
    let (a0, f0) = (t[0].0.abs(), t[0].1);
    let (an, fnn) = (t[n].0.abs(), t[n].1);
    let right = |x: f64| t[..n].iter().map(|&(a, al)| a.abs() * ((al - fnn) * x).exp()).sum::<f64>() - an;
    let left = |x: f64| t[1..].iter().map(|&(a, al)| a.abs() * ((al - f0) * x).exp()).sum::<f64>() - a0;
    let hi = monotone_root(right, false);
    let lo = monotone_root(left, true);
    let pad = |x: f64| 1e-9 * (1.0 + x.abs());
    Strip { re_lo: lo - pad(lo), re_hi: hi + pad(hi), degenerate: false }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Boundary points with `|f| < NEAR_ZERO · Σ|a_j e^{α_j z}|` abort the count.
const NEAR_ZERO: f64 = 1e-6;
const SNAP: f64 = 0.2;
const EVAL_BUDGET: usize = 400_000;

#[derive(Debug)]
enum WindingFailure {
    NearZero,
    NotInteger(f64),
    Budget,
}

struct Contour<'a> {
    f: &'a Numeric,
    evals: usize,
}

impl Contour<'_> {
    /// `∫_{z0}^{z1} f'/f dz` by adaptive GK15.
    fn segment(&mut self, z0: Complex64, z1: Complex64) -> std::result::Result<Complex64, WindingFailure> {
        let dz = z1 - z0;
        let len = dz.norm();
        let mut total = Complex64::zero();
        let mut stack = vec![(0.0f64, 1.0f64, 0u32)];
        while let Some((a, b, depth)) = stack.pop() {
            let (k, g) = self.gk(z0, dz, a, b)?;
            let err = (k - g).norm();
            let tol = 1e-10 * (1.0 + len) * (b - a);
            if err <= tol || depth >= 48 || (b - a) * len < 1e-13 {
                total += k;
            } else {
                let m = 0.5 * (a + b);
                stack.push((m, b, depth + 1));
                stack.push((a, m, depth + 1));
            }
        }
        Ok(total)
    }

    fn gk(&mut self, z0: Complex64, dz: Complex64, a: f64, b: f64) -> std::result::Result<(Complex64, Complex64), WindingFailure> {
        self.evals += 15;
        if self.evals > EVAL_BUDGET {
            return Err(WindingFailure::Budget);
        }
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut k = Complex64::zero();
        let mut g = Complex64::zero();
        for i in 0..8 {
            let ts: &[f64] = if i == 7 { &[0.0] } else { &[-1.0, 1.0] };
            for &s in ts {
                let t = c + s * h * XGK[i];
                let z = z0 + dz * t;
                let (fv, fp, scale) = self.f.eval(z);
                if fv.norm() < NEAR_ZERO * scale {
                    return Err(WindingFailure::NearZero);
                }
                let v = fp / fv * dz;
                k += v * WGK[i];
                if i % 2 == 1 {
                    g += v * WG[i / 2];
                }
            }
        }
        Ok((k * h, g * h))
    }

    fn winding(&mut self, w: &Window) -> std::result::Result<i64, WindingFailure> {
        let c = [
            Complex64::new(w.re_lo, w.im_lo),
            Complex64::new(w.re_hi, w.im_lo),
            Complex64::new(w.re_hi, w.im_hi),
            Complex64::new(w.re_lo, w.im_hi),
        ];
        let mut total = Complex64::zero();
        for i in 0..4 {
            total += self.segment(c[i], c[(i + 1) % 4])?;
        }
        let n = total / Complex64::new(0.0, 2.0 * PI);
        let r = n.re.round();
        if (n.re - r).abs() < SNAP && n.im.abs() < SNAP {
            Ok(r as i64)
        } else {
            Err(WindingFailure::NotInteger(n.re))
        }
    }
}

/// Number of zeros (with multiplicity) inside `w`, by the argument principle.
pub fn winding_number(f: &ExponentialPolynomial, w: &Window) -> Result<i64> {
    let num = f.numeric();
    let mut c = Contour { f: &num, evals: 0 };
    c.winding(w).map_err(|e| {
        ExpPolyError::Winding(match e {
            WindingFailure::NearZero => "the contour passes too close to a zero".into(),
            WindingFailure::NotInteger(n) => format!("count {n:.3} is not near an integer"),
            WindingFailure::Budget => "evaluation budget exhausted".into(),
        })
    })
}

/// Newton with multiplicity `m`; returns the limit if `|f| ≤ tol` there.
fn newton(f: &Numeric, start: Complex64, m: u32, tol: f64) -> Option<Complex64> {
    let mut z = start;
    let mut polish = 0;
    for _ in 0..200 {
        let (fv, fp, _) = f.eval(z);
        if !fv.re.is_finite() || !fv.im.is_finite() || fp.norm() == 0.0 {
            return None;
        }
        let step = fv / fp * m as f64;
        z -= step;
        if step.norm() <= 1e-15 * (1.0 + z.norm()) || fv.norm() <= tol * 1e-3 {
            polish += 1;
            if polish >= 3 {
                break;
            }
        }
    }
    (f.eval(z).0.norm() <= tol).then_some(z)
}

/// Whether `z` looks like a zero of multiplicity exactly `m`: the first `m`
/// derivatives (orders `0..m`) are negligible at the local scale and the
/// `m`-th is not.
fn looks_multiple(f: &Numeric, z: Complex64, m: u32) -> bool {
    let alpha = f.max_abs_freq().max(1.0);
    let (_, _, scale) = f.eval(z);
    let rel = |k: u32| f.derivative(z, k).norm() / (scale * alpha.powi(k as i32));
    (1..m).all(|k| rel(k) < 1e-5) && rel(m) > 1e-9
}

const SPLITS: [f64; 5] = [0.5, 0.5617977528, 0.4370786517, 0.6180339887, 0.3819660113];
const MAX_DEPTH: u32 = 80;

struct Search<'a> {
    contour: Contour<'a>,
    tol: f64,
    found: Vec<Zero>,
    complete: bool,
}

impl Search<'_> {
    fn resolve(&mut self, w: Window, n: i64, depth: u32) {
        if n <= 0 {
            if n < 0 {
                self.complete = false;
            }
            return;
        }
        let f = self.contour.f;
        let slack = 1e-12 * (1.0 + w.diameter());
        if let Some(z) = newton(f, w.center(), n as u32, self.tol) {
            if w.contains(z, slack) && (n == 1 || looks_multiple(f, z, n as u32)) {
                let residual = f.eval(z).0.norm();
                self.found.push(Zero { z, multiplicity: n as u32, residual });
                return;
            }
        }
        if depth >= MAX_DEPTH || w.diameter() < 1e-12 {
            self.complete = false;
            return;
        }
        for &t in &SPLITS {
            let (a, b) = w.split(t);
            let (Ok(na), Ok(nb)) = (self.contour.winding(&a), self.contour.winding(&b)) else {
                if self.contour.evals > EVAL_BUDGET {
                    break;
                }
                continue;
            };
            if na + nb != n {
                continue;
            }
            self.resolve(a, na, depth + 1);
            self.resolve(b, nb, depth + 1);
            return;
        }
        self.complete = false;
    }
}

/// All zeros with `|Im z| ≤ im_max`.
///
/// Only `Im z ≥ 0` is searched (slightly below the real axis, so real zeros
/// are caught); the rest follow from conjugate symmetry. The outer contour
/// lies outside the dominance strip by a margin and is nudged by irrational
/// offsets if it passes too close to a zero.
pub fn find_zeros(f: &ExponentialPolynomial, im_max: f64, tol: f64) -> Result<ZeroReport> {
    if !(im_max > 0.0 && tol > 0.0) {
        return Err(ExpPolyError::BadParameter);
    }
    let g = f.normalize().poly;
    let strip = zero_strip(&g);
    if strip.degenerate {
        let window = Window { re_lo: 0.0, re_hi: 0.0, im_lo: -im_max, im_hi: im_max };
        return Ok(ZeroReport { zeros: vec![], window, strip, complete_in_window: true });
    }
    let num = g.numeric();
    let min_freq = num.terms[1..].iter().map(|t| t.1.abs()).fold(f64::INFINITY, f64::min);
    let margin = (1.0 / min_freq).clamp(0.1, 50.0);
    let mut contour = Contour { f: &num, evals: 0 };
    let mut outer = None;
    for k in 0..8 {
        let nudge = 0.0137 * (1.0 + k as f64 * std::f64::consts::SQRT_2);
        let w = Window {
            re_lo: strip.re_lo - margin * (1.0 + 0.1 * nudge),
            re_hi: strip.re_hi + margin * (1.0 + 0.1 * nudge),
            im_lo: -nudge,
            im_hi: im_max + nudge,
        };
        if let Ok(n) = contour.winding(&w) {
            outer = Some((w, n));
            break;
        }
    }
    let window = Window { re_lo: strip.re_lo - margin, re_hi: strip.re_hi + margin, im_lo: -im_max, im_hi: im_max };
    let Some((outer, n)) = outer else {
        return Ok(ZeroReport { zeros: vec![], window, strip, complete_in_window: false });
    };
    let mut search = Search { contour, tol, found: Vec::new(), complete: true };
    search.resolve(outer, n, 0);
    let complete = search.complete;
    // Real zeros are reported once; zeros just below the axis are
    // conjugates of ones already found above it.
    let eps = 1e-9 * (1.0 + im_max);
    let mut zeros = Vec::new();
    for z in search.found {
        if z.z.im > im_max {
            continue;
        }
        if z.z.im.abs() <= eps {
            zeros.push(Zero { z: Complex64::new(z.z.re, 0.0), ..z });
        } else if z.z.im > 0.0 {
            zeros.push(z);
            zeros.push(Zero { z: z.z.conj(), ..z });
        }
    }
    zeros.sort_by(|a, b| a.z.im.total_cmp(&b.z.im).then(a.z.re.total_cmp(&b.z.re)));
    Ok(ZeroReport { zeros, window, strip, complete_in_window: complete })
}

#[derive(Clone, Debug, PartialEq)]
pub enum ZeroTest {
    /// A zero with `|Re z| > 10·tol`.
    Yes(Zero),
    /// Every zero in the window is on the imaginary axis and the window
    /// covers a full period, so the statement holds everywhere.
    NoneFound { period: f64 },
    Inconclusive(String),
}

/// Default search height: two periods for rank-one frequency lattices, 100 otherwise.
pub fn default_im_max(f: &ExponentialPolynomial) -> f64 {
    f.normalize().poly.imaginary_period().map_or(100.0, |p| 2.0 * p)
}

/// Looks for a zero off the imaginary axis.
pub fn has_non_imaginary_zero(f: &ExponentialPolynomial, im_max: Option<f64>, tol: f64) -> Result<ZeroTest> {
    let g = f.normalize().poly;
    let im_max = im_max.unwrap_or_else(|| default_im_max(&g));
    let period = g.imaginary_period();
    if g.len() < 2 {
        return Ok(ZeroTest::NoneFound { period: period.unwrap_or(0.0) });
    }
    let report = find_zeros(&g, im_max, tol)?;
    let off_axis = report
        .zeros
        .iter()
        .filter(|z| z.z.re.abs() > 10.0 * tol)
        .max_by(|a, b| a.z.re.abs().total_cmp(&b.z.re.abs()).then(b.z.im.total_cmp(&a.z.im)));
    if let Some(z) = off_axis {
        // Prefer the witness closest to the real axis in the upper half plane.
        let best = report
            .zeros
            .iter()
            .filter(|w| w.z.re.abs() > 10.0 * tol && w.z.im >= 0.0)
            .min_by(|a, b| a.z.im.total_cmp(&b.z.im))
            .unwrap_or(z);
        return Ok(ZeroTest::Yes(*best));
    }
    if !report.complete_in_window {
        return Ok(ZeroTest::Inconclusive("the search window was not fully resolved".into()));
    }
    if report.zeros.iter().any(|z| z.z.re.abs() > tol) {
        return Ok(ZeroTest::Inconclusive("a zero lies within 10*tol of the imaginary axis".into()));
    }
    match period {
        Some(p) if im_max >= p => Ok(ZeroTest::NoneFound { period: p }),
        Some(p) => Ok(ZeroTest::Inconclusive(format!("window height {im_max} is below the period {p:.6}"))),
        None => Ok(ZeroTest::Inconclusive(
            "frequencies are not commensurable, so the zero set is not periodic".into(),
        )),
    }
}

/// Checks that every zero `z` of `m̃` (with `|Im z| ≤ im_max`) gives zeros
/// `r^{-k} z`, `k = 0..=depth`, of `Π_{j=0}^{depth} m̃(r^j w)`, after Newton
/// refinement to a relative residual `≤ tol`.
pub fn verify_zero_set_union(ifs: &WeightedIFS, depth: u32, im_max: f64, tol: f64) -> Result<bool> {
    let m = ExponentialPolynomial::from_weighted_ifs(ifs)?;
    let r = ifs.common_ratio().ok_or(ExpPolyError::NotHomogeneous)?.to_f64();
    let num = m.numeric();
    let report = find_zeros(&m, im_max, tol)?;
    let product = |w: Complex64| -> (Complex64, f64) {
        // (P'/P, |P| / Π scale_j)
        let mut logd = Complex64::zero();
        let mut rel = 1.0;
        for j in 0..=depth {
            let s = r.powi(j as i32);
            let (fv, fp, scale) = num.eval(w * s);
            logd += fp / fv * s;
            rel *= fv.norm() / scale;
        }
        (logd, rel)
    };
    for z in &report.zeros {
        for k in 0..=depth {
            let mut w = z.z / r.powi(k as i32);
            let mult = z.multiplicity as f64;
            for _ in 0..30 {
                let (logd, rel) = product(w);
                if rel <= tol * 1e-3 || !logd.re.is_finite() {
                    break;
                }
                w -= mult / logd;
            }
            let (_, rel) = product(w);
            if rel > tol || (w * r.powi(k as i32) - z.z).norm() > 1e-6 * (1.0 + z.z.norm()) {
                return Ok(false);
            }
        }
    }
    Ok(report.complete_in_window)
}
