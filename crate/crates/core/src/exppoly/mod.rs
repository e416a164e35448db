//! Exponential polynomials `f(z) = Σ a_j e^{α_j z}` with rational
//! coefficients and frequencies in a ℚ-span.
//!
//! The variable is `z`. For a homogeneous weighted IFS the attached
//! polynomial is `m̃(z) = Σ p_j e^{b_j z}`, and the Fourier-side variable is
//! recovered through `z = -2πiξ`: a zero `ξ` of `m(ξ) = Σ p_j e^{-2πi b_j ξ}`
//! is real exactly when the matching `z` is purely imaginary.

mod zeros;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::complex::Complex64;
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::algebraic::{format_rational, same_context, AlgebraicError, AlgebraicReal, BasisContext};
use crate::ifs_core::WeightedIFS;

pub use zeros::{
    default_im_max, find_zeros, has_non_imaginary_zero, verify_zero_set_union, winding_number, xi_of, zero_strip, Strip, Window,
    Zero as LocatedZero, ZeroReport, ZeroTest, DEFAULT_TOL,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpPolyError {
    #[error("an exponential polynomial needs at least one nonzero term")]
    Empty,
    #[error("the IFS is not homogeneous")]
    NotHomogeneous,
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error("tolerance and window sizes must be positive")]
    BadParameter,
    #[error("winding number failed: {0}")]
    Winding(String),
    #[error(transparent)]
    Algebraic(#[from] AlgebraicError),
}

pub type Result<T> = std::result::Result<T, ExpPolyError>;

/// One term `coeff · e^{freq·z}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: BigRational,
    pub freq: AlgebraicReal,
}

/// Terms are sorted by increasing frequency; frequencies are distinct and
/// coefficients nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentialPolynomial {
    ctx: Arc<BasisContext>,
    terms: Vec<Term>,
}

/// Output of [`ExponentialPolynomial::normalize`]: `f(z) = factor · e^{shift·z} · poly(z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub poly: ExponentialPolynomial,
    pub shift: AlgebraicReal,
    pub factor: BigRational,
}

impl ExponentialPolynomial {
    /// Merges equal frequencies and drops zero coefficients.
    pub fn new(ctx: &Arc<BasisContext>, terms: Vec<(BigRational, AlgebraicReal)>) -> Result<Self> {
        let mut merged: BTreeMap<AlgebraicReal, BigRational> = BTreeMap::new();
        for (c, a) in terms {
            if !same_context(ctx, a.ctx()) {
                return Err(AlgebraicError::ContextMismatch.into());
            }
            *merged.entry(a).or_insert_with(BigRational::zero) += c;
        }
        let terms: Vec<Term> =
            merged.into_iter().filter(|(_, c)| !c.is_zero()).map(|(freq, coeff)| Term { coeff, freq }).collect();
        if terms.is_empty() {
            return Err(ExpPolyError::Empty);
        }
        Ok(Self { ctx: ctx.clone(), terms })
    }

    /// Rational terms `(coeff, freq)` given as `((n, d), (n, d))`.
    pub fn rational(terms: &[((i64, i64), (i64, i64))]) -> Result<Self> {
        let ctx = BasisContext::rational();
        let terms = terms
            .iter()
            .map(|&((cn, cd), (fnum, fden))| {
                (BigRational::new(cn.into(), cd.into()), AlgebraicReal::from_ratio(&ctx, fnum, fden))
            })
            .collect();
        Self::new(&ctx, terms)
    }

    /// The constant `1`.
    pub fn one(ctx: &Arc<BasisContext>) -> Self {
        Self { ctx: ctx.clone(), terms: vec![Term { coeff: BigRational::one(), freq: AlgebraicReal::zero(ctx) }] }
    }

    /// `m̃(z) = Σ p_j e^{b_j z}` for a homogeneous IFS.
    pub fn from_weighted_ifs(ifs: &WeightedIFS) -> Result<Self> {
        if !ifs.is_homogeneous() {
            return Err(ExpPolyError::NotHomogeneous);
        }
        let terms = ifs.maps().iter().zip(ifs.weights()).map(|(m, p)| (p.clone(), m.translation().clone())).collect();
        Self::new(ifs.ctx(), terms)
    }

    pub fn ctx(&self) -> &Arc<BasisContext> {
        &self.ctx
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn frequencies(&self) -> Vec<AlgebraicReal> {
        self.terms.iter().map(|t| t.freq.clone()).collect()
    }

    /// Exact product; frequencies add.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if !same_context(&self.ctx, &other.ctx) {
            return Err(AlgebraicError::ContextMismatch.into());
        }
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for s in &self.terms {
            for t in &other.terms {
                terms.push((&s.coeff * &t.coeff, s.freq.try_add(&t.freq)?));
            }
        }
        Self::new(&self.ctx, terms)
    }

    /// `z ↦ f(c z)`; the products `c·α_j` must stay in the ℚ-span.
    pub fn scale_argument(&self, c: &AlgebraicReal) -> Result<Self> {
        if c.is_zero() {
            return Err(ExpPolyError::ZeroScale);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.coeff.clone(), t.freq.try_mul(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&self.ctx, terms)
    }

    pub fn scale_argument_rational(&self, c: &BigRational) -> Result<Self> {
        self.scale_argument(&AlgebraicReal::from_rational(&self.ctx, c.clone()))
    }

    /// Divides by `a_0 e^{α_0 z}` for the lowest frequency `α_0`, giving
    /// constant term 1 and nonnegative frequencies.
    pub fn normalize(&self) -> Normalized {
        let lowest = &self.terms[0];
        let factor = lowest.coeff.clone();
        let shift = lowest.freq.clone();
        let terms = self.terms.iter().map(|t| Term { coeff: &t.coeff / &factor, freq: &t.freq - &shift }).collect();
        Normalized { poly: Self { ctx: self.ctx.clone(), terms }, shift, factor }
    }

    pub fn is_normalized(&self) -> bool {
        self.terms[0].freq.is_zero() && self.terms[0].coeff.is_one()
    }

    /// Positive generator `g` with every frequency in `gℤ`, when all
    /// frequencies lie on one rational line through 0.
    pub fn rational_generator(&self) -> Option<AlgebraicReal> {
        let base = self.terms.iter().map(|t| &t.freq).find(|a| !a.is_zero())?;
        let pivot = base.coords().iter().position(|c| !c.is_zero())?;
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for t in &self.terms {
            let q = &t.freq.coords()[pivot] / &base.coords()[pivot];
            if t.freq != base.scale(&q) {
                return None;
            }
            num_gcd = num_gcd.gcd(q.numer());
            den_lcm = den_lcm.lcm(q.denom());
        }
        let g = base.scale(&BigRational::new(num_gcd, den_lcm));
        match g.sign() {
            Ok(std::cmp::Ordering::Less) => Some(-g),
            _ => Some(g),
        }
    }

    /// Period of `f(z)` in `Im z` when the frequencies generate a rank-one
    /// lattice: `2π / g`.
    pub fn imaginary_period(&self) -> Option<f64> {
        self.rational_generator().map(|g| 2.0 * std::f64::consts::PI / g.to_f64())
    }

    pub(crate) fn numeric(&self) -> Numeric {
        Numeric {
            terms: self.terms.iter().map(|t| (t.coeff.to_f64().unwrap_or(f64::NAN), t.freq.to_f64())).collect(),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.numeric().eval(z).0
    }
}

/// Floating-point copy of the terms for evaluation.
#[derive(Clone, Debug)]
pub(crate) struct Numeric {
    pub terms: Vec<(f64, f64)>,
}

impl Numeric {
    /// `(f(z), f'(z), Σ |a_j| e^{α_j Re z})`.
    pub fn eval(&self, z: Complex64) -> (Complex64, Complex64, f64) {
        let mut f = Complex64::zero();
        let mut fp = Complex64::zero();
        let mut scale = 0.0;
        for &(a, alpha) in &self.terms {
            let e = (z * alpha).exp() * a;
            f += e;
            fp += e * alpha;
            scale += a.abs() * (alpha * z.re).exp();
        }
        (f, fp, scale)
    }

    /// `f^{(k)}(z)`.
    pub fn derivative(&self, z: Complex64, k: u32) -> Complex64 {
        self.terms.iter().map(|&(a, alpha)| (z * alpha).exp() * (a * alpha.powi(k as i32))).sum()
    }

    pub fn max_abs_freq(&self) -> f64 {
        self.terms.iter().map(|t| t.1.abs()).fold(0.0, f64::max)
    }
}

impl fmt::Display for ExponentialPolynomial {
    /// E.g. `1/2 + 1/2*e^(2/3*z)` or `1 - e^(z)`; irrational frequencies are parenthesised.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            let c = &t.coeff;
            if i > 0 {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let mag = format_rational(&c.abs());
            if t.freq.is_zero() {
                write!(f, "{mag}")?;
                continue;
            }
            if !c.abs().is_one() {
                write!(f, "{mag}*")?;
            }
            if t.freq.as_rational().is_some_and(|a| a.is_one()) {
                write!(f, "e^(z)")?;
            } else if t.freq.is_rational() {
                write!(f, "e^({}*z)", t.freq)?;
            } else {
                write!(f, "e^(({})*z)", t.freq)?;
            }
        }
        Ok(())
    }
}
