//! Exact arithmetic in a finite-dimensional ℚ-span of declared real symbols.
//!
//! A [`BasisContext`] lists the symbols `1, s_1, ..., s_d` together with
//! decimal approximations. The symbols are *assumed* to be linearly
//! independent over ℚ; that assumption is never checked, only carried along
//! so that reports can state it. An [`AlgebraicReal`] is a rational
//! coordinate vector over the context, so addition and rational scaling are
//! exact and equality is decided coordinatewise.
//!
//! Order comparisons between two values that differ in an irrational
//! direction are decided from the approximations with a rigorous error
//! bound; when the bound is too coarse the comparison fails with
//! [`AlgebraicError::Undecidable`] instead of guessing.

mod commensurability;
pub mod factor;
mod number;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use commensurability::{commensurability_witness, CommensurabilityVerdict, Commensurability};
pub use factor::{factorize_rational, factorize_u64, rational_log_ratio, rational_log_ratio_bounded, DEFAULT_FACTOR_BOUND};
pub use number::{parse_decimal, parse_number, parse_rational};

/// Minimum number of fractional digits a symbol approximation should carry
/// for comparisons to be decided at full strength.
pub const RECOMMENDED_DIGITS: u32 = 50;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraicError {
    #[error("values belong to different basis contexts")]
    ContextMismatch,
    #[error("product of two irrational values leaves the rational span")]
    NonLinearProduct,
    #[error("value `{0}` is not rational")]
    NotRational(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot decide {0} at the available precision")]
    Undecidable(String),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("{value} exceeds the factorization bound {bound}")]
    FactorizationBound { value: String, bound: u64 },
    #[error("{0} must be a rational greater than 1")]
    NotAboveOne(String),
}

pub type Result<T> = std::result::Result<T, AlgebraicError>;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Symbol {
    name: String,
    decimal: String,
    approx: BigRational,
    /// Absolute error bound of `approx`.
    ulp: BigRational,
}

/// The ordered list of basis symbols; index 0 is always the constant 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisContext {
    symbols: Vec<Symbol>,
}

impl BasisContext {
    /// The context spanned by 1 alone.
    pub fn rational() -> Arc<Self> {
        Arc::new(Self { symbols: vec![Self::unit()] })
    }

    fn unit() -> Symbol {
        Symbol {
            name: "1".into(),
            decimal: "1".into(),
            approx: BigRational::one(),
            ulp: BigRational::zero(),
        }
    }

    /// Builds a context from `(name, decimal)` declarations.
    ///
    /// The approximation error of each symbol is taken to be one unit in the
    /// last given decimal place.
    pub fn with_symbols<S: AsRef<str>>(decls: &[(S, S)]) -> Result<Arc<Self>> {
        let mut symbols = vec![Self::unit()];
        for (name, decimal) in decls {
            let (name, decimal) = (name.as_ref().trim(), decimal.as_ref().trim());
            if !is_identifier(name) {
                return Err(AlgebraicError::InvalidBasis(format!("`{name}` is not a valid symbol name")));
            }
            if symbols.iter().any(|s| s.name == name) {
                return Err(AlgebraicError::InvalidBasis(format!("duplicate symbol `{name}`")));
            }
            let (approx, digits) = parse_decimal(decimal)?;
            if approx.is_zero() {
                return Err(AlgebraicError::InvalidBasis(format!("symbol `{name}` has a zero approximation")));
            }
            let ulp = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(digits));
            if ulp >= approx.abs() {
                return Err(AlgebraicError::InvalidBasis(format!(
                    "symbol `{name}` approximation is not distinguishable from zero"
                )));
            }
            symbols.push(Symbol { name: name.to_string(), decimal: decimal.to_string(), approx, ulp });
        }
        Ok(Arc::new(Self { symbols }))
    }

    /// Number of coordinates, including the constant.
    pub fn dim(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_rational_only(&self) -> bool {
        self.symbols.len() == 1
    }

    pub fn name(&self, i: usize) -> &str {
        &self.symbols[i].name
    }

    /// The decimal text the symbol was declared with.
    pub fn decimal(&self, i: usize) -> &str {
        &self.symbols[i].decimal
    }

    pub fn approx(&self, i: usize) -> &BigRational {
        &self.symbols[i].approx
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    /// Fewest fractional digits among the declared symbols.
    pub fn min_digits(&self) -> Option<u32> {
        self.symbols[1..]
            .iter()
            .map(|s| s.decimal.split('.').nth(1).map_or(0, |f| f.len() as u32))
            .min()
    }

    /// `(name, decimal)` pairs of the non-constant symbols.
    pub fn declarations(&self) -> Vec<(String, String)> {
        self.symbols[1..].iter().map(|s| (s.name.clone(), s.decimal.clone())).collect()
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn same_context(a: &Arc<BasisContext>, b: &Arc<BasisContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A real number in the ℚ-span of the context symbols.
#[derive(Clone)]
pub struct AlgebraicReal {
    ctx: Arc<BasisContext>,
    coords: Vec<BigRational>,
}

impl PartialEq for AlgebraicReal {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.ctx, &other.ctx) && self.coords == other.coords
    }
}

impl Eq for AlgebraicReal {}

impl std::hash::Hash for AlgebraicReal {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl fmt::Debug for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraicReal({self})")
    }
}

impl AlgebraicReal {
    pub fn zero(ctx: &Arc<BasisContext>) -> Self {
        Self { ctx: ctx.clone(), coords: vec![BigRational::zero(); ctx.dim()] }
    }

    pub fn one(ctx: &Arc<BasisContext>) -> Self {
        Self::from_rational(ctx, BigRational::one())
    }

    pub fn from_rational(ctx: &Arc<BasisContext>, q: BigRational) -> Self {
        let mut x = Self::zero(ctx);
        x.coords[0] = q;
        x
    }

    pub fn from_ratio(ctx: &Arc<BasisContext>, num: i64, den: i64) -> Self {
        Self::from_rational(ctx, BigRational::new(num.into(), den.into()))
    }

    /// The basis symbol with index `i` (index 0 is the constant 1).
    pub fn symbol(ctx: &Arc<BasisContext>, i: usize) -> Self {
        let mut x = Self::zero(ctx);
        x.coords[i] = BigRational::one();
        x
    }

    pub fn from_coords(ctx: &Arc<BasisContext>, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() != ctx.dim() {
            return Err(AlgebraicError::ContextMismatch);
        }
        Ok(Self { ctx: ctx.clone(), coords })
    }

    pub fn ctx(&self) -> &Arc<BasisContext> {
        &self.ctx
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// True when only the constant coordinate is nonzero.
    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then(|| &self.coords[0])
    }

    pub fn to_rational(&self) -> Result<BigRational> {
        self.as_rational().cloned().ok_or_else(|| AlgebraicError::NotRational(self.to_string()))
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if same_context(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(AlgebraicError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(Self { ctx: self.ctx.clone(), coords })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        Ok(Self { ctx: self.ctx.clone(), coords })
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self { ctx: self.ctx.clone(), coords: self.coords.iter().map(|c| c * q).collect() }
    }

    /// Product of two values; defined when at least one factor is rational.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        if let Some(q) = self.as_rational() {
            Ok(other.scale(q))
        } else if let Some(q) = other.as_rational() {
            Ok(self.scale(q))
        } else {
            Err(AlgebraicError::NonLinearProduct)
        }
    }

    /// Quotient by a rational divisor.
    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let q = other.to_rational()?;
        if q.is_zero() {
            return Err(AlgebraicError::DivisionByZero);
        }
        Ok(self.scale(&q.recip()))
    }

    /// Integer power; only rational values (or exponents 0 and 1) stay in the span.
    pub fn try_pow(&self, n: u32) -> Result<Self> {
        match n {
            0 => Ok(Self::one(&self.ctx)),
            1 => Ok(self.clone()),
            _ => {
                let q = self.as_rational().ok_or(AlgebraicError::NonLinearProduct)?;
                Ok(Self::from_rational(&self.ctx, num::pow(q.clone(), n as usize)))
            }
        }
    }

    /// Exact rational approximation of the value.
    pub fn approx(&self) -> BigRational {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(BigRational::zero(), |acc, (i, c)| acc + c * self.ctx.approx(i))
    }

    /// Bound on `|self - self.approx()|`.
    pub fn error_bound(&self) -> BigRational {
        self.coords
            .iter()
            .enumerate()
            .skip(1)
            .fold(BigRational::zero(), |acc, (i, c)| acc + c.abs() * &self.ctx.symbols[i].ulp)
    }

    /// Rational interval `[lo, hi]` certified to contain the value.
    pub fn enclosure(&self) -> (BigRational, BigRational) {
        let a = self.approx();
        let e = self.error_bound();
        (&a - &e, a + e)
    }

    pub fn to_f64(&self) -> f64 {
        self.approx().to_f64().unwrap_or(f64::NAN)
    }

    /// Sign of the value, exact for rationals and certified otherwise.
    pub fn sign(&self) -> Result<Ordering> {
        if let Some(q) = self.as_rational() {
            return Ok(q.cmp(&BigRational::zero()));
        }
        let a = self.approx();
        let e = self.error_bound();
        if a > e {
            Ok(Ordering::Greater)
        } else if a < -e {
            Ok(Ordering::Less)
        } else {
            Err(AlgebraicError::Undecidable(format!("the sign of {self}")))
        }
    }

    pub fn cmp_value(&self, other: &Self) -> Result<Ordering> {
        self.try_sub(other)?.sign()
    }

    /// Value order with a deterministic coordinate fallback when the
    /// approximations cannot separate the two values.
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        if self.coords == other.coords {
            return Ordering::Equal;
        }
        self.cmp_value(other).unwrap_or_else(|_| self.coords.cmp(&other.coords))
    }

    pub fn abs(&self) -> Result<Self> {
        Ok(match self.sign()? {
            Ordering::Less => -self,
            _ => self.clone(),
        })
    }

    /// `|self| < 1`, decided exactly when the value is rational.
    pub fn abs_lt_one(&self) -> Result<bool> {
        let one = Self::one(&self.ctx);
        let a = self.abs()?;
        Ok(a.cmp_value(&one)? == Ordering::Less)
    }
}

impl Add for &AlgebraicReal {
    type Output = AlgebraicReal;
    fn add(self, rhs: Self) -> AlgebraicReal {
        self.try_add(rhs).expect("AlgebraicReal addition across contexts")
    }
}

impl Sub for &AlgebraicReal {
    type Output = AlgebraicReal;
    fn sub(self, rhs: Self) -> AlgebraicReal {
        self.try_sub(rhs).expect("AlgebraicReal subtraction across contexts")
    }
}

impl Neg for &AlgebraicReal {
    type Output = AlgebraicReal;
    fn neg(self) -> AlgebraicReal {
        AlgebraicReal { ctx: self.ctx.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl Neg for AlgebraicReal {
    type Output = AlgebraicReal;
    fn neg(self) -> AlgebraicReal {
        -&self
    }
}

impl PartialOrd for AlgebraicReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgebraicReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_cmp(other)
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for AlgebraicReal {
    /// Canonical text: constant first, then `<rat>*<symbol>` terms in basis order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let body = if i == 0 {
                format_rational(&c.abs())
            } else {
                format!("{}*{}", format_rational(&c.abs()), self.ctx.name(i))
            };
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, "+{body}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Rank over ℚ of a list of rational vectors, by fraction-exact elimination.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let p = m[rank][col].clone();
        for r in rank + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..cols {
                let delta = &factor * &m[rank][c];
                m[r][c] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

/// True iff the values are linearly independent over ℚ as coordinate vectors.
///
/// This relies on the declared symbols themselves being independent, which
/// the context assumes.
pub fn linearly_independent_over_q(xs: &[AlgebraicReal]) -> bool {
    let Some(first) = xs.first() else {
        return true;
    };
    if xs.iter().any(|x| !same_context(x.ctx(), first.ctx())) {
        return false;
    }
    let rows: Vec<Vec<BigRational>> = xs.iter().map(|x| x.coords.clone()).collect();
    rational_rank(&rows) == xs.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx2() -> Arc<BasisContext> {
        BasisContext::with_symbols(&[
            ("s2", "1.41421356237309504880168872420969807856967187537694"),
            ("s3", "1.73205080756887729352744634150587236694280525381038"),
        ])
        .unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_arithmetic_is_exact() {
        let c = BasisContext::rational();
        let a = AlgebraicReal::from_ratio(&c, 2, 3);
        let b = AlgebraicReal::from_ratio(&c, 1, 3);
        assert_eq!(&a + &b, AlgebraicReal::one(&c));
        assert_eq!(a.scale(&q(3, 1)), AlgebraicReal::from_ratio(&c, 2, 1));
    }

    #[test]
    fn irrational_cancellation_is_exact() {
        let c = ctx2();
        let s2 = AlgebraicReal::symbol(&c, 1);
        let d = &s2 - &s2;
        assert!(d.is_zero());
        assert_eq!(d.sign().unwrap(), Ordering::Equal);
    }

    #[test]
    fn signs_use_certified_approximation() {
        let c = ctx2();
        let s2 = AlgebraicReal::symbol(&c, 1);
        let s3 = AlgebraicReal::symbol(&c, 2);
        assert_eq!(s3.cmp_value(&s2).unwrap(), Ordering::Greater);
        let near = s2.try_sub(&AlgebraicReal::from_rational(&c, q(14142135623730951, 10_000_000_000_000_000))).unwrap();
        assert_eq!(near.sign().unwrap(), Ordering::Less);
    }

    #[test]
    fn coarse_symbols_give_undecidable_signs() {
        let c = BasisContext::with_symbols(&[("t", "1.5")]).unwrap();
        let t = AlgebraicReal::symbol(&c, 1);
        let x = t.try_sub(&AlgebraicReal::from_ratio(&c, 3, 2)).unwrap();
        assert!(matches!(x.sign(), Err(AlgebraicError::Undecidable(_))));
    }

    #[test]
    fn products_of_symbols_are_rejected() {
        let c = ctx2();
        let s2 = AlgebraicReal::symbol(&c, 1);
        assert_eq!(s2.try_mul(&s2), Err(AlgebraicError::NonLinearProduct));
        let two = AlgebraicReal::from_ratio(&c, 2, 1);
        assert_eq!(s2.try_mul(&two).unwrap().coords()[1], q(2, 1));
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = AlgebraicReal::one(&BasisContext::rational());
        let b = AlgebraicReal::one(&ctx2());
        assert_eq!(a.try_add(&b), Err(AlgebraicError::ContextMismatch));
    }

    #[test]
    fn independence_examples() {
        let c = ctx2();
        let r = |n, d| AlgebraicReal::from_ratio(&c, n, d);
        let s2 = AlgebraicReal::symbol(&c, 1);
        assert!(!linearly_independent_over_q(&[r(2, 3), r(4, 9)]));
        assert!(linearly_independent_over_q(&[r(1, 1), s2.clone()]));
        let two_s2_plus_3 = &s2.scale(&q(2, 1)) + &r(3, 1);
        assert!(!linearly_independent_over_q(&[s2.clone(), two_s2_plus_3, r(1, 1)]));
    }

    #[test]
    fn display_is_canonical() {
        let c = ctx2();
        let x = AlgebraicReal::from_coords(&c, vec![q(1, 2), q(-3, 1), q(0, 1)]).unwrap();
        assert_eq!(x.to_string(), "1/2-3*s2");
        assert_eq!(AlgebraicReal::zero(&c).to_string(), "0");
        let y = AlgebraicReal::from_coords(&c, vec![q(0, 1), q(-1, 3), q(2, 1)]).unwrap();
        assert_eq!(y.to_string(), "-1/3*s2+2*s3");
    }

    #[test]
    fn basis_validation() {
        assert!(BasisContext::with_symbols(&[("a", "1.0"), ("a", "2.0")]).is_err());
        assert!(BasisContext::with_symbols(&[("a", "0.000")]).is_err());
        assert!(BasisContext::with_symbols(&[("1x", "2.0")]).is_err());
    }
}
