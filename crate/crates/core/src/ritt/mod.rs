//! Exponential polynomials as Laurent polynomials over a frequency lattice:
//! irreducibility tests, product identities between generators, iteration
//! factorization, and the commensurability / zero-condition pipelines.
//!
//! Verdicts report computed facts. Theorem-level hypotheses that the
//! pipelines rely on (independent frequencies, non-uniform weights) are
//! checked and attached as metadata rather than assumed.

pub mod factor;
mod laurent;

use std::fmt;

use num::{BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::algebraic::{linearly_independent_over_q, rational_log_ratio, AlgebraicError};
use crate::exppoly::{has_non_imaginary_zero, ExpPolyError, ExponentialPolynomial, LocatedZero, ZeroTest};
use crate::ifs_core::{iterate, IfsError, WeightedIFS};

pub use laurent::{build_lattice, from_laurent, joint_lattice, to_laurent, FrequencyLattice, LaurentPolynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RittError {
    #[error("no frequencies given")]
    EmptyInput,
    #[error("values come from different basis contexts")]
    ContextMismatch,
    #[error("frequencies do not form an integer lattice")]
    Lattice,
    #[error("frequency {0} is outside the lattice")]
    OutsideLattice(String),
    #[error("the exponential polynomial is not normalized (constant term 1, lowest frequency 0)")]
    NotNormalized,
    #[error("the IFS is not homogeneous")]
    NotHomogeneous,
    #[error("the common ratio {0} is not a positive rational")]
    UnsupportedRatio(String),
    #[error("iteration counts must be positive")]
    ZeroPower,
    #[error(transparent)]
    ExpPoly(#[from] ExpPolyError),
    #[error(transparent)]
    Algebraic(#[from] AlgebraicError),
    #[error(transparent)]
    Ifs(#[from] IfsError),
}

pub type Result<T> = std::result::Result<T, RittError>;

fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items.iter().map(|x| format!("({x})")).collect::<Vec<_>>().join(sep)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MultinomialVerdict {
    Irreducible,
    /// Factors whose product is the input exactly.
    Reducible(Vec<LaurentPolynomial>),
    OutOfScope(String),
}

impl fmt::Display for MultinomialVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Irreducible => write!(f, "Irreducible"),
            Self::Reducible(w) => write!(f, "Reducible witness={}", join(w, "*")),
            Self::OutOfScope(why) => write!(f, "OutOfScope reason=\"{why}\""),
        }
    }
}

/// Univariate factorization of a unit-normalized Laurent polynomial in
/// variable `var`: factors (the first one carrying the constant) and
/// whether every factor is proved irreducible.
fn univariate_factors(u: &LaurentPolynomial, var: usize) -> (Vec<LaurentPolynomial>, bool) {
    let coeffs = u.univariate(var).expect("unit-normalized with one active variable");
    let (prim, content) = factor::primitive(&coeffs);
    let parts = factor::factor_completely(&prim);
    let proved = parts.iter().all(|(_, ok)| *ok);
    let mut out: Vec<LaurentPolynomial> = parts
        .iter()
        .map(|(p, _)| LaurentPolynomial::from_univariate(u.arity(), var, &factor::to_rational(p)))
        .collect();
    out[0] = out[0].mul(&LaurentPolynomial::constant(u.arity(), content));
    (out, proved)
}

/// A constant term plus at least two pure powers of distinct variables.
/// Such polynomials are irreducible: as polynomials in one of the
/// variables they have the form `c y^k - d` with `d` squarefree.
fn has_pure_power_shape(u: &LaurentPolynomial) -> bool {
    let zero = vec![0; u.arity()];
    if !u.terms().contains_key(&zero) {
        return false;
    }
    let mut seen = vec![false; u.arity()];
    let mut count = 0;
    for e in u.terms().keys().filter(|e| **e != zero) {
        let nz: Vec<usize> = (0..e.len()).filter(|&i| e[i] != 0).collect();
        if nz.len() != 1 || e[nz[0]] <= 0 || seen[nz[0]] {
            return false;
        }
        seen[nz[0]] = true;
        count += 1;
    }
    count >= 2
}

/// Irreducibility in the Laurent ring `ℚ[y_1^{±1}, ..., y_N^{±1}]`.
pub fn is_irreducible_multinomial(l: &LaurentPolynomial) -> MultinomialVerdict {
    if l.is_zero() {
        return MultinomialVerdict::OutOfScope("the zero polynomial".into());
    }
    let u = l.unit_normalized();
    let active = u.active_variables();
    match active.len() {
        0 => MultinomialVerdict::OutOfScope("a unit".into()),
        1 => {
            let (mut factors, proved) = univariate_factors(&u, active[0]);
            if factors.len() >= 2 {
                // Restore the monomial that unit normalization removed.
                factors[0] = factors[0].shift(&l.min_exponents());
                MultinomialVerdict::Reducible(factors)
            } else if proved {
                MultinomialVerdict::Irreducible
            } else {
                MultinomialVerdict::OutOfScope(format!(
                    "degree above {} with no factor of degree at most 3",
                    factor::DECISIVE_DEGREE
                ))
            }
        }
        _ if has_pure_power_shape(&u) => MultinomialVerdict::Irreducible,
        _ => MultinomialVerdict::OutOfScope("multivariate shape without a constant plus distinct pure powers".into()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EpVerdict {
    Irreducible,
    /// Two terms `1 + c e^{αz}`: infinitely divisible, never irreducible.
    SimpleBinomial,
    Reducible(Vec<ExponentialPolynomial>),
    OutOfScope(String),
}

impl fmt::Display for EpVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Irreducible => write!(f, "Irreducible"),
            Self::SimpleBinomial => write!(f, "SimpleBinomial"),
            Self::Reducible(w) => write!(f, "Reducible witness={}", join(w, "*")),
            Self::OutOfScope(why) => write!(f, "OutOfScope reason=\"{why}\""),
        }
    }
}

/// Irreducibility in the ring of exponential polynomials, for normalized input.
pub fn is_irreducible_ep(f: &ExponentialPolynomial) -> Result<EpVerdict> {
    if !f.is_normalized() {
        return Err(RittError::NotNormalized);
    }
    match f.len() {
        1 => return Ok(EpVerdict::OutOfScope("a unit".into())),
        2 => return Ok(EpVerdict::SimpleBinomial),
        _ => {}
    }
    let freqs = f.frequencies();
    if linearly_independent_over_q(&freqs[1..]) {
        return Ok(EpVerdict::Irreducible);
    }
    let lattice = build_lattice(&freqs)?;
    let l = to_laurent(f, &lattice)?;
    if lattice.rank() == 1 {
        return Ok(match is_irreducible_multinomial(&l) {
            MultinomialVerdict::Reducible(parts) => EpVerdict::Reducible(
                parts.iter().map(|p| from_laurent(p, &lattice, f.ctx())).collect::<Result<Vec<_>>>()?,
            ),
            _ => EpVerdict::OutOfScope("no factor over a one-generator lattice; finer lattices are not searched".into()),
        });
    }
    // Refining the lattice substitutes y_i -> y_i^N, which keeps the pure-power shape.
    Ok(match is_irreducible_multinomial(&l) {
        MultinomialVerdict::Irreducible => EpVerdict::Irreducible,
        _ => EpVerdict::OutOfScope("dependent frequencies over a lattice of rank at least 2".into()),
    })
}

fn scaled_product(f: &ExponentialPolynomial, a: &BigRational, p: u32) -> Result<ExponentialPolynomial> {
    if p == 0 {
        return Err(RittError::ZeroPower);
    }
    let mut acc = ExponentialPolynomial::one(f.ctx());
    let mut s = BigRational::one();
    for _ in 0..p {
        acc = acc.multiply(&f.scale_argument_rational(&s)?)?;
        s *= a;
    }
    Ok(acc)
}

/// `Π_{i<p} f(a^i z) = Π_{i<q} g(b^i z)`, decided exactly.
pub fn product_identity_check(
    f: &ExponentialPolynomial,
    a: &BigRational,
    p: u32,
    g: &ExponentialPolynomial,
    b: &BigRational,
    q: u32,
) -> Result<bool> {
    Ok(scaled_product(f, a, p)? == scaled_product(g, b, q)?)
}

const MAX_FACTOR_STEPS: u32 = 64;

/// The `k` with `g(z) = Π_{i<k} f(a^i z)`, found by repeated exact division.
/// A scale with `|a| > 1` is replaced by its reciprocal.
pub fn factor_as_iteration(
    g: &ExponentialPolynomial,
    f: &ExponentialPolynomial,
    a: &BigRational,
) -> Result<Option<u32>> {
    if a.is_zero() {
        return Err(ExpPolyError::ZeroScale.into());
    }
    let a = if a.abs() > BigRational::one() { a.recip() } else { a.clone() };
    let mut h = g.clone();
    let mut s = BigRational::one();
    for k in 1..=MAX_FACTOR_STEPS {
        let fk = f.scale_argument_rational(&s)?;
        let lattice = joint_lattice(&[&h, &fk])?;
        let (hl, fl) = (to_laurent(&h, &lattice)?, to_laurent(&fk, &lattice)?);
        let Some(quot) = hl.div_exact(&fl) else {
            return Ok(None);
        };
        if quot.is_one() {
            return Ok(Some(k));
        }
        if quot.len() == 1 {
            return Ok(None);
        }
        h = from_laurent(&quot, &lattice, g.ctx())?;
        s *= &a;
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HlcVerdict {
    /// `a^p = b^q` for `a = 1/|r_Φ|`, `b = 1/|r_Ψ|`, with `gcd(p, q) = 1`.
    Commensurable { p: u64, q: u64 },
    Incommensurable,
    Unknown(String),
}

impl fmt::Display for HlcVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Commensurable { p, q } => write!(f, "Commensurable p={p} q={q}"),
            Self::Incommensurable => write!(f, "Incommensurable"),
            Self::Unknown(why) => write!(f, "Unknown reason=\"{why}\""),
        }
    }
}

/// Whether the absolute contraction ratios of two homogeneous systems are
/// rational powers of each other. Using `|r|` gives the same verdict as
/// squaring a negative ratio by self-composition.
pub fn check_hlc_pair(phi: &WeightedIFS, psi: &WeightedIFS) -> Result<HlcVerdict> {
    let (Some(r), Some(s)) = (phi.common_ratio(), psi.common_ratio()) else {
        return Err(RittError::NotHomogeneous);
    };
    let (Some(r), Some(s)) = (r.as_rational(), s.as_rational()) else {
        return Ok(HlcVerdict::Unknown("an irrational ratio; integer-relation search is not attempted".into()));
    };
    let (a, b) = (r.abs().recip(), s.abs().recip());
    match rational_log_ratio(&a, &b) {
        Ok(Some((p, q))) => Ok(HlcVerdict::Commensurable { p, q }),
        Ok(None) => Ok(HlcVerdict::Incommensurable),
        Err(e) => Ok(HlcVerdict::Unknown(e.to_string())),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConditionZ {
    /// A zero of `m̃` off the imaginary axis; the measure then satisfies (HLC).
    Satisfied(LocatedZero),
    /// All zeros are purely imaginary. The no-interval alternative of the
    /// condition is not tested.
    ZeroBranchFails { period: f64 },
    Inconclusive(String),
}

impl fmt::Display for ConditionZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Satisfied(z) => {
                let xi = z.xi();
                write!(
                    f,
                    "Satisfied z={:.12}{:+.12}i xi={:.12}{:+.12}i residual={:.1e} note=\"(HLC) follows for the measure\"",
                    z.z.re, z.z.im, xi.re, xi.im, z.residual
                )
            }
            Self::ZeroBranchFails { period } => write!(
                f,
                "ZeroBranchFails period={period:.12} note=\"all zeros purely imaginary; the no-interval alternative was not tested\""
            ),
            Self::Inconclusive(why) => write!(f, "Inconclusive reason=\"{why}\""),
        }
    }
}

/// Zero branch of condition (Z) for a homogeneous system.
pub fn check_condition_z(ifs: &WeightedIFS, im_max: Option<f64>, tol: f64) -> Result<ConditionZ> {
    let f = ExponentialPolynomial::from_weighted_ifs(ifs)?;
    Ok(match has_non_imaginary_zero(&f, im_max, tol)? {
        ZeroTest::Yes(z) => ConditionZ::Satisfied(z),
        ZeroTest::NoneFound { period } => ConditionZ::ZeroBranchFails { period },
        ZeroTest::Inconclusive(why) => ConditionZ::Inconclusive(why),
    })
}

/// Hypotheses of the minimality argument, checked on the base system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypotheses {
    /// Nonconstant frequencies of the normalized base polynomial are independent over ℚ.
    pub independent_frequencies: bool,
    /// The probability vector is `(1/2, 1/2)`.
    pub uniform_two_weights: bool,
    /// Nonconstant normalized frequencies are symmetric about their midpoint.
    pub symmetric_frequencies: bool,
}

impl fmt::Display for Hypotheses {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "independent_frequencies={} uniform_two_weights={} symmetric_frequencies={}",
            self.independent_frequencies, self.uniform_two_weights, self.symmetric_frequencies
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinimalityVerdict {
    IterationOf(u32),
    NotIteration(String),
    Unknown(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minimality {
    pub verdict: MinimalityVerdict,
    pub hlc: HlcVerdict,
    pub hypotheses: Hypotheses,
}

impl fmt::Display for Minimality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            MinimalityVerdict::IterationOf(k) => write!(f, "IterationOf k={k}")?,
            MinimalityVerdict::NotIteration(why) => write!(f, "NotIteration reason=\"{why}\"")?,
            MinimalityVerdict::Unknown(why) => write!(f, "Unknown reason=\"{why}\"")?,
        }
        write!(f, " hlc=\"{}\" {}", self.hlc, self.hypotheses)
    }
}

fn positive_rational_ratio(ifs: &WeightedIFS) -> Result<BigRational> {
    let r = ifs.common_ratio().ok_or(RittError::NotHomogeneous)?;
    match r.as_rational() {
        Some(q) if q.is_positive() => Ok(q.clone()),
        _ => Err(RittError::UnsupportedRatio(r.to_string())),
    }
}

fn hypotheses(base: &WeightedIFS, f: &ExponentialPolynomial) -> Hypotheses {
    let g = f.normalize().poly;
    let nonconst: Vec<_> = g.frequencies().into_iter().skip(1).collect();
    let half = BigRational::new(1.into(), 2.into());
    let n = nonconst.len();
    let symmetric_frequencies = (0..n).all(|i| &nonconst[i] + &nonconst[n - 1 - i] == &nonconst[0] + &nonconst[n - 1]);
    Hypotheses {
        independent_frequencies: linearly_independent_over_q(&nonconst),
        uniform_two_weights: base.len() == 2 && base.weights().iter().all(|w| *w == half),
        symmetric_frequencies,
    }
}

/// Whether `candidate` is an iteration of `base`, via the commensurability
/// of the ratios and exact factorization of the attached polynomials.
pub fn minimality_check(base: &WeightedIFS, candidate: &WeightedIFS) -> Result<Minimality> {
    let r = positive_rational_ratio(base)?;
    let s = positive_rational_ratio(candidate)?;
    let f = ExponentialPolynomial::from_weighted_ifs(base)?;
    let g = ExponentialPolynomial::from_weighted_ifs(candidate)?;
    let hyp = hypotheses(base, &f);
    let hlc = check_hlc_pair(base, candidate)?;
    let verdict = match &hlc {
        HlcVerdict::Incommensurable => MinimalityVerdict::NotIteration("contraction ratios are incommensurable".into()),
        HlcVerdict::Unknown(why) => MinimalityVerdict::Unknown(why.clone()),
        HlcVerdict::Commensurable { p, q: 1 } => {
            let k = u32::try_from(*p).map_err(|_| RittError::ZeroPower)?;
            match factor_as_iteration(&g, &f, &r)? {
                Some(found) if found == k => {
                    if candidate.same_system(&iterate(base, k)?) {
                        MinimalityVerdict::IterationOf(k)
                    } else {
                        MinimalityVerdict::NotIteration(format!("polynomials agree with the {k}-fold iteration but the map data differ"))
                    }
                }
                Some(found) => MinimalityVerdict::NotIteration(format!(
                    "polynomial factors {found} times but the ratios require {k}"
                )),
                None => MinimalityVerdict::NotIteration(format!(
                    "the candidate polynomial is not the product of {k} rescaled base polynomials"
                )),
            }
        }
        HlcVerdict::Commensurable { p, q } => {
            if hyp.symmetric_frequencies {
                MinimalityVerdict::Unknown(format!(
                    "ratio exponents p={p} q={q}; symmetric frequencies allow a reflected generator"
                ))
            } else {
                let (p32, q32) = (u32::try_from(*p), u32::try_from(*q));
                let holds = match (p32, q32) {
                    (Ok(p), Ok(q)) if p <= 64 && q <= 64 => Some(product_identity_check(&f, &r, p, &g, &s, q)?),
                    _ => None,
                };
                let identity = match holds {
                    Some(true) => "holds",
                    Some(false) => "fails",
                    None => "not evaluated",
                };
                MinimalityVerdict::NotIteration(format!("ratio exponents p={p} q={q}; product identity {identity}"))
            }
        }
    };
    Ok(Minimality { verdict, hlc, hypotheses: hyp })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::{AlgebraicReal, BasisContext};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ep(terms: &[((i64, i64), (i64, i64))]) -> ExponentialPolynomial {
        ExponentialPolynomial::rational(terms).unwrap()
    }

    fn cantor() -> WeightedIFS {
        WeightedIFS::rational(&[((1, 3), (0, 1), (1, 2)), ((1, 3), (2, 3), (1, 2))]).unwrap()
    }

    fn poly(f: &WeightedIFS) -> ExponentialPolynomial {
        ExponentialPolynomial::from_weighted_ifs(f).unwrap()
    }

    #[test]
    fn multinomial_examples() {
        let l = LaurentPolynomial::new(2, [(vec![0, 0], q(1, 1)), (vec![1, 0], q(1, 2)), (vec![0, 1], q(1, 3))]);
        assert_eq!(is_irreducible_multinomial(&l), MultinomialVerdict::Irreducible);

        let d = LaurentPolynomial::new(1, [(vec![0], q(1, 1)), (vec![2], q(-1, 1))]);
        match is_irreducible_multinomial(&d) {
            MultinomialVerdict::Reducible(w) => {
                assert_eq!(w.len(), 2);
                assert_eq!(w[0].mul(&w[1]), d);
            }
            other => panic!("{other:?}"),
        }
        let shifted = d.shift(&[-3]);
        let MultinomialVerdict::Reducible(w) = is_irreducible_multinomial(&shifted) else { panic!() };
        assert_eq!(w[0].mul(&w[1]), shifted);

        let o = LaurentPolynomial::new(2, [(vec![0, 0], q(1, 1)), (vec![1, 1], q(1, 1)), (vec![2, 0], q(1, 1))]);
        assert!(matches!(is_irreducible_multinomial(&o), MultinomialVerdict::OutOfScope(_)));
        let diff = LaurentPolynomial::new(2, [(vec![2, 0], q(1, 1)), (vec![0, 2], q(-1, 1))]);
        assert!(matches!(is_irreducible_multinomial(&diff), MultinomialVerdict::OutOfScope(_)));
        let lin = LaurentPolynomial::new(1, [(vec![0], q(1, 1)), (vec![1], q(3, 1))]);
        assert_eq!(is_irreducible_multinomial(&lin), MultinomialVerdict::Irreducible);
    }

    #[test]
    fn ep_examples() {
        let ctx = BasisContext::with_symbols(&[
            ("s2", "1.41421356237309504880168872420969807856967187537694"),
            ("s3", "1.73205080756887729352744634150587236694280525381038"),
        ])
        .unwrap();
        let f = ExponentialPolynomial::new(
            &ctx,
            vec![
                (q(1, 1), AlgebraicReal::zero(&ctx)),
                (q(1, 2), AlgebraicReal::symbol(&ctx, 1)),
                (q(1, 3), AlgebraicReal::symbol(&ctx, 2)),
            ],
        )
        .unwrap();
        assert_eq!(is_irreducible_ep(&f).unwrap(), EpVerdict::Irreducible);
        assert_eq!(is_irreducible_ep(&ep(&[((1, 1), (0, 1)), ((1, 1), (1, 1))])).unwrap(), EpVerdict::SimpleBinomial);
        let sq = ep(&[((1, 1), (0, 1)), ((2, 1), (1, 1)), ((1, 1), (2, 1))]);
        match is_irreducible_ep(&sq).unwrap() {
            EpVerdict::Reducible(w) => {
                let b = ep(&[((1, 1), (0, 1)), ((1, 1), (1, 1))]);
                assert_eq!(w, vec![b.clone(), b]);
                assert_eq!(w[0].multiply(&w[1]).unwrap(), sq);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(is_irreducible_ep(&ep(&[((1, 2), (0, 1)), ((1, 2), (1, 1))])), Err(RittError::NotNormalized));
        let trinomial = ep(&[((1, 1), (0, 1)), ((1, 1), (1, 1)), ((1, 1), (2, 1))]);
        assert!(matches!(is_irreducible_ep(&trinomial).unwrap(), EpVerdict::OutOfScope(_)));
    }

    #[test]
    fn product_identities() {
        let f = poly(&cantor());
        let g = poly(&iterate(&cantor(), 2).unwrap());
        assert!(product_identity_check(&f, &q(1, 3), 2, &g, &q(1, 9), 1).unwrap());
        assert!(product_identity_check(&f, &q(1, 3), 1, &f, &q(1, 3), 1).unwrap());
        let other = poly(&WeightedIFS::rational(&[((1, 3), (0, 1), (1, 2)), ((1, 3), (1, 2), (1, 2))]).unwrap());
        assert!(!product_identity_check(&f, &q(1, 3), 1, &other, &q(1, 3), 1).unwrap());
    }

    #[test]
    fn iteration_factoring() {
        let f = poly(&cantor());
        let g3 = poly(&iterate(&cantor(), 3).unwrap());
        assert_eq!(factor_as_iteration(&g3, &f, &q(1, 3)).unwrap(), Some(3));
        assert_eq!(factor_as_iteration(&g3, &f, &q(3, 1)).unwrap(), Some(3));
        assert_eq!(factor_as_iteration(&f, &f, &q(1, 3)).unwrap(), Some(1));
        let skew = poly(&WeightedIFS::rational(&[((1, 3), (0, 1), (1, 3)), ((1, 3), (2, 3), (2, 3))]).unwrap());
        let g2 = poly(&iterate(&cantor(), 2).unwrap());
        assert_eq!(factor_as_iteration(&g2, &skew, &q(1, 3)).unwrap(), None);
    }

    #[test]
    fn hlc_pairs() {
        let hom = |r: (i64, i64)| WeightedIFS::rational(&[(r, (0, 1), (1, 2)), (r, (1, 2), (1, 2))]).unwrap();
        assert_eq!(check_hlc_pair(&hom((1, 3)), &hom((1, 9))).unwrap(), HlcVerdict::Commensurable { p: 2, q: 1 });
        assert_eq!(check_hlc_pair(&hom((1, 4)), &hom((1, 8))).unwrap(), HlcVerdict::Commensurable { p: 3, q: 2 });
        assert_eq!(check_hlc_pair(&hom((1, 2)), &hom((1, 3))).unwrap(), HlcVerdict::Incommensurable);
        assert_eq!(check_hlc_pair(&hom((-1, 3)), &hom((1, 9))).unwrap(), HlcVerdict::Commensurable { p: 2, q: 1 });
        let mixed = WeightedIFS::rational(&[((1, 2), (0, 1), (1, 2)), ((1, 3), (1, 1), (1, 2))]).unwrap();
        assert_eq!(check_hlc_pair(&mixed, &hom((1, 3))), Err(RittError::NotHomogeneous));
    }

    #[test]
    fn condition_z() {
        let bern = |p: (i64, i64), r: (i64, i64)| {
            WeightedIFS::rational(&[(r, (0, 1), p), (r, (1, 1), (p.1 - p.0, p.1))]).unwrap()
        };
        match check_condition_z(&bern((1, 3), (1, 3)), None, 1e-9).unwrap() {
            ConditionZ::Satisfied(z) => assert!((z.z.re.abs() - 2f64.ln()).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        assert!(matches!(check_condition_z(&cantor(), None, 1e-9).unwrap(), ConditionZ::ZeroBranchFails { .. }));
    }

    #[test]
    fn minimality() {
        let c = cantor();
        for k in 1..=3 {
            let m = minimality_check(&c, &iterate(&c, k).unwrap()).unwrap();
            assert_eq!(m.verdict, MinimalityVerdict::IterationOf(k));
        }
        let it = iterate(&c, 2).unwrap();
        let skewed = WeightedIFS::new(it.maps().to_vec(), vec![q(1, 2), q(1, 6), q(1, 6), q(1, 6)]).unwrap();
        assert!(matches!(minimality_check(&c, &skewed).unwrap().verdict, MinimalityVerdict::NotIteration(_)));
        let halves = WeightedIFS::rational(&[((1, 2), (0, 1), (1, 2)), ((1, 2), (1, 2), (1, 2))]).unwrap();
        assert!(matches!(minimality_check(&halves, &c).unwrap().verdict, MinimalityVerdict::NotIteration(_)));
        let m = minimality_check(&c, &c).unwrap();
        assert!(m.hypotheses.uniform_two_weights && m.hypotheses.independent_frequencies);
        assert!(m.to_string().starts_with("IterationOf k=1 hlc=\"Commensurable p=1 q=1\""));
    }
}
