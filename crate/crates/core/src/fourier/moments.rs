//! Moments `M_n = ∫ x^n dμ` of the self-similar measure.
//!
//! Integrating `x^n` against the invariance equation gives
//! `M_n (1 - Σ_j p_j r_j^n) = Σ_j p_j Σ_{k<n} C(n,k) r_j^k b_j^{n-k} M_k`.
//! With rational ratios the recursion runs exactly in `ℚ[s_1, ..., s_m]`,
//! the declared symbols treated as indeterminates; otherwise it runs in
//! rational interval arithmetic seeded with the symbol enclosures.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use super::{FourierError, Result};
use crate::algebraic::{format_rational, same_context, AlgebraicReal, BasisContext};
use crate::ifs_core::WeightedIFS;

/// Polynomial in the declared symbols with rational coefficients; keys are
/// exponent vectors indexed by symbol number minus one.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SymPoly {
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl SymPoly {
    fn zero() -> Self {
        Self::default()
    }

    fn constant(vars: usize, c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![0; vars], c);
        p
    }

    fn linear(a: &AlgebraicReal) -> Self {
        let vars = a.coords().len() - 1;
        let mut p = Self::constant(vars, a.coords()[0].clone());
        for (i, c) in a.coords().iter().enumerate().skip(1) {
            let mut e = vec![0; vars];
            e[i - 1] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    fn add_scaled(&mut self, other: &Self, s: &BigRational) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c * s);
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    fn scale(&self, s: &BigRational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, s);
        out
    }

    /// The value when the polynomial is a constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next()?;
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Rational enclosure of the value at the declared symbol values.
    fn enclosure(&self, ctx: &Arc<BasisContext>) -> Iv {
        let syms: Vec<Iv> = (1..ctx.dim()).map(|i| Iv::from_pair(AlgebraicReal::symbol(ctx, i).enclosure())).collect();
        let mut acc = Iv::point(BigRational::zero());
        for (e, c) in &self.terms {
            let mut t = Iv::point(c.clone());
            for (s, &k) in syms.iter().zip(e) {
                for _ in 0..k {
                    t = t.mul(s);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn render(&self, ctx: &BasisContext) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        // Total degree first, then earlier symbols first.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| a.iter().sum::<u32>().cmp(&b.iter().sum()).then_with(|| b.cmp(a)));
        let mut out = String::new();
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { ctx.name(v + 1).to_string() } else { format!("{}^{k}", ctx.name(v + 1)) })
                .collect();
            let mag = format_rational(&c.abs());
            let body = match (mono.is_empty(), c.abs().is_one()) {
                (true, _) => mag,
                (false, true) => mono.join("*"),
                (false, false) => format!("{mag}*{}", mono.join("*")),
            };
            match (i, c.is_negative()) {
                (0, true) => out.push_str(&format!("-{body}")),
                (0, false) => out.push_str(&body),
                (_, true) => out.push_str(&format!(" - {body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
            }
        }
        out
    }
}

/// Closed rational interval with exact endpoint arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Iv {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Iv {
    fn point(x: BigRational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    fn from_pair((lo, hi): (BigRational, BigRational)) -> Self {
        Self { lo, hi }
    }

    fn add(&self, o: &Self) -> Self {
        Self { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    fn mul(&self, o: &Self) -> Self {
        let ps = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = ps.iter().min().expect("four products").clone();
        let hi = ps.iter().max().expect("four products").clone();
        Self { lo, hi }
    }

    fn scale(&self, s: &BigRational) -> Self {
        self.mul(&Self::point(s.clone()))
    }

    fn recip(&self) -> Option<Self> {
        let positive = self.lo.is_positive();
        let negative = self.hi.is_negative();
        (positive || negative).then(|| Self { lo: self.hi.recip(), hi: self.lo.recip() })
    }

    pub fn disjoint(&self, o: &Self) -> bool {
        self.hi < o.lo || o.hi < self.lo
    }

    fn mid_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(2.into())).to_f64().unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Moment {
    Exact(SymPoly),
    Enclosed(Iv),
}

/// `M_0, ..., M_N` of a self-similar measure.
#[derive(Clone, Debug)]
pub struct MomentVector {
    ctx: Arc<BasisContext>,
    values: Vec<Moment>,
}

impl MomentVector {
    pub fn ctx(&self) -> &Arc<BasisContext> {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: usize) -> &Moment {
        &self.values[n]
    }

    pub fn is_exact(&self) -> bool {
        self.values.iter().all(|m| matches!(m, Moment::Exact(_)))
    }

    /// `M_n` as a rational number, when it is known exactly and rational.
    pub fn rational(&self, n: usize) -> Option<BigRational> {
        match &self.values[n] {
            Moment::Exact(p) => p.as_rational(),
            Moment::Enclosed(_) => None,
        }
    }

    pub fn enclosure(&self, n: usize) -> Iv {
        match &self.values[n] {
            Moment::Exact(p) => p.enclosure(&self.ctx),
            Moment::Enclosed(iv) => iv.clone(),
        }
    }

    pub fn to_f64(&self, n: usize) -> f64 {
        match self.rational(n) {
            Some(q) => q.to_f64().unwrap_or(f64::NAN),
            None => self.enclosure(n).mid_f64(),
        }
    }

    /// Renders `M_n` exactly: a rational, a polynomial in the symbols, or an
    /// enclosing interval.
    pub fn render(&self, n: usize) -> String {
        match &self.values[n] {
            Moment::Exact(p) => p.render(&self.ctx),
            Moment::Enclosed(iv) => format!("[{}, {}]", format_rational(&iv.lo), format_rational(&iv.hi)),
        }
    }

    /// Compares `M_n` of two vectors: `Some(true)` equal, `Some(false)`
    /// distinct, `None` when the enclosures overlap but exactness is missing.
    pub fn compare(&self, other: &Self, n: usize) -> Option<bool> {
        if let (Moment::Exact(a), Moment::Exact(b)) = (&self.values[n], &other.values[n]) {
            if same_context(&self.ctx, &other.ctx) && a == b {
                return Some(true);
            }
            if let (Some(x), Some(y)) = (a.as_rational(), b.as_rational()) {
                return Some(x == y);
            }
        }
        self.enclosure(n).disjoint(&other.enclosure(n)).then_some(false)
    }

    /// Rows `index,numerator,denominator`; non-rational moments put their
    /// exact rendering in the numerator column and `1` as denominator.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,numerator,denominator\n");
        for n in 0..self.len() {
            match self.rational(n) {
                Some(q) => out.push_str(&format!("{n},{},{}\n", q.numer(), q.denom())),
                None => out.push_str(&format!("{n},\"{}\",1\n", self.render(n))),
            }
        }
        out
    }
}

fn binomials(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![BigInt::one(); i + 1];
        for k in 1..i {
            row[k] = &prev[k - 1] + &prev[k];
        }
        rows.push(row);
    }
    rows
}

/// Exact moments `M_0..M_n` (interval enclosures when a ratio is irrational).
pub fn moments(ifs: &WeightedIFS, n: usize) -> Result<MomentVector> {
    let ctx = ifs.ctx().clone();
    let binom = binomials(n);
    let ratios: Option<Vec<BigRational>> = ifs.maps().iter().map(|m| m.ratio().as_rational().cloned()).collect();
    let values = match ratios {
        Some(rs) => exact_moments(ifs, &rs, n, &binom).into_iter().map(Moment::Exact).collect(),
        None => enclosed_moments(ifs, n, &binom)?.into_iter().map(Moment::Enclosed).collect(),
    };
    Ok(MomentVector { ctx, values })
}

fn exact_moments(ifs: &WeightedIFS, ratios: &[BigRational], n: usize, binom: &[Vec<BigInt>]) -> Vec<SymPoly> {
    let vars = ifs.ctx().dim() - 1;
    let one = SymPoly::constant(vars, BigRational::one());
    // b_j^k and r_j^k for k = 0..=n.
    let bpow: Vec<Vec<SymPoly>> = ifs
        .maps()
        .iter()
        .map(|m| {
            let b = SymPoly::linear(m.translation());
            let mut row = vec![one.clone()];
            for k in 1..=n {
                row.push(row[k - 1].mul(&b));
            }
            row
        })
        .collect();
    let rpow: Vec<Vec<BigRational>> = ratios
        .iter()
        .map(|r| {
            let mut row = vec![BigRational::one()];
            for k in 1..=n {
                row.push(&row[k - 1] * r);
            }
            row
        })
        .collect();
    let mut ms = vec![one];
    for m in 1..=n {
        let mut denom = BigRational::one();
        let mut rhs = SymPoly::zero();
        for (j, p) in ifs.weights().iter().enumerate() {
            denom -= p * &rpow[j][m];
            for (k, mk) in ms.iter().enumerate() {
                let c = p * &rpow[j][k] * BigRational::from_integer(binom[m][k].clone());
                rhs.add_scaled(&bpow[j][m - k].mul(mk), &c);
            }
        }
        ms.push(rhs.scale(&denom.recip()));
    }
    ms
}

fn enclosed_moments(ifs: &WeightedIFS, n: usize, binom: &[Vec<BigInt>]) -> Result<Vec<Iv>> {
    let powers = |a: &AlgebraicReal| {
        let x = Iv::from_pair(a.enclosure());
        let mut row = vec![Iv::point(BigRational::one())];
        for k in 1..=n {
            row.push(row[k - 1].mul(&x));
        }
        row
    };
    let rpow: Vec<Vec<Iv>> = ifs.maps().iter().map(|m| powers(m.ratio())).collect();
    let bpow: Vec<Vec<Iv>> = ifs.maps().iter().map(|m| powers(m.translation())).collect();
    let mut ms = vec![Iv::point(BigRational::one())];
    for m in 1..=n {
        let mut denom = Iv::point(BigRational::one());
        let mut rhs = Iv::point(BigRational::zero());
        for (j, p) in ifs.weights().iter().enumerate() {
            denom = denom.add(&rpow[j][m].scale(&-p));
            for (k, mk) in ms.iter().enumerate() {
                let c = p * BigRational::from_integer(binom[m][k].clone());
                rhs = rhs.add(&rpow[j][k].mul(&bpow[j][m - k]).mul(mk).scale(&c));
            }
        }
        let inv = denom.recip().ok_or(FourierError::Precision)?;
        ms.push(rhs.mul(&inv));
    }
    Ok(ms)
}

impl fmt::Display for MomentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in 0..self.len() {
            writeln!(f, "M_{n} = {}", self.render(n))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs_core::Similitude;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn lebesgue_moments() {
        let leb = WeightedIFS::rational(&[((1, 2), (0, 1), (1, 2)), ((1, 2), (1, 2), (1, 2))]).unwrap();
        let m = moments(&leb, 10).unwrap();
        for n in 0..=10 {
            assert_eq!(m.rational(n), Some(q(1, n as i64 + 1)));
        }
        assert!(m.is_exact());
    }

    #[test]
    fn cantor_first_moment() {
        let c = WeightedIFS::rational(&[((1, 3), (0, 1), (1, 2)), ((1, 3), (2, 3), (1, 2))]).unwrap();
        let m = moments(&c, 2).unwrap();
        assert_eq!(m.rational(0), Some(q(1, 1)));
        assert_eq!(m.rational(1), Some(q(1, 2)));
        // Var = 1/8 for the middle-thirds Cantor measure.
        assert_eq!(m.rational(2), Some(q(3, 8)));
    }

    #[test]
    fn symbolic_translation() {
        let ctx = BasisContext::with_symbols(&[("s2", "1.4142135623730950488016887242096980785696718753769")]).unwrap();
        let s2 = AlgebraicReal::symbol(&ctx, 1);
        let zero = AlgebraicReal::zero(&ctx);
        let half = AlgebraicReal::from_ratio(&ctx, 1, 2);
        let ifs = WeightedIFS::new(
            vec![Similitude::new(half.clone(), zero).unwrap(), Similitude::new(half, s2).unwrap()],
            vec![q(1, 2), q(1, 2)],
        )
        .unwrap();
        let m = moments(&ifs, 3).unwrap();
        // Lebesgue on [0, 2 s2]: M_n = (2 s2)^n / (n + 1).
        assert_eq!(m.render(1), "s2");
        assert_eq!(m.render(2), "4/3*s2^2");
        assert!((m.to_f64(2) - 8.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn irrational_ratio_enclosure() {
        let ctx = BasisContext::with_symbols(&[("t", "0.41421356237309504880168872420969807856967187537694")]).unwrap();
        let t = AlgebraicReal::symbol(&ctx, 1);
        let ifs = WeightedIFS::new(
            vec![
                Similitude::new(t.clone(), AlgebraicReal::zero(&ctx)).unwrap(),
                Similitude::new(t, AlgebraicReal::one(&ctx)).unwrap(),
            ],
            vec![q(1, 2), q(1, 2)],
        )
        .unwrap();
        let m = moments(&ifs, 4).unwrap();
        assert!(!m.is_exact());
        let r = 0.41421356237309504880f64;
        let m1 = 0.5 / (1.0 - r);
        assert!((m.to_f64(1) - m1).abs() < 1e-14);
        let iv = m.enclosure(4);
        assert!((&iv.hi - &iv.lo) < q(1, 1_000_000_000_000));
    }
}
