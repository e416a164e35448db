//! Frequency lattices and Laurent polynomials over ℚ.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use super::{Result, RittError};
use crate::algebraic::{format_rational, same_context, AlgebraicReal, BasisContext};
use crate::exppoly::ExponentialPolynomial;

/// A ℤ-basis `g_1, ..., g_k` of the group generated by some frequencies,
/// with each input frequency written as an integer vector over it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyLattice {
    pub generators: Vec<AlgebraicReal>,
    pub exponents: Vec<Vec<i64>>,
}

/// Echelon ℤ-basis of the row lattice, pivots positive.
fn hermite_basis(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        loop {
            let pivot = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
            let Some(p) = pivot else { break };
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let sub: Vec<BigInt> = rows[r].iter().map(|x| x * &q).collect();
                for (x, s) in rows[i].iter_mut().zip(sub) {
                    *x -= s;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows
}

fn pivot_col(row: &[BigInt]) -> usize {
    row.iter().position(|x| !x.is_zero()).expect("basis rows are nonzero")
}

/// Lattice generated by `freqs` (which must share a context).
pub fn build_lattice(freqs: &[AlgebraicReal]) -> Result<FrequencyLattice> {
    let first = freqs.first().ok_or(RittError::EmptyInput)?;
    let ctx = first.ctx().clone();
    if freqs.iter().any(|a| !same_context(a.ctx(), &ctx)) {
        return Err(RittError::ContextMismatch);
    }
    let den = freqs.iter().flat_map(|a| a.coords()).fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scaled: Vec<Vec<BigInt>> = freqs
        .iter()
        .map(|a| a.coords().iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect())
        .collect();
    let basis = hermite_basis(scaled.clone());
    let mut exponents = Vec::with_capacity(freqs.len());
    for row in &scaled {
        let mut v = row.clone();
        let mut e = Vec::with_capacity(basis.len());
        for b in &basis {
            let c = pivot_col(b);
            let (q, rem) = v[c].div_rem(&b[c]);
            if !rem.is_zero() {
                return Err(RittError::Lattice);
            }
            for (x, y) in v.iter_mut().zip(b) {
                *x -= &q * y;
            }
            e.push(i64::try_from(&q).map_err(|_| RittError::Lattice)?);
        }
        if v.iter().any(|x| !x.is_zero()) {
            return Err(RittError::Lattice);
        }
        exponents.push(e);
    }
    let generators = basis
        .iter()
        .map(|b| {
            let coords = b.iter().map(|x| BigRational::new(x.clone(), den.clone())).collect();
            AlgebraicReal::from_coords(&ctx, coords).map_err(RittError::from)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FrequencyLattice { generators, exponents })
}

impl FrequencyLattice {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Integer coordinates of `a`, or an error if `a` is outside the lattice.
    pub fn coordinates(&self, a: &AlgebraicReal) -> Result<Vec<i64>> {
        // The generators are in echelon form over the coordinates.
        let outside = || RittError::OutsideLattice(a.to_string());
        let mut v: Vec<BigRational> = a.coords().to_vec();
        let mut e = Vec::with_capacity(self.rank());
        for g in &self.generators {
            let c = g.coords().iter().position(|x| !x.is_zero()).expect("generators are nonzero");
            let k = &v[c] / &g.coords()[c];
            if !k.is_integer() {
                return Err(outside());
            }
            for (x, y) in v.iter_mut().zip(g.coords()) {
                *x -= &k * y;
            }
            e.push(i64::try_from(&k.to_integer()).map_err(|_| outside())?);
        }
        if v.iter().any(|x| !x.is_zero()) {
            return Err(outside());
        }
        Ok(e)
    }

    pub fn frequency(&self, ctx: &Arc<BasisContext>, e: &[i64]) -> AlgebraicReal {
        e.iter().zip(&self.generators).fold(AlgebraicReal::zero(ctx), |acc, (&k, g)| {
            &acc + &g.scale(&BigRational::from_integer(k.into()))
        })
    }
}

/// `Σ c_e y^e` with integer (possibly negative) exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPolynomial {
    arity: usize,
    terms: BTreeMap<Vec<i64>, BigRational>,
}

impl LaurentPolynomial {
    pub fn new(arity: usize, terms: impl IntoIterator<Item = (Vec<i64>, BigRational)>) -> Self {
        let mut map: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), arity, "exponent vector length");
            *map.entry(e).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Self { arity, terms: map }
    }

    pub fn zero(arity: usize) -> Self {
        Self { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: BigRational) -> Self {
        Self::new(arity, [(vec![0; arity], c)])
    }

    pub fn monomial(e: Vec<i64>, c: BigRational) -> Self {
        Self::new(e.len(), [(e, c)])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&vec![0; self.arity]).is_some_and(One::is_one)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
        for (e, c) in &self.terms {
            for (f, d) in &other.terms {
                let s: Vec<i64> = e.iter().zip(f).map(|(a, b)| a + b).collect();
                *out.entry(s).or_insert_with(BigRational::zero) += c * d;
            }
        }
        Self::new(self.arity, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let neg = other.terms.iter().map(|(e, c)| (e.clone(), -c));
        Self::new(self.arity, self.terms.clone().into_iter().chain(neg))
    }

    /// Componentwise minimum exponent.
    pub fn min_exponents(&self) -> Vec<i64> {
        (0..self.arity).map(|i| self.terms.keys().map(|e| e[i]).min().unwrap_or(0)).collect()
    }

    /// Multiplies by `y^s`.
    pub fn shift(&self, s: &[i64]) -> Self {
        Self {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.iter().zip(s).map(|(a, b)| a + b).collect(), c.clone())).collect(),
        }
    }

    /// Divides out the largest monomial factor, so every variable has minimum exponent 0.
    pub fn unit_normalized(&self) -> Self {
        let m: Vec<i64> = self.min_exponents().iter().map(|x| -x).collect();
        self.shift(&m)
    }

    /// Indices of variables that occur with a nonzero exponent.
    pub fn active_variables(&self) -> Vec<usize> {
        (0..self.arity).filter(|&i| self.terms.keys().any(|e| e[i] != 0)).collect()
    }

    /// Leading term for total degree, ties broken lexicographically.
    fn leading(&self) -> Option<(&Vec<i64>, &BigRational)> {
        self.terms.iter().max_by(|a, b| {
            let da: i64 = a.0.iter().sum();
            let db: i64 = b.0.iter().sum();
            da.cmp(&db).then_with(|| a.0.cmp(b.0))
        })
    }

    /// Exact quotient `self / d` in the Laurent ring, or `None` when `d`
    /// does not divide `self`.
    ///
    /// Both sides are moved into the polynomial ring by clearing minimal
    /// exponents, then divided with the graded lexicographic order. With a
    /// single divisor the remainder is zero iff the division is exact.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.arity));
        }
        let (ps, ds) = (self.min_exponents(), d.min_exponents());
        let mut p = self.unit_normalized();
        let dd = d.unit_normalized();
        let (le, lc) = dd.leading().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut q = BTreeMap::new();
        let bound: i64 = p.terms.keys().map(|e| e.iter().sum::<i64>()).max().unwrap_or(0);
        let mut steps = 0usize;
        while let Some((e, c)) = p.leading().map(|(e, c)| (e.clone(), c.clone())) {
            steps += 1;
            if steps > 1_000_000 || e.iter().sum::<i64>() > bound {
                return None;
            }
            if e.iter().zip(&le).any(|(a, b)| a < b) {
                return None;
            }
            let m: Vec<i64> = e.iter().zip(&le).map(|(a, b)| a - b).collect();
            let coef = &c / &lc;
            p = p.sub(&dd.mul(&Self::monomial(m.clone(), coef.clone())));
            q.insert(m, coef);
        }
        let back: Vec<i64> = ps.iter().zip(&ds).map(|(a, b)| a - b).collect();
        Some(Self::new(self.arity, q).shift(&back))
    }

    /// Coefficients of a polynomial in one variable, lowest degree first,
    /// if only variable `var` occurs and all exponents are nonnegative.
    pub fn univariate(&self, var: usize) -> Option<Vec<BigRational>> {
        let mut out: Vec<BigRational> = Vec::new();
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(i, &x)| i != var && x != 0) || e[var] < 0 {
                return None;
            }
            let k = e[var] as usize;
            if out.len() <= k {
                out.resize(k + 1, BigRational::zero());
            }
            out[k] = c.clone();
        }
        Some(out)
    }

    pub fn from_univariate(arity: usize, var: usize, coeffs: &[BigRational]) -> Self {
        Self::new(
            arity,
            coeffs.iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; arity];
                e[var] = k as i64;
                (e, c.clone())
            }),
        )
    }
}

impl fmt::Display for LaurentPolynomial {
    /// E.g. `1 + 1/2*y1 - y1^2*y2^-1`, terms in increasing exponent order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let single = self.arity == 1;
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(j, &k)| {
                    let name = if single { "y".to_string() } else { format!("y{}", j + 1) };
                    if k == 1 {
                        name
                    } else {
                        format!("{name}^{k}")
                    }
                })
                .collect();
            let mag = format_rational(&c.abs());
            match (vars.is_empty(), c.abs().is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{mag}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Substitutes `y_i = e^{g_i z}`.
pub fn to_laurent(f: &ExponentialPolynomial, lattice: &FrequencyLattice) -> Result<LaurentPolynomial> {
    let terms = f
        .terms()
        .iter()
        .map(|t| Ok((lattice.coordinates(&t.freq)?, t.coeff.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(LaurentPolynomial::new(lattice.rank(), terms))
}

pub fn from_laurent(
    l: &LaurentPolynomial,
    lattice: &FrequencyLattice,
    ctx: &Arc<BasisContext>,
) -> Result<ExponentialPolynomial> {
    let terms = l.terms().iter().map(|(e, c)| (c.clone(), lattice.frequency(ctx, e))).collect();
    Ok(ExponentialPolynomial::new(ctx, terms)?)
}

/// Lattice of all frequencies of the given polynomials together.
pub fn joint_lattice(polys: &[&ExponentialPolynomial]) -> Result<FrequencyLattice> {
    let freqs: Vec<AlgebraicReal> = polys.iter().flat_map(|p| p.frequencies()).collect();
    build_lattice(&freqs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn sym_ctx() -> Arc<BasisContext> {
        BasisContext::with_symbols(&[
            ("s2", "1.41421356237309504880168872420969807856967187537694"),
            ("s3", "1.73205080756887729352744634150587236694280525381038"),
        ])
        .unwrap()
    }

    #[test]
    fn lattice_examples() {
        let c = BasisContext::rational();
        let v = |n, d| AlgebraicReal::from_ratio(&c, n, d);
        let l = build_lattice(&[v(2, 3), v(4, 3), v(2, 1)]).unwrap();
        assert_eq!(l.generators, vec![v(2, 3)]);
        assert_eq!(l.exponents, vec![vec![1], vec![2], vec![3]]);
        let l = build_lattice(&[v(1, 1)]).unwrap();
        assert_eq!(l.generators, vec![v(1, 1)]);
        assert_eq!(l.exponents, vec![vec![1]]);
        let l = build_lattice(&[v(0, 1), v(3, 4), v(1, 2)]).unwrap();
        assert_eq!(l.generators, vec![v(1, 4)]);
        assert_eq!(l.exponents, vec![vec![0], vec![3], vec![2]]);

        let s = sym_ctx();
        let (s2, s3) = (AlgebraicReal::symbol(&s, 1), AlgebraicReal::symbol(&s, 2));
        let l = build_lattice(&[s2.clone(), s3.clone()]).unwrap();
        assert_eq!(l.generators, vec![s2.clone(), s3.clone()]);
        assert_eq!(l.exponents, vec![vec![1, 0], vec![0, 1]]);
        let one = AlgebraicReal::one(&s);
        let l = build_lattice(&[one.clone(), &one + &s2]).unwrap();
        assert_eq!(l.rank(), 2);
        for (a, e) in [one.clone(), &one + &s2].iter().zip(&l.exponents) {
            assert_eq!(&l.frequency(&s, e), a);
        }
    }

    #[test]
    fn laurent_round_trip() {
        let f = ExponentialPolynomial::rational(&[((1, 1), (0, 1)), ((1, 2), (2, 3)), ((1, 3), (4, 3))]).unwrap();
        let l = joint_lattice(&[&f]).unwrap();
        let lp = to_laurent(&f, &l).unwrap();
        assert_eq!(lp.to_string(), "1 + 1/2*y + 1/3*y^2");
        assert_eq!(from_laurent(&lp, &l, f.ctx()).unwrap(), f);

        let s = sym_ctx();
        let one = q(1, 1);
        let g = ExponentialPolynomial::new(
            &s,
            vec![
                (one.clone(), AlgebraicReal::zero(&s)),
                (one.clone(), AlgebraicReal::symbol(&s, 1)),
                (one, AlgebraicReal::symbol(&s, 2)),
            ],
        )
        .unwrap();
        let l = joint_lattice(&[&g]).unwrap();
        let lp = to_laurent(&g, &l).unwrap();
        assert_eq!(lp.to_string(), "1 + y2 + y1");
        assert_eq!(from_laurent(&lp, &l, &s).unwrap(), g);
    }

    #[test]
    fn outside_lattice() {
        let c = BasisContext::rational();
        let l = build_lattice(&[AlgebraicReal::from_ratio(&c, 2, 3)]).unwrap();
        assert!(l.coordinates(&AlgebraicReal::from_ratio(&c, 1, 3)).is_err());
        assert_eq!(l.coordinates(&AlgebraicReal::from_ratio(&c, -4, 3)).unwrap(), vec![-2]);
    }

    #[test]
    fn exact_division() {
        let y = |k: i64, c: i64| LaurentPolynomial::monomial(vec![k], q(c, 1));
        let one_plus = LaurentPolynomial::new(1, [(vec![0], q(1, 1)), (vec![1], q(1, 1))]);
        let one_minus = LaurentPolynomial::new(1, [(vec![0], q(1, 1)), (vec![1], q(-1, 1))]);
        let prod = one_plus.mul(&one_minus).mul(&y(-3, 2));
        assert_eq!(prod.div_exact(&one_minus).unwrap(), one_plus.mul(&y(-3, 2)));
        assert!(one_plus.div_exact(&one_minus).is_none());
        let two = LaurentPolynomial::new(
            2,
            [(vec![0, 0], q(1, 1)), (vec![1, 0], q(1, 2)), (vec![0, 1], q(1, 3))],
        );
        let sq = two.mul(&two);
        assert_eq!(sq.div_exact(&two).unwrap(), two);
        assert!(two.div_exact(&sq).is_none());
    }
}
