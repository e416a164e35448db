//! Bounded-degree factor search for univariate polynomials over ℚ.
//!
//! Factors of degree 1, 2 and 3 are found by enumerating integer candidates
//! whose values at 0, 1 and -1 divide those of the polynomial. A polynomial
//! of degree at most 7 without such a factor is irreducible.

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::algebraic::factorize_u64;

/// Largest degree for which "no factor of degree ≤ 3" proves irreducibility.
pub const DECISIVE_DEGREE: usize = 7;

const MAX_TRIALS: usize = 4_000_000;

/// Coefficients lowest degree first, trailing zeros stripped.
pub type Poly = Vec<BigInt>;

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn degree(p: &Poly) -> usize {
    p.len() - 1
}

fn eval(p: &Poly, x: i64) -> BigInt {
    let x = BigInt::from(x);
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
}

/// Integer primitive polynomial with positive leading coefficient, and the
/// rational factor taken out.
pub fn primitive(p: &[BigRational]) -> (Poly, BigRational) {
    let den = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let mut content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() {
        content = BigInt::one();
    }
    if ints.iter().rev().find(|c| !c.is_zero()).is_some_and(Signed::is_negative) {
        content = -content;
    }
    let prim = trim(ints.iter().map(|c| c / &content).collect());
    (prim, BigRational::new(content, den))
}

/// Exact quotient over ℤ, or `None` if the division leaves a remainder.
fn div_exact(p: &Poly, d: &Poly) -> Option<Poly> {
    let (n, m) = (degree(p), degree(d));
    if n < m {
        return None;
    }
    let mut r = p.clone();
    let mut q = vec![BigInt::zero(); n - m + 1];
    let lead = d.last().expect("nonempty");
    for k in (0..=n - m).rev() {
        let (c, rem) = r[k + m].div_rem(lead);
        if !rem.is_zero() {
            return None;
        }
        for (i, di) in d.iter().enumerate() {
            r[k + i] -= &c * di;
        }
        q[k] = c;
    }
    r.iter().all(Zero::is_zero).then_some(q)
}

/// Positive divisors of `|n|`, or `None` when `|n|` does not fit in 64 bits.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let m = n.abs().to_u64()?;
    if m == 0 {
        return None;
    }
    let mut out = vec![1u64];
    for (p, e) in factorize_u64(m) {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    Some(out.into_iter().map(BigInt::from).collect())
}

fn signed(ds: &[BigInt]) -> Vec<BigInt> {
    ds.iter().flat_map(|d| [d.clone(), -d.clone()]).collect()
}

/// Outcome of a factor search on a primitive polynomial with `P(0) ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Search {
    Factor(Poly),
    /// No factor of degree ≤ 3 exists.
    NoneUpToCubic,
    /// The enumeration was abandoned (values too large to factor, or the
    /// trial budget ran out).
    GaveUp,
}

/// A nontrivial factor of degree ≤ 3 of `p`, if one exists.
pub fn find_small_factor(p: &Poly) -> Search {
    let n = degree(p);
    if n <= 1 {
        return Search::NoneUpToCubic;
    }
    let (Some(d0), Some(dn)) = (divisors(&p[0]), divisors(&p[n])) else {
        return Search::GaveUp;
    };
    let c0s = signed(&d0);
    let mut trials = 0usize;
    // Linear factors c1 y + c0.
    for c1 in &dn {
        for c0 in &c0s {
            trials += 1;
            let f = vec![c0.clone(), c1.clone()];
            if div_exact(p, &f).is_some() {
                return Search::Factor(f);
            }
        }
    }
    if n < 4 {
        // A reducible quadratic or cubic has a linear factor.
        return Search::NoneUpToCubic;
    }
    let (v1, vm1) = (eval(p, 1), eval(p, -1));
    let (Some(d1), Some(dm1)) = (divisors(&v1), divisors(&vm1)) else {
        return Search::GaveUp;
    };
    let (s1, sm1) = (signed(&d1), signed(&dm1));
    let two = BigInt::from(2);
    for top_degree in [2usize, 3] {
        if 2 * top_degree > n {
            break;
        }
        for ct in &dn {
            for c0 in &c0s {
                for a in &s1 {
                    for b in &sm1 {
                        trials += 1;
                        if trials > MAX_TRIALS {
                            return Search::GaveUp;
                        }
                        // a = F(1), b = F(-1).
                        let f = if top_degree == 2 {
                            // F = ct y^2 + c1 y + c0: a - b = 2 c1, a + b = 2 (ct + c0).
                            if a + b != &two * (ct + c0) {
                                continue;
                            }
                            let c1 = (a - b) / &two;
                            vec![c0.clone(), c1, ct.clone()]
                        } else {
                            // F = ct y^3 + c2 y^2 + c1 y + c0.
                            let (s, d) = (a + b, a - b);
                            if s.is_odd() || d.is_odd() {
                                continue;
                            }
                            let c2 = &s / &two - c0;
                            let c1 = &d / &two - ct;
                            vec![c0.clone(), c1, c2, ct.clone()]
                        };
                        if div_exact(p, &f).is_some() {
                            return Search::Factor(f);
                        }
                    }
                }
            }
        }
    }
    if n <= DECISIVE_DEGREE {
        Search::NoneUpToCubic
    } else {
        Search::GaveUp
    }
}

/// Complete factorization into primitive factors, each either proved
/// irreducible (`true`) or left unresolved (`false`).
pub fn factor_completely(p: &Poly) -> Vec<(Poly, bool)> {
    let mut out = Vec::new();
    let mut stack = vec![p.clone()];
    while let Some(f) = stack.pop() {
        match find_small_factor(&f) {
            Search::Factor(g) => {
                let h = div_exact(&f, &g).expect("factor divides");
                stack.push(h);
                stack.push(g);
            }
            Search::NoneUpToCubic => out.push((f, true)),
            Search::GaveUp => out.push((f, false)),
        }
    }
    out.sort();
    out
}

pub fn to_rational(p: &Poly) -> Vec<BigRational> {
    p.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> Poly {
        cs.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn mul(a: &Poly, b: &Poly) -> Poly {
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    #[test]
    fn linear_and_quadratic_factors() {
        assert_eq!(find_small_factor(&poly(&[1, 0, -1])), Search::Factor(poly(&[1, 1])));
        assert_eq!(find_small_factor(&poly(&[1, 2, 1])), Search::Factor(poly(&[1, 1])));
        assert_eq!(find_small_factor(&poly(&[1, 1, 1])), Search::NoneUpToCubic);
        // (y^2 + y + 1)(y^2 + 2) has no rational root.
        let p = mul(&poly(&[1, 1, 1]), &poly(&[2, 0, 1]));
        let Search::Factor(f) = find_small_factor(&p) else { panic!() };
        assert_eq!(degree(&f), 2);
        assert!(div_exact(&p, &f).is_some());
    }

    #[test]
    fn cubic_factor() {
        let a = poly(&[1, 1, 0, 2]);
        let b = poly(&[3, 0, 1, 0, 1]);
        let p = mul(&a, &b);
        let Search::Factor(f) = find_small_factor(&p) else { panic!() };
        assert!(degree(&f) <= 3 && div_exact(&p, &f).is_some());
    }

    #[test]
    fn irreducible_examples() {
        assert_eq!(find_small_factor(&poly(&[1, 1, 0, 0, 0, 1])), Search::Factor(poly(&[1, 1, 1])));
        assert_eq!(find_small_factor(&poly(&[2, 0, 0, 0, 0, 1])), Search::NoneUpToCubic);
        assert_eq!(find_small_factor(&poly(&[-2, 0, 0, 1])), Search::NoneUpToCubic);
    }

    #[test]
    fn complete_factorization() {
        let p = mul(&mul(&poly(&[1, 1]), &poly(&[1, 1])), &poly(&[1, 1, 1]));
        let fs = factor_completely(&p);
        assert_eq!(fs, vec![(poly(&[1, 1]), true), (poly(&[1, 1]), true), (poly(&[1, 1, 1]), true)]);
    }

    #[test]
    fn primitive_parts() {
        let (p, c) = primitive(&[BigRational::new(1.into(), 2.into()), BigRational::new((-3).into(), 4.into())]);
        assert_eq!(p, poly(&[-2, 3]));
        assert_eq!(c, BigRational::new((-1).into(), 4.into()));
    }
}
