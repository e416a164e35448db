//! Integer factorization for small rationals and the rational-power test.

use std::collections::BTreeMap;

use num::integer::Integer;
use num::{BigRational, One, Signed, ToPrimitive};

use super::{format_rational, AlgebraicError, Result};

/// Numerators and denominators above this bound are refused.
pub const DEFAULT_FACTOR_BOUND: u64 = 1 << 63;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard's rho; `n` must be odd and composite.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q, m) = (2u64, 1u64, 1u64, 128u64);
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
            }
            r <<= 1;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Prime factorization as sorted `(prime, exponent)` pairs; `factorize_u64(1)` is empty.
pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: BTreeMap<u64, u32> = BTreeMap::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n.is_multiple_of(p) {
            *out.entry(p).or_default() += 1;
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            *out.entry(m).or_default() += 1;
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    out.into_iter().collect()
}

/// Exponent vector of a positive rational: primes of the numerator with
/// positive exponents, of the denominator with negative ones.
pub fn factorize_rational(q: &BigRational, bound: u64) -> Result<BTreeMap<u64, i64>> {
    if !q.is_positive() {
        return Err(AlgebraicError::NotAboveOne(format_rational(q)));
    }
    let to_u64 = |n: &num::BigInt| {
        n.to_u64().filter(|&v| v <= bound).ok_or_else(|| AlgebraicError::FactorizationBound {
            value: n.to_string(),
            bound,
        })
    };
    let mut out = BTreeMap::new();
    for (p, e) in factorize_u64(to_u64(q.numer())?) {
        *out.entry(p).or_insert(0) += e as i64;
    }
    for (p, e) in factorize_u64(to_u64(q.denom())?) {
        *out.entry(p).or_insert(0) -= e as i64;
    }
    Ok(out)
}

/// Coprime positive `(p, q)` with `a^p = b^q` when `log b / log a` is
/// rational, `None` otherwise. Both inputs must exceed 1.
pub fn rational_log_ratio(a: &BigRational, b: &BigRational) -> Result<Option<(u64, u64)>> {
    rational_log_ratio_bounded(a, b, DEFAULT_FACTOR_BOUND)
}

pub fn rational_log_ratio_bounded(a: &BigRational, b: &BigRational, bound: u64) -> Result<Option<(u64, u64)>> {
    for x in [a, b] {
        if *x <= BigRational::one() {
            return Err(AlgebraicError::NotAboveOne(format_rational(x)));
        }
    }
    let ea = factorize_rational(a, bound)?;
    let eb = factorize_rational(b, bound)?;
    // a^p = b^q  <=>  p * ea = q * eb, so p/q = eb_k / ea_k at any prime k with ea_k != 0.
    let (&prime, &ea_k) = ea.iter().next().expect("a > 1 has a prime factor");
    let eb_k = eb.get(&prime).copied().unwrap_or(0);
    if eb_k == 0 || eb_k.signum() != ea_k.signum() {
        return Ok(None);
    }
    let g = eb_k.abs().gcd(&ea_k.abs());
    let (p, q) = (eb_k.abs() / g, ea_k.abs() / g);
    let primes = ea.keys().chain(eb.keys());
    for k in primes {
        let x = ea.get(k).copied().unwrap_or(0);
        let y = eb.get(k).copied().unwrap_or(0);
        if x * p != y * q {
            return Ok(None);
        }
    }
    Ok(Some((p as u64, q as u64)))
}
