use std::sync::Arc;

use num::{BigInt, BigRational, One, Zero};

use super::{AlgebraicError, AlgebraicReal, BasisContext, Result};

fn parse_err(column: usize, message: impl Into<String>) -> AlgebraicError {
    AlgebraicError::Parse { column, message: message.into() }
}

fn digits_at(s: &[u8], mut i: usize) -> usize {
    while i < s.len() && s[i].is_ascii_digit() {
        i += 1;
    }
    i
}

/// Parses `-?digits(/digits)?`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let (q, end) = scan_rational(t.as_bytes(), 0)?;
    if end != t.len() {
        return Err(parse_err(end + 1, format!("unexpected `{}`", &t[end..])));
    }
    Ok(q)
}

fn scan_rational(s: &[u8], start: usize) -> Result<(BigRational, usize)> {
    let mut i = start;
    let negative = s.get(i) == Some(&b'-');
    if negative {
        i += 1;
    }
    let num_end = digits_at(s, i);
    if num_end == i {
        return Err(parse_err(i + 1, "expected digits"));
    }
    let numer: BigInt = std::str::from_utf8(&s[i..num_end]).unwrap().parse().unwrap();
    i = num_end;
    let mut denom = BigInt::one();
    if s.get(i) == Some(&b'/') {
        let den_end = digits_at(s, i + 1);
        if den_end == i + 1 {
            return Err(parse_err(i + 2, "expected denominator digits"));
        }
        denom = std::str::from_utf8(&s[i + 1..den_end]).unwrap().parse().unwrap();
        if denom.is_zero() {
            return Err(parse_err(i + 2, "zero denominator"));
        }
        i = den_end;
    }
    let q = BigRational::new(numer, denom);
    Ok((if negative { -q } else { q }, i))
}

/// Parses a plain decimal `-?digits(.digits)?`, returning the exact value and
/// the number of fractional digits.
pub fn parse_decimal(text: &str) -> Result<(BigRational, u32)> {
    let t = text.trim();
    let s = t.as_bytes();
    let mut i = 0;
    let negative = s.first() == Some(&b'-');
    if negative {
        i += 1;
    }
    let int_end = digits_at(s, i);
    if int_end == i {
        return Err(parse_err(i + 1, "expected digits"));
    }
    let mut digits = String::from(&t[i..int_end]);
    let mut frac = 0u32;
    let mut end = int_end;
    if s.get(int_end) == Some(&b'.') {
        end = digits_at(s, int_end + 1);
        if end == int_end + 1 {
            return Err(parse_err(end + 1, "expected fractional digits"));
        }
        digits.push_str(&t[int_end + 1..end]);
        frac = (end - int_end - 1) as u32;
    }
    if end != s.len() {
        return Err(parse_err(end + 1, format!("unexpected `{}`", &t[end..])));
    }
    let n: BigInt = digits.parse().unwrap();
    let q = BigRational::new(n, BigInt::from(10u32).pow(frac));
    Ok((if negative { -q } else { q }, frac))
}

/// Parses `<term> (± <term>)*` where `<term>` is `<rat>`, `<rat>*<symbol>`
/// or a bare `<symbol>`. Whitespace between tokens is ignored.
pub fn parse_number(text: &str, ctx: &Arc<BasisContext>) -> Result<AlgebraicReal> {
    let mut prev: Option<char> = None;
    let mut gap = false;
    for (col, c) in text.chars().enumerate() {
        if c.is_whitespace() {
            gap = prev.is_some();
            continue;
        }
        if gap && !matches!(c, '+' | '-') && !matches!(prev, Some('+' | '-')) {
            return Err(parse_err(col + 1, "whitespace inside a term"));
        }
        prev = Some(c);
        gap = false;
    }
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let s = compact.as_bytes();
    if s.is_empty() {
        return Err(parse_err(1, "empty number"));
    }
    let mut value = AlgebraicReal::zero(ctx);
    let mut i = 0;
    let mut first = true;
    while i < s.len() {
        let mut sign = BigRational::one();
        match s[i] {
            b'+' if !first => i += 1,
            b'-' => {
                sign = -sign;
                i += 1;
            }
            _ if !first => return Err(parse_err(i + 1, "expected `+` or `-`")),
            _ => {}
        }
        first = false;
        let (coeff, sym_start) = if s.get(i).is_some_and(u8::is_ascii_digit) {
            let (q, end) = scan_rational(s, i)?;
            if s.get(end) == Some(&b'*') {
                (q, Some(end + 1))
            } else {
                value.coords[0] += &sign * q;
                i = end;
                continue;
            }
        } else {
            (BigRational::one(), Some(i))
        };
        let start = sym_start.unwrap();
        let mut end = start;
        while end < s.len() && (s[end].is_ascii_alphanumeric() || s[end] == b'_') {
            end += 1;
        }
        let name = &compact[start..end];
        if name.is_empty() || !super::is_identifier(name) {
            return Err(parse_err(start + 1, "expected a symbol name"));
        }
        let idx = ctx
            .index_of(name)
            .filter(|&k| k > 0)
            .ok_or_else(|| parse_err(start + 1, format!("undeclared symbol `{name}`")))?;
        value.coords[idx] += &sign * coeff;
        i = end;
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert_eq!(parse_rational("7").unwrap(), BigRational::from_integer(7.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn decimals() {
        let (v, d) = parse_decimal("1.25").unwrap();
        assert_eq!(v, BigRational::new(5.into(), 4.into()));
        assert_eq!(d, 2);
        assert!(parse_decimal("1.").is_err());
        assert!(parse_decimal("x").is_err());
    }

    #[test]
    fn span_numbers() {
        let ctx = BasisContext::with_symbols(&[("s2", "1.4142135623730950488016887242096980785696")]).unwrap();
        let x = parse_number("1/2 - 3*s2", &ctx).unwrap();
        assert_eq!(x.to_string(), "1/2-3*s2");
        let y = parse_number("-s2+1", &ctx).unwrap();
        assert_eq!(y.to_string(), "1-1*s2");
        assert_eq!(parse_number(&x.to_string(), &ctx).unwrap(), x);
        assert!(parse_number("1*s5", &ctx).is_err());
        assert!(parse_number("1 2", &ctx).is_err());
        assert!(parse_number("", &ctx).is_err());
    }
}
