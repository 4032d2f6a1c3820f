//! Reference tables, stored as exact strings and parsed on demand.

use crate::error::{Error, Result};
use crate::ring::{CycloPoly, CyclotomicInt};

/// `(p, p mod 12, modified c)` for the Hecke eigenvalue table.
pub const TABLE1: [(u64, u64, i64); 18] = [
    (5, 5, 7),
    (7, 7, 5),
    (11, 11, -5),
    (13, 1, 20),
    (17, 5, -8),
    (19, 7, -6),
    (23, 11, 2),
    (29, 5, 10),
    (31, 7, 31),
    (37, 1, -10),
    (41, 5, -50),
    (43, 7, -10),
    (47, 11, -50),
    (53, 5, -47),
    (59, 11, 20),
    (61, 1, -64),
    (67, 7, -50),
    (71, 11, 0),
];

/// `(p, factored form, expanded form)`; the expanded form is empty where
/// the table gives only the factorization.
pub const TABLE2: [(u64, &str, &str); 9] = [
    (5, "(T^2+7iT-5^2)(T^2-7iT-5^2)", "T^4-T^2+5^4"),
    (7, "(T^2+5\\sqrt{-3}T-7^2)(T^2-5\\sqrt{-3}T-7^2)", "T^4-23T^2+7^4"),
    (11, "(T^2-5\\sqrt{-3}T-11^2)(T^2+5\\sqrt{-3}T-11^2)", "T^4-167T^2+11^4"),
    (13, "(T^2+20T+13^2)^2", ""),
    (17, "(T^2+8iT-17^2)(T^2-8iT-17^2)", "T^4-514T^2+17^4"),
    (19, "(T^2+6\\sqrt{-3}T-19^2)(T^2-6\\sqrt{-3}T-19^2)", "T^4-614T^2+19^4"),
    (23, "(T^2-2\\sqrt{-3}T-23^2)(T^2+2\\sqrt{-3}T-23^2)", "T^4-1046T^2+23^4"),
    (37, "(T^2+10T+37^2)^2", ""),
    (53, "(T^2-47iT-53^2)(T^2+47iT-53^2)", "T^4-3409T^2+53^4"),
];

pub fn table1_value(p: u64) -> Option<i64> {
    TABLE1.iter().find(|r| r.0 == p).map(|r| r.2)
}

pub fn table2_row(p: u64) -> Option<(&'static str, &'static str)> {
    TABLE2.iter().find(|r| r.0 == p).map(|r| (r.1, r.2))
}

fn bad(s: &str) -> Error {
    Error::InvalidInput(format!("cannot parse table entry {s:?}"))
}

/// Parses an integer term such as `13^2`, `-1046`, or an empty string as 1.
fn parse_int(s: &str) -> Result<i128> {
    if s.is_empty() {
        return Ok(1);
    }
    match s.split_once('^') {
        Some((b, e)) => {
            let b: i128 = b.parse().map_err(|_| bad(s))?;
            let e: u32 = e.parse().map_err(|_| bad(s))?;
            Ok(b.pow(e))
        }
        None => s.parse().map_err(|_| bad(s)),
    }
}

/// Coefficient text such as `7i`, `5\sqrt{-3}`, `20`, `` (unit) in `Z[w_12]`.
fn parse_coeff(s: &str) -> Result<CyclotomicInt> {
    if let Some(n) = s.strip_suffix("\\sqrt{-3}") {
        return Ok(CyclotomicInt::sqrt_minus_three(12)?.scale(parse_int(n)?));
    }
    if let Some(n) = s.strip_suffix("\\sqrt{3}") {
        return Ok(CyclotomicInt::sqrt_three().scale(parse_int(n)?));
    }
    if let Some(n) = s.strip_suffix('i') {
        return Ok(CyclotomicInt::sqrt_minus_one(12)?.scale(parse_int(n)?));
    }
    Ok(CyclotomicInt::from_int(12, parse_int(s)?))
}

/// Splits `T^4-T^2+5^4` into signed terms.
fn terms(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0;
    for ch in s.chars() {
        match ch {
            '{' => depth += 1,
            '}' => depth -= 1,
            _ => {}
        }
        if (ch == '+' || ch == '-') && depth == 0 && !cur.is_empty() && !cur.ends_with('{') {
            out.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Parses a polynomial in `T` written as a sum of terms `cT^k`.
pub fn parse_poly(s: &str) -> Result<CycloPoly> {
    let mut coeffs: Vec<CyclotomicInt> = Vec::new();
    for term in terms(s) {
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, term.strip_prefix('+').unwrap_or(&term)),
        };
        let (c, deg) = match body.find('T') {
            None => (parse_coeff(body)?, 0usize),
            Some(pos) => {
                let rest = &body[pos + 1..];
                let deg = match rest.strip_prefix('^') {
                    Some(e) => e.parse().map_err(|_| bad(s))?,
                    None if rest.is_empty() => 1,
                    None => return Err(bad(s)),
                };
                (parse_coeff(&body[..pos])?, deg)
            }
        };
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, CyclotomicInt::zero(12));
        }
        coeffs[deg] = coeffs[deg].clone() + c.scale(sign);
    }
    Ok(CycloPoly::new(12, coeffs))
}

/// Parses `(f)(g)` or `(f)^2` into its list of factors (with repetition).
pub fn parse_factored(s: &str) -> Result<Vec<CycloPoly>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let inner_end = rest.find(')').ok_or_else(|| bad(s))?;
        if !rest.starts_with('(') {
            return Err(bad(s));
        }
        let f = parse_poly(&rest[1..inner_end])?;
        rest = &rest[inner_end + 1..];
        let mut mult = 1;
        if let Some(r) = rest.strip_prefix('^') {
            let digits: String = r.chars().take_while(|c| c.is_ascii_digit()).collect();
            mult = digits.parse().map_err(|_| bad(s))?;
            rest = &r[digits.len()..];
        }
        for _ in 0..mult {
            out.push(f.clone());
        }
    }
    Ok(out)
}

/// Integer coefficients of a new-part reference row (expanded form, or the product of
/// the factors when only the factorization is listed).
pub fn table2_integer_poly(p: u64) -> Result<Vec<i128>> {
    let (fact, expanded) = table2_row(p).ok_or_else(|| Error::InvalidInput(format!("no reference row for {p}")))?;
    let poly = if expanded.is_empty() {
        parse_factored(fact)?.iter().fold(CycloPoly::one(12), |acc, f| &acc * f)
    } else {
        parse_poly(expanded)?
    };
    poly.to_integers().ok_or_else(|| Error::Structure(format!("row {p} is not integral")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factored_and_expanded_rows_agree() {
        for (p, fact, expanded) in TABLE2 {
            let prod = parse_factored(fact).unwrap().iter().fold(CycloPoly::one(12), |acc, f| &acc * f);
            let ints = prod.to_integers().expect("integral product");
            if !expanded.is_empty() {
                assert_eq!(ints, parse_poly(expanded).unwrap().to_integers().unwrap(), "p = {p}");
            }
            assert_eq!(ints[0], (p as i128).pow(4));
        }
    }

    #[test]
    fn parse_examples() {
        assert_eq!(table2_integer_poly(5).unwrap(), vec![625, 0, -1, 0, 1]);
        assert_eq!(table2_integer_poly(13).unwrap(), vec![28561, 40 * 169, 400 + 2 * 169, 40, 1]);
    }
}
