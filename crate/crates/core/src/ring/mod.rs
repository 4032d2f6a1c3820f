//! Exact arithmetic kernel.
//!
//! Machine-word modular helpers live here; the richer types are split into
//! submodules: residue rings `Z/p^k` and their unramified quadratic
//! extensions ([`padic`]), finite fields `F_{p^r}` ([`ffield`]), the small
//! cyclotomic rings `Z[w_m]` ([`cyclotomic`]) and exact rationals
//! ([`rational`]).

pub mod cyclotomic;
pub mod ffield;
pub mod padic;
pub mod rational;

pub use cyclotomic::{CyclotomicInt, CycloPoly};
pub use ffield::{FiniteField, Fq};
pub use padic::{PadicElement, PadicRing, SqrtMod};
pub use rational::BigRational;

use crate::error::{invalid, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

/// Reduces a signed integer into `[0, m)`.
#[inline]
pub fn reduce_i64(v: i64, m: u64) -> u64 {
    (v as i128).rem_euclid(m as i128) as u64
}

#[inline]
pub fn reduce_i128(v: i128, m: u64) -> u64 {
    v.rem_euclid(m as i128) as u64
}

/// Representative of `v mod m` in `(-m/2, m/2]`.
pub fn balanced(v: u64, m: u64) -> i64 {
    let v = v % m;
    if v > m / 2 {
        v as i64 - m as i64
    } else {
        v as i64
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13] {
        if n % small == 0 {
            return n == small;
        }
    }
    let mut d = 17;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes in `[lo, hi]`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&n| is_prime(n)).collect()
}

/// Distinct prime factors, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

/// Exponent of `p` in `n` (`n > 0`).
pub fn ord_p(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

/// Least `r >= 1` with `p^r = 1 mod n`.
pub fn order_mod(p: u64, n: u64) -> Result<u32> {
    if n == 0 {
        return invalid("modulus must be positive");
    }
    if gcd(p % n.max(1), n) != 1 && n != 1 {
        return invalid(format!("gcd({p}, {n}) != 1"));
    }
    if n == 1 {
        return Ok(1);
    }
    let mut acc = p % n;
    let mut r = 1;
    while acc != 1 {
        acc = mul_mod(acc, p, n);
        r += 1;
    }
    Ok(r)
}

/// Legendre symbol `(a / p)` for an odd prime `p`.
pub fn legendre(a: i64, p: u64) -> i32 {
    let a = reduce_i64(a, p);
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Square root of a quadratic residue modulo an odd prime (Tonelli-Shanks),
/// returning the smaller of the two roots.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r.min(p - r))
}

/// Square root of `d` modulo `p^k`.
///
/// Returns [`SqrtMod::Root`] with the Hensel lift of the root whose least
/// non-negative residue mod `p` is smaller, or [`SqrtMod::Inert`] when `d`
/// is a non-residue (callers then work in [`PadicRing::unramified`]).
pub fn sqrt_mod(d: i64, p: u64, k: u32) -> Result<SqrtMod> {
    if p == 2 || !is_prime(p) {
        return invalid(format!("sqrt_mod needs an odd prime, got {p}"));
    }
    if k == 0 {
        return invalid("precision must be >= 1");
    }
    if reduce_i64(d, p) == 0 {
        return invalid(format!("{p} divides {d}"));
    }
    let ring = PadicRing::new(p, k)?;
    match sqrt_mod_prime(reduce_i64(d, p), p) {
        None => Ok(SqrtMod::Inert),
        Some(r0) => {
            let root = hensel_sqrt(reduce_i64(d, ring.modulus()), r0, p, ring.modulus());
            Ok(SqrtMod::Root(ring.element(root)))
        }
    }
}

/// Lifts a simple root `r0` of `x^2 - a` mod `p` to a root mod `modulus`.
pub(crate) fn hensel_sqrt(a: u64, r0: u64, p: u64, modulus: u64) -> u64 {
    let mut s = r0 % modulus;
    let mut prec = p;
    while prec < modulus {
        prec = prec.saturating_mul(prec).min(modulus);
        // s <- s - (s^2 - a) / (2s)
        let f = (mul_mod(s, s, prec) + prec - a % prec) % prec;
        let inv = inv_mod(mul_mod(2, s, prec), prec).expect("2s is a unit");
        s = (s + prec - mul_mod(f, inv, prec)) % prec;
    }
    s % modulus
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_examples() {
        assert_eq!(order_mod(13, 6).unwrap(), 1);
        assert_eq!(order_mod(5, 6).unwrap(), 2);
        assert_eq!(order_mod(7, 4).unwrap(), 2);
        assert!(order_mod(3, 6).is_err());
    }

    #[test]
    fn sqrt_examples() {
        match sqrt_mod(-1, 5, 1).unwrap() {
            SqrtMod::Root(s) => assert_eq!(s.residue(), 2),
            SqrtMod::Inert => panic!("-1 is a square mod 5"),
        }
        assert!(matches!(sqrt_mod(3, 5, 1).unwrap(), SqrtMod::Inert));
        match sqrt_mod(-3, 7, 3).unwrap() {
            SqrtMod::Root(s) => {
                let r = s.residue();
                assert_eq!(mul_mod(r, r, 343), 343 - 3);
                assert!(r % 7 == 2 || r % 7 == 5);
            }
            SqrtMod::Inert => panic!(),
        }
        assert!(sqrt_mod(5, 5, 2).is_err());
        assert!(sqrt_mod(3, 2, 2).is_err());
    }

    #[test]
    fn balanced_lift() {
        assert_eq!(balanced(168, 169), -1);
        assert_eq!(balanced(84, 169), 84);
        assert_eq!(balanced(85, 169), -84);
        assert_eq!(balanced(2, 4), 2);
    }

    #[test]
    fn small_number_theory() {
        assert_eq!(euler_phi(12), 4);
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(ord_p(250, 5), 3);
        assert_eq!(inv_mod(3, 10), Some(7));
        assert_eq!(inv_mod(5, 10), None);
        assert_eq!(primes_between(5, 23), vec![5, 7, 11, 13, 17, 19, 23]);
    }
}
