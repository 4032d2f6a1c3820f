//! Finite fields `F_{p^r}`, `r <= 4`, with discrete-log tables.
//!
//! An element is stored as its index `c_0 + c_1 p + ... + c_{r-1} p^{r-1}`
//! where `c_0 + c_1 x + ...` is its polynomial representative modulo the
//! least monic irreducible of degree `r` (least by that same index of the
//! lower coefficients). Multiplication runs through log/exp tables, and
//! addition in the log domain through a Zech table.

use super::{inv_mod, is_prime, pow_mod, prime_factors};
use crate::error::{invalid, Error, Result};

/// Default cap on `q` for table construction.
pub const DEFAULT_FIELD_BUDGET: u64 = 1 << 22;

/// Log value standing for the zero element.
pub const LOG_ZERO: u32 = u32::MAX;

/// An element of a [`FiniteField`], by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq(pub u32);

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u64,
    r: u32,
    q: u64,
    modulus: Vec<u64>,
    generator: Fq,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

fn poly_mulmod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let r = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * r];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for top in (r..2 * r).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for j in 0..r {
            prod[top - r + j] = (prod[top - r + j] + (p - c) * modulus[j]) % p;
        }
    }
    prod.truncate(r);
    prod
}

fn poly_powmod(base: &[u64], mut e: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let r = modulus.len() - 1;
    let mut acc = vec![0u64; r];
    acc[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, modulus, p);
        }
        b = poly_mulmod(&b, &b, modulus, p);
        e >>= 1;
    }
    acc
}

fn digits(mut idx: u64, p: u64, r: u32) -> Vec<u64> {
    (0..r)
        .map(|_| {
            let d = idx % p;
            idx /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `f` (monic or not) by monic `g`, coefficients mod `p`.
fn poly_rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut rem = f.to_vec();
    let dg = g.len() - 1;
    while rem.len() > dg {
        let c = rem.pop().unwrap();
        if c == 0 {
            continue;
        }
        let shift = rem.len() - dg;
        for j in 0..dg {
            rem[shift + j] = (rem[shift + j] + (p - c) * g[j]) % p;
        }
    }
    rem
}

/// Irreducibility of a monic polynomial of degree <= 4 over `F_p`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for x in 0..p {
        let v = f.iter().rev().fold(0, |acc, &c| (acc * x + c) % p);
        if v == 0 {
            return false;
        }
    }
    if deg >= 4 {
        for c0 in 0..p {
            for c1 in 0..p {
                if poly_rem(f, &[c0, c1, 1], p).iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
    }
    true
}

impl FiniteField {
    /// `F_{p^r}` with the default budget.
    pub fn new(p: u64, r: u32) -> Result<Self> {
        Self::with_budget(p, r, DEFAULT_FIELD_BUDGET)
    }

    pub fn with_budget(p: u64, r: u32, budget: u64) -> Result<Self> {
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        if r == 0 || r > 4 {
            return invalid(format!("extension degree {r} outside 1..=4"));
        }
        let q = p.checked_pow(r).filter(|&q| q <= budget).ok_or(Error::BudgetExceeded {
            q: p.saturating_pow(r),
            budget,
        })?;
        let ri = r as usize;

        let modulus = if r == 1 {
            vec![0, 1]
        } else {
            (0..q)
                .map(|idx| {
                    let mut m = digits(idx, p, r);
                    m.push(1);
                    m
                })
                .find(|m| is_irreducible(m, p))
                .ok_or_else(|| Error::Construction(format!("no irreducible of degree {r} mod {p}")))?
        };

        let order = q - 1;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&idx| {
                let g = digits(idx, p, r);
                factors.iter().all(|&l| {
                    let v = poly_powmod(&g, order / l, &modulus, p);
                    undigits(&v, p) != 1
                })
            })
            .ok_or_else(|| Error::Construction(format!("no primitive element in F_{q}")))?;

        let mut exp = vec![0u32; order as usize];
        let mut log = vec![LOG_ZERO; q as usize];
        let g = digits(generator, p, r);
        let mut cur = vec![0u64; ri];
        cur[0] = 1;
        for (k, slot) in exp.iter_mut().enumerate() {
            let idx = undigits(&cur, p) as usize;
            if log[idx] != LOG_ZERO {
                return Err(Error::Construction(format!("generator of F_{q} has short order")));
            }
            *slot = idx as u32;
            log[idx] = k as u32;
            cur = if r == 1 {
                vec![cur[0] * generator % p]
            } else {
                poly_mulmod(&cur, &g, &modulus, p)
            };
        }
        if undigits(&cur, p) != 1 {
            return Err(Error::Construction(format!("generator of F_{q} has wrong order")));
        }

        let mut field = FiniteField { p, r, q, modulus, generator: Fq(generator as u32), exp, log, zech: Vec::new() };
        let zech: Vec<u32> = (0..order as usize)
            .map(|k| {
                let s = field.add_idx(Fq(field.exp[k]), Fq(1));
                field.log[s.0 as usize]
            })
            .collect();
        field.zech = zech;
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    /// Monic modulus, low degree first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    pub fn generator(&self) -> Fq {
        self.generator
    }

    pub fn zero(&self) -> Fq {
        Fq(0)
    }
    pub fn one(&self) -> Fq {
        Fq(1)
    }

    pub fn from_int(&self, v: i64) -> Fq {
        Fq(super::reduce_i64(v, self.p) as u32)
    }

    /// Polynomial coordinates of an element.
    pub fn coords(&self, x: Fq) -> Vec<u64> {
        digits(x.0 as u64, self.p, self.r)
    }

    pub fn from_coords(&self, c: &[u64]) -> Fq {
        let mut d: Vec<u64> = c.iter().map(|v| v % self.p).collect();
        d.resize(self.r as usize, 0);
        Fq(undigits(&d, self.p) as u32)
    }

    /// Whether the element lies in the prime field.
    pub fn is_prime_field(&self, x: Fq) -> bool {
        (x.0 as u64) < self.p
    }

    fn add_idx(&self, a: Fq, b: Fq) -> Fq {
        if self.r == 1 {
            return Fq(((a.0 as u64 + b.0 as u64) % self.p) as u32);
        }
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.r {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        Fq(out as u32)
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        self.add_idx(a, b)
    }

    pub fn neg(&self, a: Fq) -> Fq {
        if self.r == 1 {
            return Fq(((self.p - a.0 as u64) % self.p) as u32);
        }
        let c: Vec<u64> = self.coords(a).into_iter().map(|v| (self.p - v) % self.p).collect();
        self.from_coords(&c)
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq(0);
        }
        let s = self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64;
        Fq(self.exp[(s % (self.q - 1)) as usize])
    }

    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a.0 == 0 {
            return None;
        }
        let l = self.log[a.0 as usize] as u64;
        Some(Fq(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]))
    }

    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq(1);
        }
        if a.0 == 0 {
            return Fq(0);
        }
        let l = self.log[a.0 as usize] as u128 * e as u128;
        Fq(self.exp[(l % (self.q - 1) as u128) as usize])
    }

    /// `x -> x^p`.
    pub fn frobenius(&self, a: Fq) -> Fq {
        self.pow(a, self.p)
    }

    /// Discrete log to base [`Self::generator`]; [`LOG_ZERO`] for zero.
    #[inline]
    pub fn log(&self, a: Fq) -> u32 {
        self.log[a.0 as usize]
    }

    #[inline]
    pub fn exp(&self, k: u64) -> Fq {
        Fq(self.exp[(k % (self.q - 1)) as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fq) -> Option<u64> {
        if a.0 == 0 {
            return None;
        }
        let l = self.log[a.0 as usize] as u64;
        Some((self.q - 1) / super::gcd(l, self.q - 1))
    }

    /// Sum in the log domain: `log(g^i + g^j)`.
    #[inline]
    pub fn log_add(&self, i: u32, j: u32) -> u32 {
        if i == LOG_ZERO {
            return j;
        }
        if j == LOG_ZERO {
            return i;
        }
        let n = (self.q - 1) as u32;
        let d = if j >= i { j - i } else { j + n - i };
        let z = self.zech[d as usize];
        if z == LOG_ZERO {
            LOG_ZERO
        } else {
            let s = i as u64 + z as u64;
            (s % n as u64) as u32
        }
    }

    /// Quadratic character: 0, 1 or -1 (odd `p`).
    #[inline]
    pub fn quadratic_character(&self, a: Fq) -> i32 {
        match self.log[a.0 as usize] {
            LOG_ZERO => 0,
            l if l % 2 == 0 => 1,
            _ => -1,
        }
    }

    /// Embedding of `F_p` scalars: inverse mod `p` for prime-field values.
    pub fn inv_prime(&self, a: u64) -> Option<u64> {
        inv_mod(a % self.p, self.p)
    }

    /// Check that `g^(q-1) = 1` and no smaller prime-quotient power is 1.
    pub fn verify_generator(&self) -> bool {
        let g = self.generator;
        let n = self.q - 1;
        self.pow(g, n) == Fq(1)
            && prime_factors(n).iter().all(|&l| {
                let gp = digits(g.0 as u64, self.p, self.r);
                undigits(&poly_powmod(&gp, n / l, &self.modulus, self.p), self.p) != 1
            })
    }

    pub fn iter(&self) -> impl Iterator<Item = Fq> {
        (0..self.q as u32).map(Fq)
    }

    /// Scalar `x mod p`, by least non-negative residue.
    pub fn scalar(&self, x: u64) -> Fq {
        Fq((x % self.p) as u32)
    }

    /// `x^((q-1)/m)` exponent map used for order-`m` characters.
    pub fn power_residue_exponent(&self, a: Fq, m: u64) -> Option<u64> {
        if a.0 == 0 || (self.q - 1) % m != 0 {
            return None;
        }
        Some(self.log[a.0 as usize] as u64 % m)
    }
}

/// Prime-field power check used by tests and callers that work with raw
/// residues rather than [`Fq`].
pub fn is_generator_mod_p(g: u64, p: u64) -> bool {
    prime_factors(p - 1).iter().all(|&l| pow_mod(g, (p - 1) / l, p) != 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fields() {
        let f5 = FiniteField::new(5, 1).unwrap();
        assert_eq!(f5.generator(), Fq(2));
        let f2 = FiniteField::new(2, 1).unwrap();
        assert_eq!(f2.generator(), Fq(1));
        let f25 = FiniteField::new(5, 2).unwrap();
        assert_eq!(f25.order(f25.generator()), Some(24));
        assert!(f25.verify_generator());
    }

    #[test]
    fn frobenius_fixes_everything_after_r_steps() {
        for (p, r) in [(3, 4), (5, 3), (7, 2), (2, 4)] {
            let f = FiniteField::new(p, r).unwrap();
            for x in f.iter() {
                assert_eq!(f.pow(x, f.q()), x);
            }
            let fixed = f.iter().filter(|&x| f.frobenius(x) == x).count() as u64;
            assert_eq!(fixed, p);
        }
    }

    #[test]
    fn zech_addition_matches_index_addition() {
        let f = FiniteField::new(7, 3).unwrap();
        for a in f.iter().step_by(5) {
            for b in f.iter().step_by(7) {
                let s = f.add(a, b);
                assert_eq!(f.log_add(f.log(a), f.log(b)), f.log(s));
            }
        }
    }

    #[test]
    fn distributive_and_inverse() {
        let f = FiniteField::new(11, 2).unwrap();
        for a in f.iter().step_by(13) {
            if let Some(ai) = f.inv(a) {
                assert_eq!(f.mul(a, ai), f.one());
            }
            for b in f.iter().step_by(17) {
                let c = Fq(37);
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(FiniteField::with_budget(101, 4, 1_000_000), Err(Error::BudgetExceeded { .. })));
        assert!(FiniteField::new(4, 1).is_err());
        assert!(FiniteField::new(3, 5).is_err());
    }

    #[test]
    fn prime_generator_helper() {
        assert!(is_generator_mod_p(2, 5));
        assert!(!is_generator_mod_p(4, 5));
    }
}
