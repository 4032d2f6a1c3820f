//! Residue rings `Z/p^k` and the unramified quadratic extension
//! `(Z/p^k)[s]/(s^2 - d)` with `d` a non-residue mod `p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{balanced, inv_mod, is_prime, mul_mod, pow_mod, reduce_i64};
use crate::error::{invalid, Result};

/// Outcome of [`super::sqrt_mod`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SqrtMod {
    Root(PadicElement),
    /// `d` is not a square mod `p`; use the unramified extension.
    Inert,
}

/// Modulus descriptor: `p`, precision `k`, and the extension discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicRing {
    p: u64,
    k: u32,
    modulus: u64,
    ext: Option<u64>,
}

impl PadicRing {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        if k == 0 {
            return invalid("precision exponent must be >= 1");
        }
        let modulus = p
            .checked_pow(k)
            .filter(|m| *m < (1 << 62))
            .ok_or_else(|| crate::Error::InvalidInput(format!("{p}^{k} overflows")))?;
        Ok(PadicRing { p, k, modulus, ext: None })
    }

    /// `(Z/p^k)[s]/(s^2 - d)` for the least positive non-residue `d`.
    pub fn unramified(p: u64, k: u32) -> Result<Self> {
        if p == 2 {
            return invalid("the quadratic extension needs an odd prime");
        }
        let base = Self::new(p, k)?;
        let d = (2..p).find(|&d| pow_mod(d, (p - 1) / 2, p) == p - 1).unwrap();
        Ok(PadicRing { ext: Some(d), ..base })
    }

    /// Same ring with the extension discriminant `d`, which must be a
    /// non-residue mod `p`.
    pub fn with_ext(p: u64, k: u32, d: i64) -> Result<Self> {
        let base = Self::new(p, k)?;
        let dr = reduce_i64(d, p);
        if dr == 0 || pow_mod(dr, (p - 1) / 2, p) == 1 {
            return invalid(format!("{d} is not a non-residue mod {p}"));
        }
        Ok(PadicRing { ext: Some(reduce_i64(d, base.modulus)), ..base })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    pub fn ext(&self) -> Option<u64> {
        self.ext
    }

    pub fn element(&self, a: u64) -> PadicElement {
        PadicElement { ring: *self, a: a % self.modulus, b: 0 }
    }

    pub fn pair(&self, a: u64, b: u64) -> PadicElement {
        assert!(self.ext.is_some() || b % self.modulus == 0, "no extension generator");
        PadicElement { ring: *self, a: a % self.modulus, b: b % self.modulus }
    }

    pub fn from_i64(&self, v: i64) -> PadicElement {
        self.element(reduce_i64(v, self.modulus))
    }

    pub fn zero(&self) -> PadicElement {
        self.element(0)
    }

    pub fn one(&self) -> PadicElement {
        self.element(1)
    }

    /// The extension generator `s` with `s^2 = d`.
    pub fn generator(&self) -> Option<PadicElement> {
        self.ext.map(|_| self.pair(0, 1))
    }

    /// Residue field size: `p` or `p^2`.
    fn residue_elements(&self) -> impl Iterator<Item = PadicElement> + '_ {
        let p = self.p;
        let two = self.ext.is_some();
        (0..p).flat_map(move |a| {
            let bs = if two { p } else { 1 };
            (0..bs).map(move |b| self.pair(a, b))
        })
    }

    /// All roots in this ring of the integer polynomial `coeffs` (low to
    /// high), found on the residue field and Hensel-lifted. Only simple roots
    /// mod `p` are returned.
    pub fn roots(&self, coeffs: &[i64]) -> Vec<PadicElement> {
        let poly: Vec<PadicElement> = coeffs.iter().map(|&c| self.from_i64(c)).collect();
        let deriv: Vec<PadicElement> = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.from_i64(c * i as i64))
            .collect();
        let eval = |x: PadicElement, f: &[PadicElement]| {
            f.iter().rev().fold(self.zero(), |acc, &c| acc * x + c)
        };
        let mut out = Vec::new();
        for x0 in self.residue_elements() {
            let fx = eval(x0, &poly);
            if fx.valuation() == 0 {
                continue;
            }
            let dx = eval(x0, &deriv);
            if dx.valuation() > 0 {
                continue;
            }
            let mut x = x0;
            for _ in 0..=self.k {
                let f = eval(x, &poly);
                if f.is_zero() {
                    break;
                }
                let d = eval(x, &deriv).inv().expect("simple root");
                x = x - f * d;
            }
            out.push(x);
        }
        out
    }

    /// The primitive `m`-th roots of unity present in this ring.
    pub fn primitive_roots_of_unity(&self, m: u64) -> Vec<PadicElement> {
        let phi = super::cyclotomic::cyclotomic_poly(m);
        self.roots(&phi)
    }
}

impl fmt::Display for PadicRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ext {
            None => write!(f, "Z/{}^{}", self.p, self.k),
            Some(d) => write!(f, "Z/{}^{}[sqrt({})]", self.p, self.k, balanced(d, self.modulus)),
        }
    }
}

/// An element `a + b*s` of a [`PadicRing`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicElement {
    ring: PadicRing,
    a: u64,
    b: u64,
}

impl PadicElement {
    pub fn ring(&self) -> PadicRing {
        self.ring
    }

    /// Rational coordinate (the whole element when there is no extension).
    pub fn residue(&self) -> u64 {
        self.a
    }

    pub fn coords(&self) -> (u64, u64) {
        (self.a, self.b)
    }

    pub fn balanced(&self) -> (i64, i64) {
        (balanced(self.a, self.ring.modulus), balanced(self.b, self.ring.modulus))
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// p-adic valuation, capped at the precision `k` for zero.
    pub fn valuation(&self) -> u32 {
        let v = |x: u64| {
            if x == 0 {
                self.ring.k
            } else {
                super::ord_p(x, self.ring.p).min(self.ring.k)
            }
        };
        v(self.a).min(v(self.b))
    }

    pub fn conj(&self) -> Self {
        PadicElement { b: (self.ring.modulus - self.b) % self.ring.modulus, ..*self }
    }

    /// Inverse, when the element is a unit.
    pub fn inv(&self) -> Option<Self> {
        let m = self.ring.modulus;
        match self.ring.ext {
            None => inv_mod(self.a, m).map(|a| self.ring.element(a)),
            Some(d) => {
                // (a + bs)^-1 = (a - bs) / (a^2 - d b^2)
                let norm = (mul_mod(self.a, self.a, m) + m - mul_mod(d, mul_mod(self.b, self.b, m), m)) % m;
                let ni = inv_mod(norm, m)?;
                Some(self.conj() * self.ring.element(ni))
            }
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.balanced();
        if self.ring.ext.is_none() || b == 0 {
            write!(f, "{a}")
        } else {
            write!(f, "{a}{:+}*s", b)
        }
    }
}

impl Add for PadicElement {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        debug_assert_eq!(self.ring, o.ring);
        let m = self.ring.modulus;
        PadicElement { ring: self.ring, a: (self.a + o.a) % m, b: (self.b + o.b) % m }
    }
}

impl Sub for PadicElement {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for PadicElement {
    type Output = Self;
    fn neg(self) -> Self {
        let m = self.ring.modulus;
        PadicElement { ring: self.ring, a: (m - self.a) % m, b: (m - self.b) % m }
    }
}

impl Mul for PadicElement {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        debug_assert_eq!(self.ring, o.ring);
        let m = self.ring.modulus;
        match self.ring.ext {
            None => PadicElement { ring: self.ring, a: mul_mod(self.a, o.a, m), b: 0 },
            Some(d) => {
                let a = (mul_mod(self.a, o.a, m) + mul_mod(d, mul_mod(self.b, o.b, m), m)) % m;
                let b = (mul_mod(self.a, o.b, m) + mul_mod(self.b, o.a, m)) % m;
                PadicElement { ring: self.ring, a, b }
            }
        }
    }
}
