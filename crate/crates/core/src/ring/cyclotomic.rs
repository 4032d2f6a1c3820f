//! The rings `Z[w_m] = Z[x]/Phi_m(x)` for the small orders that occur here
//! (`m` in 1, 2, 3, 4, 6, 12), plus polynomials over them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::padic::PadicElement;
use crate::error::{invalid, Result};

pub const SUPPORTED_ORDERS: [u32; 6] = [1, 2, 3, 4, 6, 12];

/// Integer coefficients of the `m`-th cyclotomic polynomial, low to high.
pub fn cyclotomic_poly(m: u64) -> Vec<i64> {
    assert!(m >= 1);
    // x^m - 1 divided by Phi_d for every proper divisor d.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            num = exact_div(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut q = vec![0i64; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd] / den[dd];
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// An element of `Z[w_m]` in the power basis `1, w, ..., w^(phi(m)-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclotomicInt {
    m: u32,
    coords: Vec<i128>,
}

impl CyclotomicInt {
    pub fn new(m: u32, coords: Vec<i128>) -> Result<Self> {
        if !SUPPORTED_ORDERS.contains(&m) {
            return invalid(format!("unsupported cyclotomic order {m}"));
        }
        let deg = cyclotomic_poly(m as u64).len() - 1;
        Ok(Self::reduce(m, coords, deg))
    }

    fn phi(m: u32) -> Vec<i64> {
        cyclotomic_poly(m as u64)
    }

    fn reduce(m: u32, mut c: Vec<i128>, deg: usize) -> Self {
        let phi = Self::phi(m);
        while c.len() > deg {
            let top = c.pop().unwrap();
            if top != 0 {
                let shift = c.len() - deg;
                // x^(shift+deg) = -(phi_0 x^shift + ... + phi_{deg-1} x^(shift+deg-1))
                for (j, &pj) in phi.iter().enumerate().take(deg) {
                    c[shift + j] -= top * pj as i128;
                }
            }
        }
        c.resize(deg, 0);
        CyclotomicInt { m, coords: c }
    }

    pub fn from_int(m: u32, v: i128) -> Self {
        Self::new(m, vec![v]).expect("supported order")
    }

    pub fn zero(m: u32) -> Self {
        Self::from_int(m, 0)
    }

    pub fn one(m: u32) -> Self {
        Self::from_int(m, 1)
    }

    /// `w_m^k` for any integer `k`.
    pub fn omega_pow(m: u32, k: i64) -> Self {
        let e = k.rem_euclid(m as i64) as usize;
        let mut c = vec![0i128; e + 1];
        c[e] = 1;
        Self::new(m, c).expect("supported order")
    }

    /// `i` inside `Z[w_4]` or `Z[w_12]`.
    pub fn sqrt_minus_one(m: u32) -> Result<Self> {
        match m {
            4 | 12 => Ok(Self::omega_pow(m, m as i64 / 4)),
            _ => invalid(format!("i is not in Z[w_{m}]")),
        }
    }

    /// `sqrt(-3) = 2*w_6 - 1` inside `Z[w_3]`, `Z[w_6]` or `Z[w_12]`.
    pub fn sqrt_minus_three(m: u32) -> Result<Self> {
        match m {
            3 | 6 | 12 => {
                // w_6 = -w_3^2
                let w6 = if m == 3 { -Self::omega_pow(3, 2) } else { Self::omega_pow(m, m as i64 / 6) };
                Ok(w6.scale(2) - Self::one(m))
            }
            _ => invalid(format!("sqrt(-3) is not in Z[w_{m}]")),
        }
    }

    /// `sqrt(3) = -i * sqrt(-3)` inside `Z[w_12]`.
    pub fn sqrt_three() -> Self {
        -(Self::sqrt_minus_one(12).unwrap() * Self::sqrt_minus_three(12).unwrap())
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn coords(&self) -> &[i128] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// The value as a rational integer, when it is one.
    pub fn as_integer(&self) -> Option<i128> {
        if self.coords.iter().skip(1).all(|&c| c == 0) {
            Some(self.coords[0])
        } else {
            None
        }
    }

    pub fn scale(&self, k: i128) -> Self {
        CyclotomicInt { m: self.m, coords: self.coords.iter().map(|c| c * k).collect() }
    }

    /// Image in `Z[w_big]` with `w_m = w_big^(big/m)`.
    pub fn embed(&self, big: u32) -> Result<Self> {
        if big % self.m != 0 {
            return invalid(format!("Z[w_{}] does not embed in Z[w_{big}]", self.m));
        }
        let step = (big / self.m) as usize;
        let mut c = vec![0i128; step * self.coords.len().max(1)];
        for (i, &v) in self.coords.iter().enumerate() {
            c[i * step] = v;
        }
        Self::new(big, c)
    }

    /// Complex conjugation `w -> w^-1`.
    pub fn conj(&self) -> Self {
        self.coords
            .iter()
            .enumerate()
            .fold(Self::zero(self.m), |acc, (k, &c)| acc + Self::omega_pow(self.m, -(k as i64)).scale(c))
    }

    /// Floating-point complex value under `w_m = exp(2 pi i / m)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let theta = 2.0 * std::f64::consts::PI / self.m as f64;
        self.coords.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, &c)| {
            let a = theta * k as f64;
            (re + c as f64 * a.cos(), im + c as f64 * a.sin())
        })
    }

    pub fn abs(&self) -> f64 {
        let (re, im) = self.to_complex();
        re.hypot(im)
    }

    /// `|z|^2 = z * conj(z)` as an exact integer. `None` when it is
    /// irrational, which happens only for order 12 (values in `Q(sqrt 3)`).
    pub fn norm_sq(&self) -> Option<i128> {
        (self.clone() * self.conj()).as_integer()
    }

    /// Image under `w_m -> root` in a p-adic ring.
    pub fn eval_at(&self, root: PadicElement) -> PadicElement {
        let ring = root.ring();
        let mut acc = ring.zero();
        let mut pw = ring.one();
        for &c in &self.coords {
            acc = acc + pw * ring.from_i64(reduce_big(c, ring.modulus()));
            pw = pw * root;
        }
        acc
    }
}

fn reduce_big(c: i128, m: u64) -> i64 {
    c.rem_euclid(m as i128) as i64
}

impl fmt::Display for CyclotomicInt {
    /// Exact string such as `3+2*w6+w6^2`; `0` for zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => format!("w{}", self.m),
                _ => format!("w{}^{}", self.m, k),
            };
            let t = if k == 0 {
                format!("{c}")
            } else if c == 1 {
                mono
            } else if c == -1 {
                format!("-{mono}")
            } else {
                format!("{c}*{mono}")
            };
            terms.push(t);
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut s = terms[0].clone();
        for t in &terms[1..] {
            if t.starts_with('-') {
                s.push_str(t);
            } else {
                s.push('+');
                s.push_str(t);
            }
        }
        write!(f, "{s}")
    }
}

impl Add for CyclotomicInt {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        assert_eq!(self.m, o.m, "cyclotomic order mismatch");
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect();
        CyclotomicInt { m: self.m, coords }
    }
}

impl Sub for CyclotomicInt {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for CyclotomicInt {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1)
    }
}

impl Mul for CyclotomicInt {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        assert_eq!(self.m, o.m, "cyclotomic order mismatch");
        let deg = self.coords.len();
        let mut c = vec![0i128; 2 * deg.max(1)];
        for (i, a) in self.coords.iter().enumerate() {
            for (j, b) in o.coords.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::reduce(self.m, c, deg)
    }
}

/// A polynomial in `T` with coefficients in `Z[w_m]`, low degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloPoly {
    m: u32,
    coeffs: Vec<CyclotomicInt>,
}

impl CycloPoly {
    pub fn new(m: u32, mut coeffs: Vec<CyclotomicInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(CyclotomicInt::zero(m));
        }
        CycloPoly { m, coeffs }
    }

    pub fn from_ints(m: u32, c: &[i128]) -> Self {
        Self::new(m, c.iter().map(|&v| CyclotomicInt::from_int(m, v)).collect())
    }

    pub fn one(m: u32) -> Self {
        Self::from_ints(m, &[1])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CyclotomicInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> CyclotomicInt {
        self.coeffs.get(i).cloned().unwrap_or_else(|| CyclotomicInt::zero(self.m))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.m, self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// Integer coefficient list, if every coefficient is rational.
    pub fn to_integers(&self) -> Option<Vec<i128>> {
        self.coeffs.iter().map(|c| c.as_integer()).collect()
    }

    /// Substitute `T -> T^r`.
    pub fn compose_power(&self, r: usize) -> Self {
        let mut c = vec![CyclotomicInt::zero(self.m); self.degree() * r + 1];
        for (i, v) in self.coeffs.iter().enumerate() {
            c[i * r] = v.clone();
        }
        Self::new(self.m, c)
    }
}

impl Mul for &CycloPoly {
    type Output = CycloPoly;
    fn mul(self, o: &CycloPoly) -> CycloPoly {
        assert_eq!(self.m, o.m);
        let mut c = vec![CyclotomicInt::zero(self.m); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        CycloPoly::new(self.m, c)
    }
}

impl fmt::Display for CycloPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string();
            let mono = match i {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{i}"),
            };
            let term = if i == 0 {
                cs
            } else if cs == "1" {
                mono
            } else if cs == "-1" {
                format!("-{mono}")
            } else if c.as_integer().is_some() {
                format!("{cs}{mono}")
            } else {
                format!("({cs}){mono}")
            };
            parts.push(term);
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut s = parts[0].clone();
        for t in &parts[1..] {
            if t.starts_with('-') {
                s.push_str(t);
            } else {
                s.push('+');
                s.push_str(t);
            }
        }
        write!(f, "{s}")
    }
}
