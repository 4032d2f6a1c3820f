//! Truncated power series over a pluggable exact coefficient ring.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::padic::{PadicElement, PadicRing};
use crate::ring::rational::{format_rational, parse_rational};
use crate::ring::{inv_mod, mul_mod, reduce_i64, BigRational};

/// Convolutions longer than this run in parallel.
const PAR_THRESHOLD: usize = 384;

/// Exact coefficient ring for [`TruncatedSeries`].
pub trait CoeffRing: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    /// Short tag, e.g. `QQ` or `Zp:5,3`.
    fn tag(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_rational(&self, v: &BigRational) -> Result<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    /// `sum_i a[i] * b[m - i]` over the overlapping range.
    fn conv_term(&self, a: &[Self::Elem], b: &[Self::Elem], m: usize) -> Self::Elem {
        let lo = m.saturating_sub(b.len().saturating_sub(1));
        let hi = m.min(a.len().saturating_sub(1));
        let mut acc = self.zero();
        if a.is_empty() || b.is_empty() || lo > hi {
            return acc;
        }
        for i in lo..=hi {
            acc = self.add(&acc, &self.mul(&a[i], &b[m - i]));
        }
        acc
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl CoeffRing for Rationals {
    type Elem = BigRational;
    fn tag(&self) -> String {
        "QQ".into()
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(&self, v: &BigRational) -> Result<BigRational> {
        Ok(v.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn format(&self, a: &BigRational) -> String {
        format_rational(a)
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        parse_rational(s)
    }
}

/// `Z/p^k` with machine-word residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zmod {
    p: u64,
    k: u32,
    m: u64,
}

impl Zmod {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        let r = PadicRing::new(p, k)?;
        Ok(Zmod { p, k, m: r.modulus() })
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn modulus(&self) -> u64 {
        self.m
    }
    pub fn padic(&self) -> PadicRing {
        PadicRing::new(self.p, self.k).expect("validated on construction")
    }
}

impl CoeffRing for Zmod {
    type Elem = u64;
    fn tag(&self) -> String {
        format!("Zp:{},{}", self.p, self.k)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.m
    }
    fn from_i64(&self, v: i64) -> u64 {
        reduce_i64(v, self.m)
    }
    fn from_rational(&self, v: &BigRational) -> Result<u64> {
        let m = BigInt::from(self.m);
        let num = v.numer().mod_floor(&m).to_u64().unwrap();
        let den = v.denom().mod_floor(&m).to_u64().unwrap();
        let di = inv_mod(den, self.m).ok_or_else(|| Error::NotInvertible {
            ring: self.tag(),
            what: format!("denominator {}", v.denom()),
        })?;
        Ok(mul_mod(num, di, self.m))
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.m - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.m)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        inv_mod(*a, self.m)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64> {
        let v: i64 = s.trim().parse().map_err(|_| Error::InvalidInput(format!("not a residue: {s:?}")))?;
        Ok(self.from_i64(v))
    }

    fn conv_term(&self, a: &[u64], b: &[u64], m: usize) -> u64 {
        if a.is_empty() || b.is_empty() {
            return 0;
        }
        let lo = m.saturating_sub(b.len() - 1);
        let hi = m.min(a.len() - 1);
        if lo > hi {
            return 0;
        }
        let mm = self.m as u128;
        let limit = u128::MAX - mm * mm;
        let mut acc: u128 = 0;
        for i in lo..=hi {
            acc += a[i] as u128 * b[m - i] as u128;
            if acc >= limit {
                acc %= mm;
            }
        }
        (acc % mm) as u64
    }
}

/// `Z/p^k`, or its unramified quadratic extension, with [`PadicElement`]
/// coefficients.
impl CoeffRing for PadicRing {
    type Elem = PadicElement;
    fn tag(&self) -> String {
        match self.ext() {
            None => format!("Zp:{},{}", self.p(), self.k()),
            Some(d) => format!("Zp:{},{}[{}]", self.p(), self.k(), crate::ring::balanced(d, self.modulus())),
        }
    }
    fn zero(&self) -> PadicElement {
        PadicRing::zero(self)
    }
    fn one(&self) -> PadicElement {
        PadicRing::one(self)
    }
    fn from_i64(&self, v: i64) -> PadicElement {
        PadicRing::from_i64(self, v)
    }
    fn from_rational(&self, v: &BigRational) -> Result<PadicElement> {
        let z = Zmod::new(self.p(), self.k())?;
        Ok(self.element(z.from_rational(v)?))
    }
    fn add(&self, a: &PadicElement, b: &PadicElement) -> PadicElement {
        *a + *b
    }
    fn sub(&self, a: &PadicElement, b: &PadicElement) -> PadicElement {
        *a - *b
    }
    fn neg(&self, a: &PadicElement) -> PadicElement {
        -*a
    }
    fn mul(&self, a: &PadicElement, b: &PadicElement) -> PadicElement {
        *a * *b
    }
    fn inv(&self, a: &PadicElement) -> Option<PadicElement> {
        a.inv()
    }
    fn is_zero(&self, a: &PadicElement) -> bool {
        a.is_zero()
    }
    fn format(&self, a: &PadicElement) -> String {
        let (x, y) = a.coords();
        if self.ext().is_some() {
            format!("{x}+{y}*s")
        } else {
            x.to_string()
        }
    }
    fn parse(&self, s: &str) -> Result<PadicElement> {
        let bad = || Error::InvalidInput(format!("not an element: {s:?}"));
        match s.split_once('+') {
            Some((x, y)) => {
                let x: u64 = x.trim().parse().map_err(|_| bad())?;
                let y: u64 = y.trim().trim_end_matches("*s").parse().map_err(|_| bad())?;
                Ok(self.pair(x, y))
            }
            None => Ok(self.from_i64(s.trim().parse().map_err(|_| bad())?)),
        }
    }
}

/// `sum_{i >= start} c_i w^i + O(w^precision)` where `w = q^(1/var_den)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<R: CoeffRing> {
    ring: R,
    start: usize,
    coeffs: Vec<R::Elem>,
    prec: usize,
    var_den: u64,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    ring: String,
    start: usize,
    precision: usize,
    variable: String,
    coefficients: Vec<String>,
}

impl<R: CoeffRing> TruncatedSeries<R> {
    /// Series from the dense coefficient list `c_0, c_1, ...` up to `prec`.
    pub fn from_coeffs(ring: R, coeffs: Vec<R::Elem>, prec: usize, var_den: u64) -> Self {
        let mut c = coeffs;
        c.resize(prec, ring.zero());
        c.truncate(prec);
        let first = c.iter().position(|x| !ring.is_zero(x)).unwrap_or(prec);
        let coeffs = c.split_off(first);
        TruncatedSeries { ring, start: first, coeffs, prec, var_den }
    }

    pub fn from_i64s(ring: R, coeffs: &[i64], prec: usize, var_den: u64) -> Self {
        let c = coeffs.iter().map(|&v| ring.from_i64(v)).collect();
        Self::from_coeffs(ring, c, prec, var_den)
    }

    pub fn zero(ring: R, prec: usize, var_den: u64) -> Self {
        Self::from_coeffs(ring, Vec::new(), prec, var_den)
    }

    pub fn one(ring: R, prec: usize, var_den: u64) -> Self {
        let one = ring.one();
        Self::from_coeffs(ring, vec![one], prec, var_den)
    }

    /// The monomial `w^e`.
    pub fn monomial(ring: R, e: usize, prec: usize, var_den: u64) -> Self {
        let mut c = vec![ring.zero(); e + 1];
        c[e] = ring.one();
        Self::from_coeffs(ring, c, prec, var_den)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn precision(&self) -> usize {
        self.prec
    }
    /// `w = q^(1/var_den)`.
    pub fn var_den(&self) -> u64 {
        self.var_den
    }

    /// Index of the first nonzero coefficient, or the precision for zero.
    pub fn valuation(&self) -> usize {
        self.start
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> R::Elem {
        if i < self.start || i >= self.prec {
            self.ring.zero()
        } else {
            self.coeffs[i - self.start].clone()
        }
    }

    /// Leading coefficient (zero for the zero series).
    pub fn leading(&self) -> R::Elem {
        self.coeffs.first().cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// Dense coefficients `c_0 .. c_{prec-1}`.
    pub fn dense(&self) -> Vec<R::Elem> {
        let mut v = vec![self.ring.zero(); self.start];
        v.extend(self.coeffs.iter().cloned());
        v
    }

    fn rebuild(&self, dense: Vec<R::Elem>, prec: usize) -> Self {
        Self::from_coeffs(self.ring.clone(), dense, prec, self.var_den)
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.ring != o.ring {
            return Err(Error::RingMismatch { left: self.ring.tag(), right: o.ring.tag() });
        }
        if self.var_den != o.var_den {
            return Err(Error::RingMismatch {
                left: format!("q^(1/{})", self.var_den),
                right: format!("q^(1/{})", o.var_den),
            });
        }
        Ok(())
    }

    pub fn truncate(&self, prec: usize) -> Self {
        self.rebuild(self.dense(), prec.min(self.prec))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let prec = self.prec.min(o.prec);
        let d = (0..prec).map(|i| self.ring.add(&self.coeff(i), &o.coeff(i))).collect();
        Ok(self.rebuild(d, prec))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let prec = self.prec.min(o.prec);
        let d = (0..prec).map(|i| self.ring.sub(&self.coeff(i), &o.coeff(i))).collect();
        Ok(self.rebuild(d, prec))
    }

    pub fn neg(&self) -> Self {
        let d = self.dense().iter().map(|c| self.ring.neg(c)).collect();
        self.rebuild(d, self.prec)
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let d = self.dense().iter().map(|x| self.ring.mul(x, c)).collect();
        self.rebuild(d, self.prec)
    }

    /// Multiplication by `w^a` (precision grows by `a`).
    pub fn shift(&self, a: usize) -> Self {
        let mut d = vec![self.ring.zero(); a];
        d.extend(self.dense());
        self.rebuild(d, self.prec + a)
    }

    /// Division by `w^a`; fails unless the valuation is at least `a`.
    pub fn unshift(&self, a: usize) -> Result<Self> {
        if !self.is_zero() && self.start < a {
            return Err(Error::Structure(format!("valuation {} < {a}", self.start)));
        }
        if self.prec < a {
            return Err(Error::PrecisionShortfall { needed: a, have: self.prec });
        }
        let d = self.dense().split_off(a.min(self.start.max(a)));
        Ok(self.rebuild(d, self.prec - a))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        // Relative precision: errors in either factor enter shifted by the other's valuation.
        let prec = (self.prec + o.start).min(o.prec + self.start);
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(self.ring.clone(), prec, self.var_den));
        }
        let start = self.start + o.start;
        let len = prec.saturating_sub(start);
        let (a, b) = (&self.coeffs, &o.coeffs);
        let ring = &self.ring;
        let body: Vec<R::Elem> = if len > PAR_THRESHOLD {
            (0..len).into_par_iter().map(|m| ring.conv_term(a, b, m)).collect()
        } else {
            (0..len).map(|m| ring.conv_term(a, b, m)).collect()
        };
        let mut d = vec![ring.zero(); start];
        d.extend(body);
        Ok(self.rebuild(d, prec))
    }

    pub fn square(&self) -> Self {
        self.mul(self).expect("same ring")
    }

    pub fn pow(&self, e: u64) -> Result<Self> {
        let mut acc = Self::one(self.ring.clone(), self.prec, self.var_den);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        Ok(acc)
    }

    /// Inverse of a series with invertible constant term (Newton iteration).
    pub fn inv(&self) -> Result<Self> {
        if self.start != 0 {
            return Err(Error::NotInvertible { ring: self.ring.tag(), what: "series with zero constant term".into() });
        }
        let c0 = self.ring.inv(&self.coeffs[0]).ok_or_else(|| Error::NotInvertible {
            ring: self.ring.tag(),
            what: format!("constant term {}", self.ring.format(&self.coeffs[0])),
        })?;
        let mut y = self.rebuild(vec![c0], 1.min(self.prec));
        let mut cur = 1;
        while cur < self.prec {
            cur = (2 * cur).min(self.prec);
            let u = self.truncate(cur);
            let y_ext = self.rebuild(y.dense(), cur);
            // y <- y (2 - u y)
            let uy = u.mul(&y_ext)?;
            let two = Self::from_coeffs(self.ring.clone(), vec![self.ring.from_i64(2)], cur, self.var_den);
            y = y_ext.mul(&two.sub(&uy)?)?;
        }
        Ok(y)
    }

    /// `self / o`; the divisor may have positive valuation when the quotient
    /// stays a power series.
    pub fn div(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        if o.is_zero() {
            return Err(Error::NotInvertible { ring: self.ring.tag(), what: "zero series".into() });
        }
        let v = o.start;
        let lead = o.leading();
        let lead_inv = self.ring.inv(&lead).ok_or_else(|| Error::NotInvertible {
            ring: self.ring.tag(),
            what: format!("leading coefficient {}", self.ring.format(&lead)),
        })?;
        let unit = o.unshift(v)?.scale(&lead_inv);
        let num = self.unshift(v)?;
        Ok(num.mul(&unit.inv()?)?.scale(&lead_inv))
    }

    /// `n`-th root of `w^(a n) u` with `u(0) = 1`, returned as `w^a u^(1/n)`.
    pub fn nth_root(&self, n: u64) -> Result<Self> {
        let one = self.ring.one();
        self.nth_root_with(n, &one)
    }

    /// As [`Self::nth_root`] with an explicit root `r` of the leading
    /// coefficient (`r^n` must equal it).
    pub fn nth_root_with(&self, n: u64, lead_root: &R::Elem) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("root index must be positive".into()));
        }
        let n_inv = self.ring.inv(&self.ring.from_i64(n as i64)).ok_or_else(|| Error::NotInvertible {
            ring: self.ring.tag(),
            what: format!("root index {n}"),
        })?;
        if self.is_zero() {
            return Err(Error::InvalidInput("n-th root of the zero series".into()));
        }
        if self.start % n as usize != 0 {
            return Err(Error::ValuationNotDivisible { valuation: self.start, n });
        }
        let lead = self.leading();
        let mut check = self.ring.one();
        for _ in 0..n {
            check = self.ring.mul(&check, lead_root);
        }
        if check != lead {
            return Err(Error::InvalidInput(format!(
                "leading coefficient {} is not the {n}-th power of the supplied root",
                self.ring.format(&lead)
            )));
        }
        let a = self.start / n as usize;
        let lead_inv = self.ring.inv(&lead).ok_or_else(|| Error::NotInvertible {
            ring: self.ring.tag(),
            what: "leading coefficient".into(),
        })?;
        let u = self.unshift(self.start)?.scale(&lead_inv);
        let prec = u.prec;
        // y = u^(-1/n) by y <- y + y (1 - u y^n) / n, then u^(1/n) = u y^(n-1).
        let mut y = Self::one(self.ring.clone(), 1.min(prec), self.var_den);
        let mut cur = 1;
        while cur < prec {
            cur = (2 * cur).min(prec);
            let uc = u.truncate(cur);
            let yc = self.rebuild(y.dense(), cur);
            let e = Self::one(self.ring.clone(), cur, self.var_den).sub(&uc.mul(&yc.pow(n)?)?)?;
            y = yc.add(&yc.mul(&e)?.scale(&n_inv))?;
        }
        let root = if prec == 0 { u.clone() } else { u.mul(&y.pow(n - 1)?)? };
        Ok(root.scale(lead_root).shift(a))
    }

    /// `f(w) -> f(w^k)`; the variable becomes `q^(1/(k var_den))`.
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        let mut d = vec![self.ring.zero(); self.prec * k];
        for (i, c) in self.dense().into_iter().enumerate() {
            d[i * k] = c;
        }
        // The first unknown term is w^(k prec).
        let prec = self.prec * k;
        Self::from_coeffs(self.ring.clone(), d, prec, self.var_den * k as u64)
    }

    /// Residues mod `n` of the exponents carrying nonzero coefficients.
    pub fn support_classes(&self, n: u64) -> std::collections::BTreeSet<u64> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.ring.is_zero(c))
            .map(|(i, _)| (self.start + i) as u64 % n)
            .collect()
    }

    /// Coefficientwise image in another ring.
    pub fn map_ring<S: CoeffRing>(&self, target: &S, f: impl Fn(&R::Elem) -> Result<S::Elem>) -> Result<TruncatedSeries<S>> {
        let d = self.dense().iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(TruncatedSeries::from_coeffs(target.clone(), d, self.prec, self.var_den))
    }

    /// Same series with a different variable label (e.g. after reading a
    /// `q^(1/5)` series as a series in `w^n`).
    pub fn with_var_den(mut self, var_den: u64) -> Self {
        self.var_den = var_den;
        self
    }

    pub fn to_json(&self) -> String {
        let j = SeriesJson {
            ring: self.ring.tag(),
            start: self.start,
            precision: self.prec,
            variable: format!("q^(1/{})", self.var_den),
            coefficients: self.coeffs.iter().map(|c| self.ring.format(c)).collect(),
        };
        serde_json::to_string(&j).expect("plain data")
    }

    pub fn from_json(ring: R, s: &str) -> Result<Self> {
        let j: SeriesJson = serde_json::from_str(s)?;
        if j.ring != ring.tag() {
            return Err(Error::RingMismatch { left: j.ring, right: ring.tag() });
        }
        let var_den = j
            .variable
            .strip_prefix("q^(1/")
            .and_then(|s| s.strip_suffix(')'))
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::InvalidInput(format!("bad variable {:?}", j.variable)))?;
        let mut d = vec![ring.zero(); j.start];
        for c in &j.coefficients {
            d.push(ring.parse(c)?);
        }
        Ok(Self::from_coeffs(ring, d, j.precision, var_den))
    }
}

impl TruncatedSeries<Rationals> {
    /// Reduction into `Z/p^k`.
    pub fn reduce(&self, target: &Zmod) -> Result<TruncatedSeries<Zmod>> {
        self.map_ring(target, |c| target.from_rational(c))
    }

    /// Whether every coefficient has denominator dividing a power of `n`.
    pub fn denominators_divide_power_of(&self, n: u64) -> bool {
        let factors = crate::ring::prime_factors(n);
        self.coeffs.iter().all(|c| {
            let mut d = c.denom().clone();
            for &p in &factors {
                let bp = BigInt::from(p);
                while (&d % &bp).is_zero() {
                    d /= &bp;
                }
            }
            d.is_one()
        })
    }

    /// Whether all coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Integer coefficients as `i64`, when integral and small.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.dense()
            .iter()
            .map(|c| if c.is_integer() && c.numer().abs() < BigInt::from(i64::MAX) { c.numer().to_i64() } else { None })
            .collect()
    }
}

/// `prod_{m >= 1} (1 - w^(scale m))^(e(m))` to precision `prec`.
pub fn eta_product<R: CoeffRing>(
    ring: &R,
    exponent: impl Fn(u64) -> i64,
    scale: usize,
    prec: usize,
    var_den: u64,
) -> Result<TruncatedSeries<R>> {
    if prec == 0 {
        return Err(Error::InvalidInput("precision must be positive".into()));
    }
    if scale == 0 {
        return Err(Error::InvalidInput("scale must be positive".into()));
    }
    let mut c = vec![ring.zero(); prec];
    c[0] = ring.one();
    let mut m = 1u64;
    while (m as usize) * scale < prec {
        let s = m as usize * scale;
        let e = exponent(m);
        for _ in 0..e.unsigned_abs() {
            if e > 0 {
                for i in (s..prec).rev() {
                    c[i] = ring.sub(&c[i], &c[i - s]);
                }
            } else {
                for i in s..prec {
                    c[i] = ring.add(&c[i], &c[i - s]);
                }
            }
        }
        m += 1;
    }
    Ok(TruncatedSeries::from_coeffs(ring.clone(), c, prec, var_den))
}
