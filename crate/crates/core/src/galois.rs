//! Gaussian integers, discriminants of small polynomials over `Z[i]`, and
//! factorization patterns modulo Gaussian primes.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::{inv_mod, is_prime, reduce_i64, FiniteField, Fq};

/// `re + im i` with arbitrary-precision parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInt { re: re.into(), im: im.into() }
    }

    pub fn zero() -> Self {
        Self::new(0, 0)
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn i() -> Self {
        Self::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianInt { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `self / d` when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &GaussianInt) -> Option<GaussianInt> {
        let n = d.norm();
        if n.is_zero() {
            return None;
        }
        let num = self * &d.conj();
        let (qr, rr) = num.re.div_rem(&n);
        let (qi, ri) = num.im.div_rem(&n);
        (rr.is_zero() && ri.is_zero()).then(|| GaussianInt { re: qr, im: qi })
    }

    /// The associate with `re > 0, im >= 0` (zero stays zero).
    pub fn normalized(&self) -> Self {
        let mut z = self.clone();
        for _ in 0..4 {
            if z.re.is_positive() && !z.im.is_negative() {
                return z;
            }
            z = &z * &Self::i();
        }
        z
    }
}

impl From<i64> for GaussianInt {
    fn from(v: i64) -> Self {
        Self::new(v, 0)
    }
}

impl fmt::Display for GaussianInt {
    /// `3+2i`, `-i`, `7`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im = |v: &BigInt| -> String {
            if v.is_one() {
                "i".into()
            } else if *v == -BigInt::one() {
                "-i".into()
            } else {
                format!("{v}i")
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}", im(&self.im)),
            (false, false) if self.im.is_negative() => write!(f, "{}{}", self.re, im(&self.im)),
            (false, false) => write!(f, "{}+{}", self.re, im(&self.im)),
        }
    }
}

impl Add for &GaussianInt {
    type Output = GaussianInt;
    fn add(self, o: &GaussianInt) -> GaussianInt {
        GaussianInt { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &GaussianInt {
    type Output = GaussianInt;
    fn sub(self, o: &GaussianInt) -> GaussianInt {
        GaussianInt { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &GaussianInt {
    type Output = GaussianInt;
    fn mul(self, o: &GaussianInt) -> GaussianInt {
        GaussianInt { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl Neg for &GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt { re: -&self.re, im: -&self.im }
    }
}

/// Polynomial over `Z[i]`, coefficients low degree first.
pub type GaussPoly = Vec<GaussianInt>;

/// `x^4 + c3 x^3 + c2 x^2 + c1 x + c0`.
pub fn monic_quartic(c3: GaussianInt, c2: GaussianInt, c1: GaussianInt, c0: GaussianInt) -> GaussPoly {
    vec![c0, c1, c2, c3, GaussianInt::one()]
}

fn derivative(f: &[GaussianInt]) -> GaussPoly {
    f.iter().enumerate().skip(1).map(|(k, c)| c * &GaussianInt::from(k as i64)).collect()
}

/// Sylvester matrix of `f` and `g` (degrees `m`, `n`), rows of length `m + n`.
fn sylvester<T: Clone>(f: &[T], g: &[T], zero: T) -> Vec<Vec<T>> {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![zero.clone(); size];
        for (k, c) in f.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![zero.clone(); size];
        for (k, c) in g.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Fraction-free (Bareiss) determinant over `Z[i]`.
fn det_bareiss(mut a: Vec<Vec<GaussianInt>>) -> GaussianInt {
    let n = a.len();
    if n == 0 {
        return GaussianInt::one();
    }
    let mut sign = false;
    let mut prev = GaussianInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return GaussianInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -&d
    } else {
        d
    }
}

/// `(-1)^(n(n-1)/2) Res(f, f')` for monic `f` of degree `n >= 1`.
pub fn discriminant(f: &[GaussianInt]) -> Result<GaussianInt> {
    let n = f.len().checked_sub(1).filter(|&n| n >= 1).ok_or_else(|| Error::InvalidInput("constant polynomial".into()))?;
    if f[n] != GaussianInt::one() {
        return Err(Error::InvalidInput("polynomial must be monic".into()));
    }
    if n == 1 {
        return Ok(GaussianInt::one());
    }
    let res = det_bareiss(sylvester(f, &derivative(f), GaussianInt::zero()));
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -&res } else { res })
}

pub fn quartic_disc(c3: &GaussianInt, c2: &GaussianInt, c1: &GaussianInt, c0: &GaussianInt) -> GaussianInt {
    discriminant(&monic_quartic(c3.clone(), c2.clone(), c1.clone(), c0.clone())).expect("monic quartic")
}

/// The residue field of a Gaussian prime `v` with the image of `i`.
#[derive(Clone, Debug)]
pub struct ResidueField {
    pub v: GaussianInt,
    pub p: u64,
    /// Degree over `F_p` (1 for split `p`, 2 for inert `p`).
    pub degree: u32,
    /// `F_{N(v)^2}`, which contains the residue field.
    pub big: FiniteField,
    pub i_image: Fq,
}

impl ResidueField {
    pub fn new(v: &GaussianInt) -> Result<Self> {
        let v = v.normalized();
        let norm = v.norm().to_u64().ok_or_else(|| Error::InvalidInput(format!("{v} is too large")))?;
        let (p, degree) = if is_prime(norm) && norm % 4 == 1 {
            (norm, 1)
        } else if v.im.is_zero() && v.re.to_u64().is_some_and(|q| is_prime(q) && q % 4 == 3) {
            (v.re.to_u64().unwrap(), 2)
        } else {
            return Err(Error::InvalidInput(format!("{v} is not an odd Gaussian prime")));
        };
        let big = FiniteField::new(p, 2 * degree)?;
        let i_image = if degree == 1 {
            // a + b i = 0 mod v  =>  i = -a / b
            let a = v.re.to_i64().unwrap();
            let b = v.im.to_i64().unwrap();
            let bi = inv_mod(reduce_i64(b, p), p).expect("b is a unit mod p");
            big.scalar(crate::ring::mul_mod(reduce_i64(-a, p), bi, p))
        } else {
            let minus_one = big.neg(big.one());
            big.iter().find(|&x| big.mul(x, x) == minus_one).expect("x^2 + 1 splits in F_q^4")
        };
        Ok(ResidueField { v, p, degree, big, i_image })
    }

    /// `|O / v|`.
    pub fn size(&self) -> u64 {
        self.p.pow(self.degree)
    }

    pub fn reduce(&self, z: &GaussianInt) -> Fq {
        let f = &self.big;
        let m = BigInt::from(self.p);
        let re = z.re.mod_floor(&m).to_u64().unwrap();
        let im = z.im.mod_floor(&m).to_u64().unwrap();
        f.add(f.scalar(re), f.mul(f.scalar(im), self.i_image))
    }

    fn in_residue_field(&self, x: Fq) -> bool {
        self.big.pow(x, self.size()) == x
    }
}

/// Degrees of the irreducible factors of `f mod v`, largest first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationType {
    pub poly: String,
    pub v: String,
    pub pattern: Vec<u32>,
    pub squarefree: bool,
    /// `lcm` of the pattern; `None` when the reduction is not squarefree.
    pub frobenius_order: Option<u32>,
}

/// Factor pattern of a monic `f` (degree <= 4) modulo `v`, from the number
/// of roots over the residue field and its quadratic extension.
pub fn factor_type(f: &[GaussianInt], v: &GaussianInt) -> Result<FactorizationType> {
    let deg = f.len().saturating_sub(1);
    if deg == 0 || deg > 4 || f[deg] != GaussianInt::one() {
        return Err(Error::InvalidInput(format!("need a monic polynomial of degree 1..=4, got degree {deg}")));
    }
    let rf = ResidueField::new(v)?;
    let disc = discriminant(f)?;
    let squarefree = disc.div_exact(&rf.v).is_none();
    let big = &rf.big;
    let coeffs: Vec<Fq> = f.iter().map(|c| rf.reduce(c)).collect();
    let eval = |x: Fq| coeffs.iter().rev().fold(big.zero(), |acc, &c| big.add(big.mul(acc, x), c));
    let roots: Vec<Fq> = big.iter().filter(|&x| eval(x) == big.zero()).collect();
    let n1 = roots.iter().filter(|&&x| rf.in_residue_field(x)).count() as u32;
    let n2 = roots.len() as u32;
    let quads = (n2 - n1) / 2;
    let rest = deg as u32 - n1 - 2 * quads;
    let mut pattern = Vec::new();
    match rest {
        0 => {}
        3 | 4 => pattern.push(rest),
        _ if !squarefree => pattern.push(rest),
        _ => return Err(Error::Structure(format!("inconsistent root counts {n1}, {n2} for degree {deg}"))),
    }
    pattern.extend(std::iter::repeat_n(2, quads as usize));
    pattern.extend(std::iter::repeat_n(1, n1 as usize));
    let frobenius_order = squarefree.then(|| pattern.iter().fold(1u32, |acc, &d| num_integer::lcm(acc, d)));
    Ok(FactorizationType { poly: format_poly(f), v: rf.v.to_string(), pattern, squarefree, frobenius_order })
}

pub fn format_poly(f: &[GaussianInt]) -> String {
    let mut out = String::new();
    for (k, c) in f.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{k}"),
        };
        let cs = c.to_string();
        let term = if k > 0 && cs == "1" {
            mono
        } else if k > 0 && cs == "-1" {
            format!("-{mono}")
        } else if k > 0 && !c.re.is_zero() && !c.im.is_zero() {
            format!("({cs}){mono}")
        } else {
            format!("{cs}{mono}")
        };
        if !out.is_empty() && !term.starts_with('-') {
            out.push('+');
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// A row of the quartic table: `disc = sign * (3i) (1+i)^a 3^b`.
#[derive(Clone, Debug)]
pub struct QuarticRow {
    pub equation: &'static str,
    pub coeffs: [(i64, i64); 4],
    pub disc_text: &'static str,
    pub sign: i64,
    pub two_exp: u32,
    pub three_exp: u32,
    pub v: (i64, i64),
}

/// Coefficients `c0, c1, c2, c3` as `(re, im)`.
pub const QUARTIC_TABLE: [QuarticRow; 3] = [
    QuarticRow {
        equation: "x^4-4ix-3=0",
        coeffs: [(-3, 0), (0, -4), (0, 0), (0, 0)],
        disc_text: "(3i)(1+i)^{18}(3)^2",
        sign: 1,
        two_exp: 18,
        three_exp: 2,
        v: (3, 2),
    },
    QuarticRow {
        equation: "x^4-8ix+6=0",
        coeffs: [(6, 0), (0, -8), (0, 0), (0, 0)],
        disc_text: "-(3i)(1+i)^{22}(3)^2",
        sign: -1,
        two_exp: 22,
        three_exp: 2,
        v: (3, 2),
    },
    QuarticRow {
        equation: "x^4+12x^2-16ix+12=0",
        coeffs: [(12, 0), (0, -16), (12, 0), (0, 0)],
        disc_text: "(3i)(1+i)^{34}(3)^2",
        sign: 1,
        two_exp: 34,
        three_exp: 2,
        v: (6, 1),
    },
];

impl QuarticRow {
    pub fn poly(&self) -> GaussPoly {
        let mut f: GaussPoly = self.coeffs.iter().map(|&(a, b)| GaussianInt::new(a, b)).collect();
        f.push(GaussianInt::one());
        f
    }

    /// `sign (3i) (1+i)^a 3^b`.
    pub fn stated_disc(&self) -> GaussianInt {
        let unit = GaussianInt::new(0, 3 * self.sign);
        let two = GaussianInt::new(1, 1).pow(self.two_exp);
        let three = GaussianInt::from(3).pow(self.three_exp);
        &(&unit * &two) * &three
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QuarticTableRow {
    pub equation: String,
    pub discriminant: String,
    pub stated: String,
    pub disc_ok: bool,
    pub v: String,
    pub factorization: FactorizationType,
    pub order_ok: bool,
}

/// A cubic factorization claim: `f` irreducible (or not) modulo `v`.
#[derive(Clone, Debug, Serialize)]
pub struct CubicClaim {
    pub poly: String,
    pub v: String,
    pub irreducible_expected: bool,
    pub factorization: FactorizationType,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuarticTableReport {
    pub rows: Vec<QuarticTableRow>,
    pub cubic: Vec<CubicClaim>,
    /// `disc(x^3 - 3x - 2i)`, which should be `(3i)(1+i)^6 3^2`.
    pub cubic_disc: String,
    pub cubic_disc_ok: bool,
    pub passed: bool,
}

pub fn verify_rows(rows: &[QuarticRow]) -> Result<Vec<QuarticTableRow>> {
    rows.iter()
        .map(|row| {
            let f = row.poly();
            let d = discriminant(&f)?;
            let stated = row.stated_disc();
            let v = GaussianInt::new(row.v.0, row.v.1);
            let fac = factor_type(&f, &v)?;
            Ok(QuarticTableRow {
                equation: row.equation.to_string(),
                discriminant: d.to_string(),
                stated: row.disc_text.to_string(),
                disc_ok: d == stated,
                v: v.to_string(),
                order_ok: fac.frobenius_order == Some(4),
                factorization: fac,
            })
        })
        .collect()
}

/// `x^3 - 3x - 2i`.
pub fn reference_cubic() -> GaussPoly {
    vec![GaussianInt::new(0, -2), GaussianInt::from(-3), GaussianInt::zero(), GaussianInt::one()]
}

pub fn verify_quartic_table() -> Result<QuarticTableReport> {
    verify_quartic_table_with(&QUARTIC_TABLE)
}

pub fn verify_quartic_table_with(rows: &[QuarticRow]) -> Result<QuarticTableReport> {
    let rows = verify_rows(rows)?;
    let f = reference_cubic();
    let mut cubic = Vec::new();
    for (v, irreducible_expected) in [((3, 2), false), ((6, 1), false), ((7, 2), true)] {
        let fac = factor_type(&f, &GaussianInt::new(v.0, v.1))?;
        let ok = fac.squarefree && (fac.pattern == vec![3]) == irreducible_expected;
        cubic.push(CubicClaim { poly: fac.poly.clone(), v: fac.v.clone(), irreducible_expected, factorization: fac, ok });
    }
    let cd = discriminant(&f)?;
    let stated = &(&GaussianInt::new(0, 3) * &GaussianInt::new(1, 1).pow(6)) * &GaussianInt::from(9);
    let cubic_disc_ok = cd == stated;
    let passed = rows.iter().all(|r| r.disc_ok && r.order_ok) && cubic.iter().all(|c| c.ok) && cubic_disc_ok;
    Ok(QuarticTableReport { rows, cubic, cubic_disc: cd.to_string(), cubic_disc_ok, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_examples() {
        let z = GaussianInt::zero;
        assert_eq!(quartic_disc(&z(), &z(), &GaussianInt::new(0, -4), &GaussianInt::from(-3)), GaussianInt::from(-13824));
        assert_eq!(quartic_disc(&z(), &z(), &GaussianInt::new(0, -8), &GaussianInt::from(6)), GaussianInt::from(-55296));
        assert_eq!(quartic_disc(&z(), &z(), &z(), &z()), z());
        // (1+i)^18 = 512i
        assert_eq!(GaussianInt::new(1, 1).pow(18), GaussianInt::new(0, 512));
    }

    #[test]
    fn residue_maps() {
        for (v, p, i) in [((3, 2), 13, 5), ((6, 1), 37, 31), ((7, 2), 53, 23)] {
            let rf = ResidueField::new(&GaussianInt::new(v.0, v.1)).unwrap();
            assert_eq!(rf.p, p);
            assert_eq!(rf.i_image, rf.big.scalar(i));
        }
        assert!(ResidueField::new(&GaussianInt::new(1, 1)).is_err());
        assert_eq!(ResidueField::new(&GaussianInt::from(7)).unwrap().size(), 49);
    }

    #[test]
    fn cubic_claims() {
        let f = reference_cubic();
        assert_eq!(factor_type(&f, &GaussianInt::new(7, 2)).unwrap().frobenius_order, Some(3));
        assert_ne!(factor_type(&f, &GaussianInt::new(3, 2)).unwrap().pattern, vec![3]);
        assert_ne!(factor_type(&f, &GaussianInt::new(6, 1)).unwrap().pattern, vec![3]);
        let g = vec![GaussianInt::one(), GaussianInt::from(-3), GaussianInt::zero(), GaussianInt::one()];
        assert_eq!(factor_type(&g, &GaussianInt::new(3, 2)).unwrap().pattern, vec![3]);
    }

    #[test]
    fn table_and_tamper() {
        let rep = verify_quartic_table().unwrap();
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep.rows[2].discriminant, "-3538944");
        let mut rows = QUARTIC_TABLE.clone();
        rows[0].coeffs[0] = (-2, 0);
        assert!(!verify_quartic_table_with(&rows).unwrap().passed);
    }

    #[test]
    fn display() {
        assert_eq!(GaussianInt::new(3, -2).to_string(), "3-2i");
        assert_eq!(GaussianInt::new(0, -1).to_string(), "-i");
        assert_eq!(format_poly(&reference_cubic()), "x^3-3x-2i");
        assert_eq!(GaussianInt::new(-2, 3).normalized(), GaussianInt::new(3, 2));
    }
}
