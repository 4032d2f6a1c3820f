//! The level 108 weight 3 newform `g~` with coefficients in `Q(sqrt(-3))`,
//! the ideal class character values, and the comparison with point counts.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::asdcheck::{a_magnitude, asd_a};
use crate::error::{Error, Result};
use crate::frobchar::CharPolyReport;
use crate::ring::rational::parse_rational;
use crate::ring::{balanced, gcd, is_prime, pow_mod, reduce_i64, sqrt_mod_prime, BigRational};

/// Displayed coefficients as `(n, alpha, beta)` with `a(n) = alpha u + beta`.
const DISPLAYED: [(u64, &str, &str); 18] = [
    (1, "0", "1"),
    (2, "1/10", "-17/10"),
    (4, "-1/5", "-3/5"),
    (5, "0", "7"),
    (7, "-1/2", "7/2"),
    (8, "0", "8"),
    (10, "7/10", "-119/10"),
    (11, "1/2", "-7/2"),
    (13, "0", "20"),
    (14, "1/2", "23/2"),
    (16, "4/5", "-68/5"),
    (17, "0", "-8"),
    (19, "3/5", "-21/5"),
    (20, "-7/5", "-21/5"),
    (22, "-1/2", "-23/2"),
    (23, "-1/5", "7/5"),
    (37, "0", "-10"),
    (53, "0", "-47"),
];

/// `u = U_RATIONAL + U_SQRT sqrt(-3)`, a root of `x^2 - 14x + 349`.
pub const U_RATIONAL: i64 = 7;
pub const U_SQRT: i64 = -10;

/// `x + y sqrt(-3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SqrtM3Int {
    pub x: i64,
    pub y: i64,
}

impl SqrtM3Int {
    pub fn new(x: i64, y: i64) -> Self {
        SqrtM3Int { x, y }
    }

    pub fn conj(self) -> Self {
        SqrtM3Int { x: self.x, y: -self.y }
    }

    pub fn norm(self) -> i128 {
        (self.x as i128).pow(2) + 3 * (self.y as i128).pow(2)
    }

    pub fn mul(self, o: Self) -> Self {
        SqrtM3Int { x: self.x * o.x - 3 * self.y * o.y, y: self.x * o.y + self.y * o.x }
    }
}

impl std::fmt::Display for SqrtM3Int {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.x, self.y) {
            (x, 0) => write!(f, "{x}"),
            (0, y) => write!(f, "{y}*sqrt(-3)"),
            (x, y) if y < 0 => write!(f, "{x}{y}*sqrt(-3)"),
            (x, y) => write!(f, "{x}+{y}*sqrt(-3)"),
        }
    }
}

/// One stored coefficient, in the exchange format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewformCoefficient {
    pub n: u64,
    pub x: String,
    pub y: String,
}

/// Coefficients `a(n)` at the stored indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewformTable {
    coeffs: BTreeMap<u64, SqrtM3Int>,
}

impl NewformTable {
    pub fn get(&self, n: u64) -> Option<SqrtM3Int> {
        self.coeffs.get(&n).copied()
    }

    pub fn indices(&self) -> impl Iterator<Item = u64> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn primes(&self) -> Vec<u64> {
        self.indices().filter(|&n| is_prime(n)).collect()
    }

    pub fn conj(&self) -> Self {
        NewformTable { coeffs: self.coeffs.iter().map(|(&n, v)| (n, v.conj())).collect() }
    }

    pub fn to_json(&self) -> String {
        let list: Vec<NewformCoefficient> = self
            .coeffs
            .iter()
            .map(|(&n, v)| NewformCoefficient { n, x: v.x.to_string(), y: v.y.to_string() })
            .collect();
        serde_json::to_string_pretty(&list).expect("plain data")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let list: Vec<NewformCoefficient> = serde_json::from_str(s)?;
        let mut coeffs = BTreeMap::new();
        for c in list {
            let parse = |v: &str| v.trim().parse::<i64>().map_err(|_| Error::InvalidInput(format!("a({}) has non-integer part {v:?}", c.n)));
            if coeffs.insert(c.n, SqrtM3Int::new(parse(&c.x)?, parse(&c.y)?)).is_some() {
                return Err(Error::InvalidInput(format!("index {} listed twice", c.n)));
            }
        }
        Ok(NewformTable { coeffs })
    }

    /// Merges `other` in; entries present in both must agree.
    pub fn extend(&mut self, other: &NewformTable) -> Result<()> {
        for (&n, &v) in &other.coeffs {
            match self.coeffs.insert(n, v) {
                Some(old) if old != v => return Err(Error::InvalidInput(format!("a({n}) = {old} conflicts with {v}"))),
                _ => {}
            }
        }
        Ok(())
    }
}

/// `g~` under `u = 7 - 10 sqrt(-3)`, or the other root when `conjugate`.
pub fn load_gtilde_with(conjugate: bool) -> NewformTable {
    let uy = if conjugate { -U_SQRT } else { U_SQRT };
    let mut coeffs = BTreeMap::new();
    for (n, alpha, beta) in DISPLAYED {
        let alpha = parse_rational(alpha).expect("static table");
        let beta = parse_rational(beta).expect("static table");
        let x = &alpha * BigRational::from_integer(U_RATIONAL.into()) + beta;
        let y = alpha * BigRational::from_integer(uy.into());
        let int = |v: &BigRational| -> i64 {
            assert!(v.is_integer(), "a({n}) is integral in Z[sqrt(-3)]");
            v.to_integer().to_i64().expect("small")
        };
        coeffs.insert(n, SqrtM3Int::new(int(&x), int(&y)));
    }
    NewformTable { coeffs }
}

pub fn load_gtilde() -> NewformTable {
    load_gtilde_with(false)
}

/// `a(mn) = a(m) a(n)` for coprime stored `m, n > 1` with `mn` stored, and
/// `a(2^k) = a(2)^k` (2 divides the level).
#[derive(Clone, Debug, Serialize)]
pub struct MultiplicativityCheck {
    pub m: u64,
    pub n: u64,
    pub ok: bool,
}

pub fn check_multiplicativity(table: &NewformTable) -> Vec<MultiplicativityCheck> {
    let idx: Vec<u64> = table.indices().filter(|&n| n > 1).collect();
    let mut out = Vec::new();
    for (i, &m) in idx.iter().enumerate() {
        for &n in &idx[i + 1..] {
            if gcd(m, n) == 1 {
                if let Some(mn) = table.get(m * n) {
                    let ok = table.get(m).unwrap().mul(table.get(n).unwrap()) == mn;
                    out.push(MultiplicativityCheck { m, n, ok });
                }
            }
        }
    }
    if let Some(a2) = table.get(2) {
        let mut pw = a2;
        let mut k = 2;
        while let Some(v) = table.get(k * 2) {
            pw = pw.mul(a2);
            out.push(MultiplicativityCheck { m: 2, n: k, ok: v == pw });
            k *= 2;
        }
    }
    out
}

/// A value of the ideal class character: a fourth root of unity `i^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClassChar {
    One,
    I,
    MinusOne,
    MinusI,
}

/// `chi` at one place `v | p`; for split `p` the place is labelled by the
/// balanced residue of `i` mod `v`.
#[derive(Clone, Debug, Serialize)]
pub struct ClassCharValue {
    pub p: u64,
    pub place_i: Option<i64>,
    pub value: ClassChar,
}

/// `chi` at every place over `p`.
pub fn chi_value(p: u64) -> Result<Vec<ClassCharValue>> {
    if !is_prime(p) || p <= 3 {
        return Err(Error::InvalidInput(format!("chi is evaluated at primes p > 3, got {p}")));
    }
    if p % 4 == 3 {
        return Ok(vec![ClassCharValue { p, place_i: None, value: ClassChar::One }]);
    }
    let i0 = sqrt_mod_prime(p - 1, p).expect("p = 1 mod 4");
    let s = pow_mod(reduce_i64(-3, p), (p - 1) / 4, p);
    let mut out = Vec::new();
    for i in [i0, p - i0] {
        let value = if p % 12 == 1 {
            if s == 1 {
                ClassChar::One
            } else {
                ClassChar::MinusOne
            }
        } else if s == i {
            ClassChar::I
        } else {
            ClassChar::MinusI
        };
        out.push(ClassCharValue { p, place_i: Some(balanced(i, p)), value });
    }
    out.sort_by_key(|v| v.place_i);
    Ok(out)
}

/// `a(p)` for `p = 1 mod 4`, `a(p) / (i sqrt(3))` for `p = 3 mod 4`.
pub fn modified_coefficient(table: &NewformTable, p: u64) -> Result<i64> {
    let a = table.get(p).ok_or(Error::CoefficientUnavailable(p))?;
    match p % 4 {
        1 if a.y == 0 => Ok(a.x),
        // y sqrt(-3) / (i sqrt(3)) = y
        3 if a.x == 0 => Ok(a.y),
        _ => Err(Error::Structure(format!("a({p}) = {a} does not have the expected shape"))),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub p: u64,
    pub a_p: String,
    pub modified: i64,
    /// `|A(p)|` from the point counts.
    pub count_magnitude: i128,
    pub matches: bool,
}

pub fn compare_at_prime(table: &NewformTable, p: u64, frob: &CharPolyReport) -> Result<CompareReport> {
    let modified = modified_coefficient(table, p)?;
    let (a, _) = asd_a(frob)?;
    let m = a_magnitude(&a)?;
    Ok(CompareReport {
        p,
        a_p: table.get(p).expect("checked above").to_string(),
        modified,
        count_magnitude: m,
        matches: modified.unsigned_abs() as i128 == m,
    })
}

/// `|a(p)| <= 2p`, i.e. `x^2 + 3y^2 <= 4p^2`, at every stored prime.
pub fn ramanujan_ok(table: &NewformTable) -> bool {
    table.primes().into_iter().all(|p| table.get(p).unwrap().norm() <= 4 * (p as i128).pow(2))
}
