//! Eisenstein series for Gamma^1(5), the Hauptmodul, the cuspform bases
//! `h_j^[n]`, `eta(4z)^6`, and the j-invariant consistency check.

pub mod constants;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::rational::rational;
use crate::ring::BigRational;
use crate::series::{eta_product, CoeffRing, Rationals, TruncatedSeries};

pub use constants::MODEL_PARAMETER_SIGN;

/// Coefficients of `x` needed for a `Gamma_n` series with precision `prec`
/// in `w`.
fn x_prec_for(prec_w: usize, n: u64, lead: usize) -> usize {
    (prec_w.saturating_sub(lead) + n as usize - 1) / n as usize
}

/// `E2` over any ring, from the frozen closed form.
pub fn e2_series<R: CoeffRing>(ring: &R, prec: usize) -> TruncatedSeries<R> {
    let mut c = vec![0i64; prec];
    if prec > 0 {
        c[0] = 1;
    }
    for d in 1..prec {
        let e = constants::EPS[d % 5] * (d * d) as i64;
        if e != 0 {
            for n in (d..prec).step_by(d) {
                c[n] += e;
            }
        }
    }
    TruncatedSeries::from_i64s(ring.clone(), &c, prec, 5)
}

/// `t / x = prod (1 - x^m)^(5 (m|5))` over any ring.
pub fn hauptmodul_unit<R: CoeffRing>(ring: &R, prec: usize) -> Result<TruncatedSeries<R>> {
    eta_product(ring, constants::hauptmodul_exponent, 1, prec.max(1), 5)
}

/// The Hauptmodul `t = x prod (1 - x^m)^(5 (m|5))`.
pub fn hauptmodul<R: CoeffRing>(ring: &R, prec: usize) -> Result<TruncatedSeries<R>> {
    Ok(hauptmodul_unit(ring, prec.saturating_sub(1).max(1))?.shift(1).truncate(prec))
}

/// Gaussian-rational series `re + i im` with rational coefficients.
struct GaussSeries {
    re: Vec<BigRational>,
    im: Vec<BigRational>,
}

/// `chi(d)` as `(re, im)` for the quartic character with `chi(2) = i`.
fn chi(d: u64) -> (i64, i64) {
    match d % 5 {
        0 => (0, 0),
        1 => (1, 0),
        2 => (0, 1),
        3 => (0, -1),
        _ => (-1, 0),
    }
}

/// `B_{3,chi} = 5^2 sum_{a=1}^{5} chi(a) B_3(a/5)`.
fn bernoulli3_chi() -> (BigRational, BigRational) {
    let b3 = |x: BigRational| {
        let x2 = &x * &x;
        &x2 * &x - rational(3, 2) * &x2 + rational(1, 2) * &x
    };
    let mut re = BigRational::zero();
    let mut im = BigRational::zero();
    for a in 1..=5u64 {
        let v = b3(rational(a as i64, 5));
        let (cr, ci) = chi(a);
        re += &v * BigRational::from_integer(BigInt::from(cr * 25));
        im += &v * BigRational::from_integer(BigInt::from(ci * 25));
    }
    (re, im)
}

/// The two weight-3 Eisenstein series with characters `(1, chi)` and
/// `(chi, 1)`, coefficients indexed by the exponent of `q`.
fn eisenstein_basis(prec_q: usize) -> [GaussSeries; 2] {
    let (b_re, b_im) = bernoulli3_chi();
    let sixth = rational(-1, 6);
    let mut a = GaussSeries { re: vec![BigRational::zero(); prec_q], im: vec![BigRational::zero(); prec_q] };
    let mut b = GaussSeries { re: vec![BigRational::zero(); prec_q], im: vec![BigRational::zero(); prec_q] };
    if prec_q > 0 {
        a.re[0] = &b_re * &sixth;
        a.im[0] = &b_im * &sixth;
    }
    for d in 1..prec_q as u64 {
        for n in (d..prec_q as u64).step_by(d as usize) {
            let d2 = (d * d) as i64;
            let (r1, i1) = chi(d);
            a.re[n as usize] += BigRational::from_integer(BigInt::from(r1 * d2));
            a.im[n as usize] += BigRational::from_integer(BigInt::from(i1 * d2));
            let (r2, i2) = chi(n / d);
            b.re[n as usize] += BigRational::from_integer(BigInt::from(r2 * d2));
            b.im[n as usize] += BigRational::from_integer(BigInt::from(i2 * d2));
        }
    }
    [a, b]
}

/// Reduced row echelon solve of `M v = rhs`; returns the uniquely
/// determined coordinates (`None` for free or underdetermined ones), or
/// `None` if the system is inconsistent.
fn solve_unique(mut rows: Vec<Vec<BigRational>>, ncols: usize) -> Option<Vec<Option<BigRational>>> {
    // rows carry the right-hand side in column ncols
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, pr);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if rows[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut out = vec![None; ncols];
    for (i, &c) in pivots.iter().enumerate() {
        if free.iter().all(|&f| rows[i][f].is_zero()) {
            out[c] = Some(rows[i][ncols].clone());
        }
    }
    Some(out)
}

/// Outcome of a j-oracle run.
#[derive(Clone, Debug)]
pub struct OracleRecord {
    pub sign: i64,
    pub precision: usize,
    pub passed: bool,
}

/// The pinned pair `(E1, E2)` with `t = E1 / E2`, as series in
/// `x = q^(1/5)` over the rationals.
#[derive(Clone, Debug)]
pub struct EisensteinPair {
    pub e1: TruncatedSeries<Rationals>,
    pub e2: TruncatedSeries<Rationals>,
    pub t: TruncatedSeries<Rationals>,
    /// Coordinates of `E2` on `Re G`, `Im G`.
    pub alpha: BigRational,
    pub beta: BigRational,
    /// Sign `s` such that the surface parameter is `s t`.
    pub model_sign: i64,
    /// Every candidate tried against the j-oracle.
    pub oracle: Vec<OracleRecord>,
    /// Whether `E1 / E2` equals the eta quotient exactly.
    pub eta_quotient_matches: bool,
}

/// Pins `E1`, `E2` inside the weight-3 Eisenstein space of level 5:
/// `E2` is the combination of `Re G`, `Im G` with constant term 1 for which
/// `t E2` lies in the space again, and the model sign is whichever of
/// `t`, `-t` passes the j-oracle.
pub fn build_eisenstein_pair(prec: usize) -> Result<EisensteinPair> {
    if prec < 20 {
        return Err(Error::InvalidInput(format!("precision {prec} < 20")));
    }
    let q = Rationals;
    let t = hauptmodul(&q, prec)?;
    // Gamma^1(5) is conjugate to Gamma_1(5) by z -> 5z, so its Eisenstein
    // series are the Gamma_1(5) ones with q replaced by x = q^(1/5).
    let basis_x = |v: &[BigRational]| TruncatedSeries::from_coeffs(q, v.to_vec(), prec, 5);
    let [ga, gb] = eisenstein_basis(prec);
    let basis = [basis_x(&ga.re), basis_x(&ga.im), basis_x(&gb.re), basis_x(&gb.im)];

    // Unknowns: alpha, beta (E2 = alpha Re Ga + beta Im Ga), c_0..c_3 (E1).
    let ncols = 6;
    let neq = prec.min(48);
    let mut rows = Vec::with_capacity(neq + 1);
    let mut r0 = vec![BigRational::zero(); ncols + 1];
    r0[0] = basis[0].coeff(0);
    r0[1] = basis[1].coeff(0);
    r0[ncols] = BigRational::one();
    rows.push(r0);
    let t_re = t.mul(&basis[0])?;
    let t_im = t.mul(&basis[1])?;
    for m in 0..neq {
        let mut row = vec![BigRational::zero(); ncols + 1];
        row[0] = t_re.coeff(m);
        row[1] = t_im.coeff(m);
        for k in 0..4 {
            row[2 + k] = -basis[k].coeff(m);
        }
        rows.push(row);
    }
    let sol = solve_unique(rows, ncols)
        .ok_or_else(|| Error::Construction("no Eisenstein combination E2 with t E2 in the space".into()))?;
    let (alpha, beta) = match (&sol[0], &sol[1]) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => return Err(Error::Construction("E2 is not pinned by the normalization".into())),
    };
    let e2 = basis[0].scale(&alpha).add(&basis[1].scale(&beta))?;
    let e1 = t.mul(&e2)?;
    if !(e1.valuation() == 1 && e1.leading().is_one() && e1.is_integral() && e2.is_integral()) {
        return Err(Error::Construction("E1/E2 fail the normalization".into()));
    }
    // E1 must itself lie in the space (checked beyond the solve window).
    let in_space = (0..prec).all(|m| {
        let mut acc = BigRational::zero();
        for k in 0..4 {
            if let Some(c) = &sol[2 + k] {
                acc += c * basis[k].coeff(m);
            }
        }
        sol[2..].iter().all(|c| c.is_some()) && acc == e1.coeff(m)
    });
    if !in_space {
        return Err(Error::Construction("t E2 leaves the Eisenstein space at higher order".into()));
    }
    let frozen = e2_series(&q, prec);
    if frozen != e2 {
        return Err(Error::Construction("pinned E2 disagrees with the frozen closed form".into()));
    }

    let oracle_prec = prec.min(120);
    let mut oracle = Vec::new();
    let mut model_sign = None;
    for sign in [1i64, -1] {
        let cand = t.truncate(oracle_prec).scale(&rational(sign, 1));
        let res = j_oracle(&cand, oracle_prec)?;
        let passed = res.is_zero();
        oracle.push(OracleRecord { sign, precision: res.precision(), passed });
        if passed && model_sign.is_none() {
            model_sign = Some(sign);
        }
    }
    let model_sign = model_sign.ok_or_else(|| Error::Construction("no sign of t passes the j-oracle".into()))?;
    let eta_quotient_matches = e1.div(&e2)? == t.truncate(e1.precision());
    Ok(EisensteinPair { e1, e2, t, alpha, beta, model_sign, oracle, eta_quotient_matches })
}

/// Classical `j(q) q = E4^3 / (Delta / q)` to precision `prec` in `q`.
pub fn classical_j_times_q(prec: usize) -> Result<TruncatedSeries<Rationals>> {
    let q = Rationals;
    let sigma = |n: usize, k: u32| -> i64 { (1..=n).filter(|d| n % d == 0).map(|d| (d as i64).pow(k)).sum() };
    let mut e4 = vec![0i64; prec + 1];
    let mut e6 = vec![0i64; prec + 1];
    e4[0] = 1;
    e6[0] = 1;
    for n in 1..=prec {
        e4[n] = 240 * sigma(n, 3);
        e6[n] = -504 * sigma(n, 5);
    }
    let e4 = TruncatedSeries::from_i64s(q, &e4, prec + 1, 1);
    let e6 = TruncatedSeries::from_i64s(q, &e6, prec + 1, 1);
    let e43 = e4.pow(3)?;
    let delta = e43.sub(&e6.square())?.scale(&rational(1, 1728));
    let delta_over_q = delta.unshift(1)?;
    e43.truncate(prec).div(&delta_over_q.truncate(prec))
}

/// `c4(T) = 1 + 12T + 14T^2 - 12T^3 + T^4`.
pub const C4_MODEL: [i64; 5] = [1, 12, 14, -12, 1];
/// `T^2 - 11T - 1`, the non-cusp factor of the discriminant.
pub const DISC_FACTOR: [i64; 3] = [-1, -11, 1];
/// Order of the pole of `j(T)` at `T = 0`.
pub const MODEL_J_POLE_ORDER: usize = 5;

fn poly_in<R: CoeffRing>(coeffs: &[i64], t: &TruncatedSeries<R>) -> Result<TruncatedSeries<R>> {
    let ring = t.ring().clone();
    let mut acc = TruncatedSeries::zero(ring.clone(), t.precision(), t.var_den());
    for &c in coeffs.iter().rev() {
        acc = acc.mul(t)?.add(&TruncatedSeries::from_i64s(ring.clone(), &[c], t.precision(), t.var_den()))?;
    }
    Ok(acc)
}

/// `x^5 (j_model(T) - j(q))` with `T` the candidate in `x = q^(1/5)`,
/// `j_model(T) = c4(T)^3 / (T^5 (T^2 - 11T - 1))`.
pub fn j_oracle(t_candidate: &TruncatedSeries<Rationals>, prec: usize) -> Result<TruncatedSeries<Rationals>> {
    if t_candidate.valuation() != 1 {
        return Err(Error::InvalidInput("candidate must have valuation 1".into()));
    }
    let prec = prec.min(t_candidate.precision());
    let t = t_candidate.truncate(prec);
    let unit = t.unshift(1)?;
    let c4 = poly_in(&C4_MODEL, &t)?;
    let den = unit.pow(5)?.mul(&poly_in(&DISC_FACTOR, &t)?)?;
    if den.valuation() != 0 {
        return Err(Error::InvalidInput("discriminant of the candidate vanishes identically at the cusp".into()));
    }
    let model = c4.pow(3)?.truncate(den.precision()).div(&den)?;
    let qprec = (model.precision() + 4) / 5;
    let classical = classical_j_times_q(qprec)?.substitute_power(5).with_var_den(5);
    let n = model.precision().min(classical.precision());
    model.truncate(n).sub(&classical.truncate(n))
}

/// An element `h_j^[n]` of the cuspform basis, in `w = q^(1/(5n))`.
#[derive(Clone, Debug)]
pub struct CuspformBasisElement<R: CoeffRing> {
    pub n: u64,
    pub j: u64,
    pub series: TruncatedSeries<R>,
}

/// `h_j^[n] = (E1^(n-j) E2^j)^(1/n)` in `w`, to precision `prec`.
pub fn basis_h<R: CoeffRing>(ring: &R, n: u64, j: u64, prec: usize) -> Result<CuspformBasisElement<R>> {
    if n < 2 || j == 0 || j >= n {
        return Err(Error::InvalidInput(format!("need 1 <= j <= n - 1, got n = {n}, j = {j}")));
    }
    let lead = (n - j) as usize;
    let px = x_prec_for(prec, n, lead).max(1);
    let e2 = e2_series(ring, px);
    let unit = hauptmodul_unit(ring, px)?;
    // (E1 / x)^(n-j) E2^j = (t/x)^(n-j) E2^n
    let inner = unit.pow(n - j)?.mul(&e2.pow(n)?)?;
    let g = inner.nth_root(n)?;
    let series = g.substitute_power(n as usize).with_var_den(5 * n).shift(lead).truncate(prec);
    Ok(CuspformBasisElement { n, j, series })
}

/// `eta(4z)^6 = q prod (1 - q^(4m))^6`.
pub fn eta4z6<R: CoeffRing>(ring: &R, prec: usize) -> Result<TruncatedSeries<R>> {
    if prec < 2 {
        return Ok(TruncatedSeries::zero(ring.clone(), prec, 1));
    }
    Ok(eta_product(ring, |_| 6, 4, prec - 1, 1)?.shift(1))
}

/// Hecke eigenvalue of `eta(4z)^6` at `p`: its `q^p` coefficient.
pub fn eta4z6_coefficients(prec: usize) -> Result<Vec<i64>> {
    eta4z6(&Rationals, prec)?
        .to_i64s()
        .ok_or_else(|| Error::Structure("eta(4z)^6 has non-integral coefficients".into()))
}
