//! Batch jobs behind the command-line tool: table reproduction, the
//! congruence suite, the newform sweep, and cache maintenance. Every report
//! renders as JSON, CSV, or plain text, deterministically.

use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::asdcheck::{
    a_magnitude, eta_anchor, forms_for, quad_form, table1_precision, table1_row, three_term_data, verify_asd, verify_general_n,
    Reading, VerificationReport,
};
use crate::error::{Error, Result};
use crate::frobchar::{format_int_poly, orbit_representatives, CharPolyReport, FrobEngine};
use crate::galois::{verify_quartic_table, QuarticTableReport};
use crate::golden;
use crate::modforms::{basis_h, e2_series, eta4z6, eta4z6_coefficients, hauptmodul};
use crate::newform::{compare_at_prime, load_gtilde, modified_coefficient, CompareReport, NewformTable};
use crate::ring::{is_prime, order_mod};
use crate::series::{Rationals, TruncatedSeries, Zmod};
use crate::surface::cache::FiberCache;
use crate::surface::{CountBudget, CountMethod, FiberTraceTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            _ => Err(Error::InvalidInput(format!("unknown format {s:?} (json, csv, text)"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Series precision `M` (indices below `M`).
    pub prec: usize,
    pub pmin: u64,
    pub pmax: u64,
    /// Largest coefficient index used by congruence checks.
    pub max_index: usize,
    pub budget: CountBudget,
    pub cache_dir: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            prec: 256,
            pmin: 5,
            pmax: 53,
            max_index: 1200,
            budget: CountBudget::default(),
            cache_dir: None,
            format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.prec < 64 {
            return Err(Error::InvalidInput(format!("precision {} is below 64", self.prec)));
        }
        if self.budget.naive_q2_cap == 0 || self.budget.bsgs_q_cap == 0 {
            return Err(Error::InvalidInput("counting budgets must be positive".into()));
        }
        if self.pmin > self.pmax {
            return Err(Error::InvalidInput(format!("empty prime range {}..={}", self.pmin, self.pmax)));
        }
        Ok(())
    }

    /// `$ASDLAB_CACHE` wins over the configured directory.
    pub fn cache(&self) -> FiberCache {
        FiberCache::from_env_or(self.cache_dir.clone())
    }

    pub fn engine(&self) -> Result<FrobEngine> {
        self.validate()?;
        Ok(FrobEngine::new(self.budget, self.cache()))
    }

    /// Primes in range that are good for the six-fold cover.
    pub fn primes(&self) -> Vec<u64> {
        good_primes(self.pmin, self.pmax)
    }
}

pub fn good_primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(5)..=hi).filter(|&p| is_prime(p)).collect()
}

/// A report that can be flattened into a table.
pub trait Tabular: Serialize {
    fn header(&self) -> Vec<&'static str>;
    fn rows(&self) -> Vec<Vec<String>>;
    fn passed(&self) -> bool;
}

fn csv_field(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

pub fn render<T: Tabular>(report: &T, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        OutputFormat::Csv => {
            let mut out = report.header().iter().map(|h| csv_field(h)).collect::<Vec<_>>().join(",") + "\n";
            for row in report.rows() {
                out += &(row.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(",") + "\n");
            }
            Ok(out)
        }
        OutputFormat::Text => {
            let header: Vec<String> = report.header().iter().map(|s| s.to_string()).collect();
            let rows = report.rows();
            let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
            for row in &rows {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(c.len());
                }
            }
            let line = |cells: &[String]| -> String {
                let s: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                s.join("  ").trim_end().to_string() + "\n"
            };
            let mut out = line(&header);
            for row in &rows {
                out += &line(row);
            }
            out += if report.passed() { "PASS\n" } else { "FAIL\n" };
            Ok(out)
        }
    }
}

fn opt(s: &Option<String>) -> String {
    s.clone().unwrap_or_default()
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub p: u64,
    pub expected: String,
    pub computed: String,
    pub passed: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub table: String,
    pub rows: Vec<TableRow>,
    pub passed: bool,
}

impl TableReport {
    fn new(table: &str, rows: Vec<TableRow>) -> Self {
        let passed = !rows.is_empty() && rows.iter().all(|r| r.passed);
        TableReport { table: table.into(), rows, passed }
    }
}

impl Tabular for TableReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["table", "p", "expected", "computed", "passed", "error"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| vec![self.table.clone(), r.p.to_string(), r.expected.clone(), r.computed.clone(), r.passed.to_string(), opt(&r.error)])
            .collect()
    }
    fn passed(&self) -> bool {
        self.passed
    }
}

/// Modified Hecke eigenvalues on `<h_1, h_5>` against the reference table.
pub fn cmd_table1(cfg: &RunConfig) -> Result<TableReport> {
    cfg.validate()?;
    let rows = golden::TABLE1
        .par_iter()
        .map(|&(p, _, want)| match table1_row(p, cfg.prec.max(table1_precision(p))) {
            Ok(row) => TableRow { p, expected: want.to_string(), computed: row.modified.to_string(), passed: row.modified == want, error: None },
            Err(e) => TableRow { p, expected: want.to_string(), computed: String::new(), passed: false, error: Some(e.to_string()) },
        })
        .collect();
    Ok(TableReport::new("table1", rows))
}

/// `Char(W^new, F_p^r)` for the nine reference primes.
pub fn cmd_table2(engine: &FrobEngine) -> Result<TableReport> {
    let rows = golden::TABLE2
        .iter()
        .map(|&(p, factored, _)| {
            let expected = factored.to_string();
            let result = golden::table2_integer_poly(p).and_then(|want| {
                let rep = engine.charpoly_wnew(6, p)?;
                let got = rep.integer_coefficients()?.to_vec();
                Ok((want == got, format_int_poly(&got)))
            });
            match result {
                Ok((passed, computed)) => TableRow { p, expected, computed, passed, error: None },
                Err(e) => TableRow { p, expected, computed: String::new(), passed: false, error: Some(e.to_string()) },
            }
        })
        .collect();
    Ok(TableReport::new("table2", rows))
}

/// What a check in the congruence suite is supposed to do.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Pass,
    Fail,
    /// Reported only; does not affect the verdict.
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyRow {
    pub n: u64,
    pub p: u64,
    pub r: u32,
    pub label: String,
    pub a: String,
    pub b: String,
    pub expect: Expect,
    pub passed: bool,
    pub first_failure: Option<u64>,
    pub ok: bool,
    pub error: Option<String>,
}

impl VerifyRow {
    fn from_report(rep: &VerificationReport, expect: Expect) -> Self {
        let rel = &rep.relation;
        let first_failure = if rep.passed { None } else { rep.places.iter().filter_map(|pl| pl.first_failure).min() };
        VerifyRow {
            n: rel.n,
            p: rel.p,
            r: rel.r,
            label: rel.label.clone(),
            a: rel.a.to_string(),
            b: rel.b.to_string(),
            expect,
            passed: rep.passed,
            first_failure,
            ok: match expect {
                Expect::Pass => rep.passed,
                Expect::Fail => !rep.passed,
                Expect::Info => true,
            },
            error: None,
        }
    }

    fn error(n: u64, p: u64, label: &str, e: Error) -> Self {
        VerifyRow {
            n,
            p,
            r: 0,
            label: label.into(),
            a: String::new(),
            b: String::new(),
            expect: Expect::Pass,
            passed: false,
            first_failure: None,
            ok: false,
            error: Some(e.to_string()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyAllReport {
    pub max_index: usize,
    pub rows: Vec<VerifyRow>,
    pub passed: bool,
}

impl Tabular for VerifyAllReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["n", "p", "r", "label", "A", "B", "expect", "passed", "first_failure", "ok", "error"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.p.to_string(),
                    r.r.to_string(),
                    r.label.clone(),
                    r.a.clone(),
                    r.b.clone(),
                    format!("{:?}", r.expect).to_lowercase(),
                    r.passed.to_string(),
                    r.first_failure.map(|m| m.to_string()).unwrap_or_default(),
                    r.ok.to_string(),
                    opt(&r.error),
                ]
            })
            .collect()
    }
    fn passed(&self) -> bool {
        self.passed
    }
}

/// Sampled `(n, j, p)` for the general-`n` checks.
pub const GENERAL_N_SAMPLE: [(u64, u64, u64); 8] = [(2, 1, 7), (3, 1, 5), (3, 1, 7), (3, 2, 11), (4, 1, 5), (4, 1, 7), (4, 1, 11), (6, 1, 13)];

/// Congruence checks on `<h_1, h_5>` and `h_3` at one prime: the
/// residue-class combinations, their perturbations (which must fail), the
/// `eta(4z)^6` anchor, and the literal readings for information.
pub fn verify_prime(engine: &FrobEngine, p: u64, max_index: usize, eta: &[i64]) -> Vec<VerifyRow> {
    let run = || -> Result<Vec<VerifyRow>> {
        let frob = engine.charpoly_wnew(6, p)?;
        let forms = forms_for(6, &[1, 3, 5], p, max_index, 1)?;
        let mut rows = Vec::new();
        for rel in three_term_data(p, &frob, Reading::Corrected)? {
            rows.push(VerifyRow::from_report(&verify_asd(&forms, &rel, max_index)?, Expect::Pass));
            let mut bad = rel.perturbed()?;
            bad.label = format!("{} A+1", rel.label);
            rows.push(VerifyRow::from_report(&verify_asd(&forms, &bad, max_index)?, Expect::Fail));
        }
        if p % 12 == 5 || p % 12 == 7 {
            for rel in three_term_data(p, &frob, Reading::Literal)? {
                let mut rel = rel;
                rel.label = format!("{} literal", rel.label);
                rows.push(VerifyRow::from_report(&verify_asd(&forms, &rel, max_index)?, Expect::Info));
            }
        }
        let anchor = eta_anchor(p, eta, Reading::Corrected)?;
        rows.push(VerifyRow::from_report(&verify_asd(&forms, &anchor, max_index)?, Expect::Pass));
        if p % 4 == 3 {
            let lit = eta_anchor(p, eta, Reading::Literal)?;
            rows.push(VerifyRow::from_report(&verify_asd(&forms, &lit, max_index)?, Expect::Info));
        }
        Ok(rows)
    };
    run().unwrap_or_else(|e| vec![VerifyRow::error(6, p, "h1/h5", e)])
}

pub fn cmd_verify_all(cfg: &RunConfig, engine: &FrobEngine) -> Result<VerifyAllReport> {
    cfg.validate()?;
    let eta = eta4z6_coefficients(cfg.pmax as usize + 1)?;
    let mut rows: Vec<VerifyRow> = cfg.primes().par_iter().flat_map(|&p| verify_prime(engine, p, cfg.max_index, &eta)).collect();
    for (n, j, p) in GENERAL_N_SAMPLE {
        if p < cfg.pmin || p > cfg.pmax {
            continue;
        }
        let label = format!("h_{j}^[{n}]");
        rows.push(match verify_general_n(engine, n, j, p, cfg.max_index) {
            Ok(rep) => VerifyRow::from_report(&rep, Expect::Pass),
            Err(e) => VerifyRow::error(n, p, &label, e),
        });
    }
    let passed = !rows.is_empty() && rows.iter().all(|r| r.ok);
    Ok(VerifyAllReport { max_index: cfg.max_index, rows, passed })
}

/// One prime of the point-count sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub p: u64,
    pub r: u32,
    /// `Tr(F_{p^r} | W_1)`.
    pub trace: String,
    /// `m` in `A = m sqrt(d)`.
    pub m: Option<i128>,
    pub d: Option<i64>,
    /// `A` has the square root expected for `p mod 12`.
    pub shape_ok: bool,
    /// `|A| <= 2p`.
    pub bound_ok: bool,
    /// Modified newform coefficient when stored.
    pub newform: Option<i64>,
    pub newform_ok: Option<bool>,
    /// `|m|` against the modified Hecke eigenvalue table when listed.
    pub table1_ok: Option<bool>,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn ok(&self) -> bool {
        self.error.is_none() && self.shape_ok && self.bound_ok && self.newform_ok != Some(false) && self.table1_ok != Some(false)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareSweepReport {
    /// Stored primes, compared through the full new-part polynomial.
    pub stored: Vec<CompareReport>,
    pub stored_errors: Vec<String>,
    pub sweep: Vec<SweepRow>,
    pub passed: bool,
}

impl Tabular for CompareSweepReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["p", "r", "trace", "m", "d", "shape_ok", "bound_ok", "newform", "newform_ok", "table1_ok", "error"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        let s = |v: Option<String>| v.unwrap_or_default();
        self.sweep
            .iter()
            .map(|r| {
                vec![
                    r.p.to_string(),
                    r.r.to_string(),
                    r.trace.clone(),
                    s(r.m.map(|m| m.to_string())),
                    s(r.d.map(|d| d.to_string())),
                    r.shape_ok.to_string(),
                    r.bound_ok.to_string(),
                    s(r.newform.map(|v| v.to_string())),
                    s(r.newform_ok.map(|v| v.to_string())),
                    s(r.table1_ok.map(|v| v.to_string())),
                    opt(&r.error),
                ]
            })
            .collect()
    }
    fn passed(&self) -> bool {
        self.passed
    }
}

/// `|A(p)|` from the `W_1` trace alone: over `F_p` when `p = 1 mod 6`; over
/// `F_{p^2}` otherwise, where the trace is `2p^2 + beta^2`.
pub fn sweep_row(engine: &FrobEngine, table: &NewformTable, p: u64) -> SweepRow {
    let r = if p % 6 == 1 { 1 } else { 2 };
    let newform = modified_coefficient(table, p).ok();
    let mut row = SweepRow { p, r, trace: String::new(), m: None, d: None, shape_ok: false, bound_ok: false, newform, newform_ok: None, table1_ok: None, error: None };
    let (t, _) = match engine.trace_wj(6, 1, p, r) {
        Ok(v) => v,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.trace = t.to_string();
    let p2 = (p as i128).pow(2);
    let md = if r == 1 {
        quad_form(&t)
    } else {
        t.embed(12).ok().and_then(|t| t.as_integer()).and_then(|a| {
            let d: i64 = if p % 12 == 5 { -1 } else { -3 };
            let sq = (2 * p2 - a) / (-d as i128);
            let m = (sq as f64).sqrt().round() as i128;
            ((2 * p2 - a) % (-d as i128) == 0 && sq >= 0 && m * m == sq).then_some((m, d))
        })
    };
    if let Some((m, d)) = md {
        let expected_d = match p % 12 {
            1 => 1,
            5 => -1,
            _ => -3,
        };
        row.m = Some(m);
        row.d = Some(d);
        row.shape_ok = d == expected_d || m == 0;
        row.bound_ok = m * m * (d.abs() as i128) <= 4 * p2;
        row.newform_ok = newform.map(|v| v.unsigned_abs() as i128 == m.abs());
        row.table1_ok = golden::table1_value(p).map(|v| v.unsigned_abs() as i128 == m.abs());
    }
    row
}

pub fn cmd_compare(engine: &FrobEngine, pmax_split: u64, pmax_inert: u64) -> Result<CompareSweepReport> {
    let table = load_gtilde();
    let mut stored = Vec::new();
    let mut stored_errors = Vec::new();
    for p in table.primes().into_iter().filter(|&p| p > 3) {
        match engine.charpoly_wnew(6, p).and_then(|frob| compare_at_prime(&table, p, &frob)) {
            Ok(c) => stored.push(c),
            Err(e) => stored_errors.push(format!("p = {p}: {e}")),
        }
    }
    let primes: Vec<u64> = good_primes(5, pmax_split.max(pmax_inert))
        .into_iter()
        .filter(|&p| if p % 6 == 1 { p <= pmax_split } else { p <= pmax_inert })
        .collect();
    let sweep: Vec<SweepRow> = primes.par_iter().map(|&p| sweep_row(engine, &table, p)).collect();
    let passed = stored_errors.is_empty() && stored.iter().all(|c| c.matches) && sweep.iter().all(SweepRow::ok);
    Ok(CompareSweepReport { stored, stored_errors, sweep, passed })
}

impl Tabular for QuarticTableReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["polynomial", "v", "discriminant", "stated", "pattern", "frobenius_order", "ok"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        let pat = |v: &[u32]| v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("+");
        let ord = |o: Option<u32>| o.map(|o| o.to_string()).unwrap_or_else(|| "?".into());
        let mut rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.equation.clone(),
                    r.v.clone(),
                    r.discriminant.clone(),
                    r.stated.clone(),
                    pat(&r.factorization.pattern),
                    ord(r.factorization.frobenius_order),
                    (r.disc_ok && r.order_ok).to_string(),
                ]
            })
            .collect();
        for c in &self.cubic {
            let stated = if c.irreducible_expected { "irreducible" } else { "reducible" };
            rows.push(vec![
                c.poly.clone(),
                c.v.clone(),
                self.cubic_disc.clone(),
                stated.into(),
                pat(&c.factorization.pattern),
                ord(c.factorization.frobenius_order),
                (c.ok && self.cubic_disc_ok).to_string(),
            ]);
        }
        rows
    }
    fn passed(&self) -> bool {
        self.passed
    }
}

pub fn cmd_galois_table() -> Result<QuarticTableReport> {
    verify_quartic_table()
}

#[derive(Clone, Debug, Serialize)]
pub struct CacheStatus {
    pub dir: Option<String>,
    pub files: Vec<String>,
    pub removed: usize,
    pub warmed: Vec<String>,
    pub passed: bool,
}

impl Tabular for CacheStatus {
    fn header(&self) -> Vec<&'static str> {
        vec!["file"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        self.files.iter().map(|f| vec![f.clone()]).collect()
    }
    fn passed(&self) -> bool {
        self.passed
    }
}

fn cache_status(cache: &FiberCache, removed: usize, warmed: Vec<String>) -> Result<CacheStatus> {
    let files = cache
        .list()?
        .iter()
        .map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default())
        .collect();
    Ok(CacheStatus { dir: cache.dir().map(|d| d.display().to_string()), files, removed, warmed, passed: true })
}

pub fn cmd_cache_list(cfg: &RunConfig) -> Result<CacheStatus> {
    cache_status(&cfg.cache(), 0, Vec::new())
}

pub fn cmd_cache_clear(cfg: &RunConfig) -> Result<CacheStatus> {
    let cache = cfg.cache();
    let removed = cache.clear()?;
    cache_status(&cache, removed, Vec::new())
}

/// Counts and stores every table the `n`-fold characteristic polynomials
/// need for primes in range: `F_{p^r}` and, within budget, `F_{p^(2r)}`.
pub fn cmd_cache_warm(cfg: &RunConfig, n: u64) -> Result<CacheStatus> {
    let engine = cfg.engine()?;
    if engine.cache().dir().is_none() {
        return Err(Error::InvalidInput("no cache directory configured".into()));
    }
    let mut fields = Vec::new();
    for p in cfg.primes().into_iter().filter(|p| n % p != 0) {
        let js: Vec<u64> = (1..n).collect();
        for (_, orbit) in orbit_representatives(n, p, js) {
            let r = orbit.len() as u32;
            for rr in [r, 2 * r] {
                if (rr == r || engine.can_count(p, rr)) && !fields.contains(&(p, rr)) {
                    fields.push((p, rr));
                }
            }
        }
    }
    fields.sort_unstable();
    let warmed: Vec<String> = fields
        .par_iter()
        .map(|&(p, r)| engine.table(p, r).map(|_| format!("F_{p}^{r}")))
        .collect::<Result<_>>()?;
    cache_status(engine.cache(), 0, warmed)
}

/// The series `expand` can print.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpandTarget {
    /// `h_j^[n]`
    Basis { n: u64, j: u64 },
    Eta4z6,
    Hauptmodul,
    E2,
}

/// Coefficient ring for `expand`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingChoice {
    Rational,
    Zmod { p: u64, k: u32 },
}

impl FromStr for RingChoice {
    type Err = Error;
    /// `q` or `zmod:p:k`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "q" || s == "rational" {
            return Ok(RingChoice::Rational);
        }
        let bad = || Error::InvalidInput(format!("unknown ring {s:?} (q, zmod:p:k)"));
        let mut it = s.strip_prefix("zmod:").ok_or_else(bad)?.split(':');
        let p = it.next().and_then(|v| v.parse().ok()).ok_or_else(bad)?;
        let k = it.next().and_then(|v| v.parse().ok()).ok_or_else(bad)?;
        Ok(RingChoice::Zmod { p, k })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpandReport {
    pub name: String,
    pub series: serde_json::Value,
    pub passed: bool,
}

impl Tabular for ExpandReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["index", "coefficient"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        let start = self.series["start"].as_u64().unwrap_or(0);
        self.series["coefficients"]
            .as_array()
            .map(|cs| cs.iter().enumerate().map(|(i, c)| vec![(start + i as u64).to_string(), c.as_str().unwrap_or_default().to_string()]).collect())
            .unwrap_or_default()
    }
    fn passed(&self) -> bool {
        self.passed
    }
}

fn expand_in<R: crate::series::CoeffRing>(ring: &R, target: ExpandTarget, prec: usize) -> Result<(String, TruncatedSeries<R>)> {
    Ok(match target {
        ExpandTarget::Basis { n, j } => (format!("h_{j}^[{n}]"), basis_h(ring, n, j, prec)?.series),
        ExpandTarget::Eta4z6 => ("eta(4z)^6".into(), eta4z6(ring, prec)?),
        ExpandTarget::Hauptmodul => ("t".into(), hauptmodul(ring, prec)?),
        ExpandTarget::E2 => ("E2".into(), e2_series(ring, prec)),
    })
}

pub fn cmd_expand(target: ExpandTarget, ring: RingChoice, prec: usize) -> Result<ExpandReport> {
    let (name, json) = match ring {
        RingChoice::Rational => {
            let (n, s) = expand_in(&Rationals, target, prec)?;
            (n, s.to_json())
        }
        RingChoice::Zmod { p, k } => {
            let (n, s) = expand_in(&Zmod::new(p, k)?, target, prec)?;
            (n, s.to_json())
        }
    };
    Ok(ExpandReport { name, series: serde_json::from_str(&json)?, passed: true })
}

#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    pub p: u64,
    pub r: u32,
    pub q: u64,
    pub method: CountMethod,
    pub total: i64,
    pub checksum: String,
    pub traces: Vec<i64>,
    pub passed: bool,
}

impl Tabular for CountReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["t", "a_t"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        self.traces.iter().enumerate().map(|(t, a)| vec![t.to_string(), a.to_string()]).collect()
    }
    fn passed(&self) -> bool {
        self.passed
    }
}

/// Fiber traces over `F_{p^r}`, indexed by the field's element encoding.
pub fn cmd_count(cfg: &RunConfig, p: u64, r: u32, method: Option<CountMethod>) -> Result<CountReport> {
    cfg.validate()?;
    let q = p.checked_pow(r).ok_or_else(|| Error::InvalidInput(format!("{p}^{r} overflows")))?;
    let method = match method {
        Some(m) if !cfg.budget.allows(q, m) => return Err(Error::BudgetExceeded { q, budget: cfg.budget.bsgs_q_cap }),
        Some(m) => m,
        None => cfg.budget.choose(q)?,
    };
    let field = crate::ring::FiniteField::with_budget(p, r, cfg.budget.bsgs_q_cap.max(q))?;
    let table: FiberTraceTable = cfg.cache().get_or_count(&field, Some(method), &cfg.budget)?;
    Ok(CountReport { p, r, q, method, total: table.total(), checksum: table.checksum.clone(), traces: table.traces.clone(), passed: true })
}

impl Tabular for CharPolyReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["j", "orbit", "r", "A", "B", "B_computed", "factor"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        self.factors
            .iter()
            .map(|f| {
                vec![
                    f.j.to_string(),
                    f.orbit.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(" "),
                    f.r.to_string(),
                    f.a.to_string(),
                    f.b.to_string(),
                    f.b_computed.to_string(),
                    f.poly.to_string(),
                ]
            })
            .collect()
    }
    fn passed(&self) -> bool {
        true
    }
}

/// Which space `charpoly` describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharpolyTarget {
    Wj(u64),
    Wnew,
    Full,
}

pub fn cmd_charpoly(engine: &FrobEngine, n: u64, p: u64, target: CharpolyTarget) -> Result<CharPolyReport> {
    order_mod(p, n)?;
    match target {
        CharpolyTarget::Wj(j) => engine.charpoly_wj(n, j, p),
        CharpolyTarget::Wnew => engine.charpoly_wnew(n, p),
        CharpolyTarget::Full => engine.charpoly_full(n, p),
    }
}

/// `|A(p)|` from a new-part report, for callers that only need the size.
pub fn count_magnitude(frob: &CharPolyReport) -> Result<i128> {
    a_magnitude(&crate::asdcheck::asd_a(frob)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_checks() {
        let mut cfg = RunConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.prec = 32;
        assert!(cfg.validate().is_err());
        assert_eq!("csv".parse::<OutputFormat>().unwrap(), OutputFormat::Csv);
        assert!("xml".parse::<OutputFormat>().is_err());
        assert_eq!("zmod:7:3".parse::<RingChoice>().unwrap(), RingChoice::Zmod { p: 7, k: 3 });
    }

    #[test]
    fn galois_renders_deterministically() {
        let rep = cmd_galois_table().unwrap();
        let a = render(&rep, OutputFormat::Json).unwrap();
        let b = render(&cmd_galois_table().unwrap(), OutputFormat::Json).unwrap();
        assert_eq!(a, b);
        assert!(render(&rep, OutputFormat::Text).unwrap().ends_with("PASS\n"));
        assert_eq!(render(&rep, OutputFormat::Csv).unwrap().lines().count(), 7);
    }

    #[test]
    fn small_sweep() {
        let engine = RunConfig::default().engine().unwrap();
        let table = load_gtilde();
        for p in [5, 7, 11, 13] {
            let row = sweep_row(&engine, &table, p);
            assert!(row.ok(), "{row:?}");
            assert_eq!(row.newform_ok, Some(true));
            assert_eq!(row.table1_ok, Some(true));
        }
    }
}
