//! Separability scan: for each weight and each prime `P != T`, the minimal
//! polynomial of the Hecke matrix over `K` and whether it is separable.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{is_separable, minimal_polynomial};
use crate::ffield::Fq;
use crate::hecke::{hecke_matrix, required_input_precision};
use crate::modforms::{monomial_basis, type_rep, FormCache};
use crate::poly::PolyRing;
use crate::polyring::{primes_up_to_degree, PrimePoly, RatField};
use crate::ring::Ring;

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub k_max: u64,
    pub prime_deg_max: usize,
    pub m: u64,
    pub jobs: usize,
}

/// One `(k, P)` result. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub q: u64,
    pub k: u64,
    pub m: u64,
    pub prime: String,
    pub dim: usize,
    pub minpoly_degree: Option<usize>,
    pub separable: Option<bool>,
    /// Every row so far at this weight (this one included) is inseparable.
    pub inseparable_for_all_primes_so_far: bool,
    /// Set when the task failed; the other result columns are then empty.
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummaryEntry {
    pub k: u64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub q: u64,
    pub m: u64,
    pub k_max: u64,
    pub prime_deg_max: usize,
    pub rows: Vec<ScanRow>,
    /// Weights where every scanned prime gives an inseparable minimal polynomial.
    pub summary: Vec<SummaryEntry>,
}

impl ScanReport {
    pub fn summary_weights(&self) -> Vec<u64> {
        self.summary.iter().map(|s| s.k).collect()
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scan report serializes")
    }

    pub fn to_pretty(&self) -> String {
        let mut out = format!("separability scan: q = {}, m = {}, k <= {}, deg P <= {}\n", self.q, self.m, self.k_max, self.prime_deg_max);
        out.push_str(&format!("{:>4} {:>4} {:<28} {:>7} {:>10}\n", "k", "dim", "P", "deg mu", "separable"));
        for r in &self.rows {
            let (deg, sep) = match (&r.error, r.minpoly_degree, r.separable) {
                (Some(e), _, _) => ("-".to_string(), format!("error: {e}")),
                (None, Some(d), Some(s)) => (d.to_string(), s.to_string()),
                _ => ("-".to_string(), "-".to_string()),
            };
            out.push_str(&format!("{:>4} {:>4} {:<28} {:>7} {:>10}\n", r.k, r.dim, r.prime, deg, sep));
        }
        let ks: Vec<String> = self.summary.iter().map(|s| s.k.to_string()).collect();
        let ds: Vec<String> = self.summary.iter().map(|s| s.dim.to_string()).collect();
        out.push_str(&format!("inseparable for all primes: k = {{{}}}\n", ks.join(",")));
        out.push_str(&format!("dimensions:                     ({})\n", ds.join(",")));
        out
    }
}

struct TaskResult {
    minpoly_degree: usize,
    separable: bool,
}

fn run_task(cache: &FormCache, field: &RatField, px: &PolyRing<RatField>, k: u64, m: u64, p: &PrimePoly) -> Result<TaskResult> {
    let matrix = hecke_matrix(cache, k, m, p)?;
    let mu = minimal_polynomial(field, &matrix.over_k(field))?;
    Ok(TaskResult { minpoly_degree: mu.degree().unwrap_or(0), separable: is_separable(px, &mu)? })
}

/// Runs the scan on a pool of `jobs` workers. Rows come out ordered by weight,
/// then by the enumeration order of the primes, whatever the worker count.
pub fn scan_separability(fq: &Fq, cfg: &ScanConfig) -> Result<ScanReport> {
    let q = fq.q() as u64;
    let m = type_rep(q, cfg.m as i64);
    if cfg.m != m {
        return Err(Error::InvalidArgument(format!("type m must satisfy 0 <= m < q-1 (got {})", cfg.m)));
    }
    if cfg.prime_deg_max == 0 {
        return Err(Error::InvalidArgument("prime degree bound must be at least 1".into()));
    }
    let field = RatField::new(fq);
    let primes: Vec<PrimePoly> = primes_up_to_degree(field.ring(), cfg.prime_deg_max)?.into_iter().filter(|p| !p.is_t()).collect();
    let weights: Vec<(u64, usize)> = (1..=cfg.k_max)
        .map(|k| (k, monomial_basis(q, k, m).len()))
        .filter(|&(_, dim)| dim > 0)
        .collect();
    let j_max = weights.iter().map(|&(k, _)| monomial_basis(q, k, m).last().map_or(0, |b| b.j)).max().unwrap_or(0);
    let cache = FormCache::new(fq, required_input_precision(j_max, q, cfg.prime_deg_max).max(j_max));
    let px = PolyRing::new(field.clone(), "X");
    let tasks: Vec<(u64, &PrimePoly)> = weights.iter().flat_map(|&(k, _)| primes.iter().map(move |p| (k, p))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let results: Vec<Result<TaskResult>> =
        pool.install(|| tasks.par_iter().map(|&(k, p)| run_task(&cache, &field, &px, k, m, p)).collect());

    let dims: BTreeMap<u64, usize> = weights.iter().copied().collect();
    let mut rows = Vec::with_capacity(tasks.len());
    let mut all_insep: BTreeMap<u64, bool> = BTreeMap::new();
    for (&(k, p), res) in tasks.iter().zip(results) {
        let so_far = all_insep.entry(k).or_insert(true);
        let mut row = ScanRow {
            q,
            k,
            m,
            prime: field.ring().fmt_elem(p.poly()),
            dim: dims[&k],
            minpoly_degree: None,
            separable: None,
            inseparable_for_all_primes_so_far: false,
            error: None,
        };
        match res {
            Ok(t) => {
                *so_far &= !t.separable;
                row.minpoly_degree = Some(t.minpoly_degree);
                row.separable = Some(t.separable);
            }
            Err(e) => {
                *so_far = false;
                row.error = Some(e.to_string());
            }
        }
        row.inseparable_for_all_primes_so_far = *so_far;
        rows.push(row);
    }
    let summary = if primes.is_empty() {
        Vec::new()
    } else {
        all_insep.iter().filter(|(_, &v)| v).map(|(&k, _)| SummaryEntry { k, dim: dims[&k] }).collect()
    };
    Ok(ScanReport { q, m, k_max: cfg.k_max, prime_deg_max: cfg.prime_deg_max, rows, summary })
}
