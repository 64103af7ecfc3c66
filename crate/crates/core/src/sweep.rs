//! Parallel dimension computations over a grid of sorted degree tuples.
//!
//! Every cell gets its own seed derived from the master seed and the cell,
//! so the output is the same for any thread count and scheduling.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::PrimeField;
use crate::interp::{dim_linear_system, system_seed};
use crate::model::{critical_range, DimReport, LinearSystem, MultiDegree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NPolicy {
    /// `n-` and `n+`.
    Critical,
    /// Every `n` from 0 to `n+`.
    All,
    Minus,
    Plus,
}

impl FromStr for NPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "critical" => Ok(NPolicy::Critical),
            "all" => Ok(NPolicy::All),
            "minus" | "n-" => Ok(NPolicy::Minus),
            "plus" | "n+" => Ok(NPolicy::Plus),
            other => Err(Error::InvalidSystem(format!("unknown point policy {other:?}"))),
        }
    }
}

impl fmt::Display for NPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NPolicy::Critical => "critical",
            NPolicy::All => "all",
            NPolicy::Minus => "minus",
            NPolicy::Plus => "plus",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub r_min: usize,
    pub r_max: usize,
    pub d_min: u32,
    pub d_max: u32,
    pub n_policy: NPolicy,
    /// Cells with more sections than this are skipped.
    pub cap: u64,
    pub seed: u64,
    pub retries: usize,
    /// Worker threads, 0 for the rayon default.
    pub threads: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            r_min: 1,
            r_max: 3,
            d_min: 1,
            d_max: 3,
            n_policy: NPolicy::Critical,
            cap: 5000,
            seed: 0,
            retries: crate::DEFAULT_RETRIES,
            threads: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub degrees: Vec<u32>,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub report: Option<DimReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub skipped: Option<String>,
}

/// Non-decreasing tuples of length `r` with entries in `[lo, hi]`, in
/// lexicographic order.
pub fn sorted_tuples(r: usize, lo: u32, hi: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if r == 0 || lo > hi {
        return out;
    }
    let mut cur = vec![lo; r];
    loop {
        out.push(cur.clone());
        let Some(i) = (0..r).rev().find(|&i| cur[i] < hi) else { break };
        let v = cur[i] + 1;
        cur[i..].iter_mut().for_each(|x| *x = v);
    }
    out
}

fn point_counts(deg: &MultiDegree, policy: NPolicy) -> Vec<usize> {
    let (lo, hi) = critical_range(deg);
    match policy {
        NPolicy::Critical if lo == hi => vec![lo],
        NPolicy::Critical => vec![lo, hi],
        NPolicy::All => (0..=hi).collect(),
        NPolicy::Minus => vec![lo],
        NPolicy::Plus => vec![hi],
    }
}

/// The cells of the grid, in output order.
pub fn cells(cfg: &SweepConfig) -> Vec<(Vec<u32>, usize)> {
    let mut out = Vec::new();
    for r in cfg.r_min.max(1)..=cfg.r_max {
        for d in sorted_tuples(r, cfg.d_min, cfg.d_max) {
            let deg = MultiDegree::new(d.clone()).expect("r >= 1");
            for n in point_counts(&deg, cfg.n_policy) {
                out.push((d.clone(), n));
            }
        }
    }
    out
}

fn run_cell<F: PrimeField>(cfg: &SweepConfig, degrees: &[u32], n: usize) -> Result<SweepRow> {
    let spec = LinearSystem::doubles(degrees, n)?;
    let sections = spec.section_count();
    if sections > cfg.cap {
        return Ok(SweepRow {
            degrees: degrees.to_vec(),
            n,
            report: None,
            skipped: Some(format!("{sections} sections exceed cap {}", cfg.cap)),
        });
    }
    let report = dim_linear_system::<F>(&spec, system_seed(cfg.seed, degrees, n), cfg.retries)?;
    Ok(SweepRow { degrees: degrees.to_vec(), n, report: Some(report), skipped: None })
}

pub fn sweep<F: PrimeField>(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let cells = cells(cfg);
    let run = || cells.par_iter().map(|(d, n)| run_cell::<F>(cfg, d, *n)).collect::<Result<Vec<_>>>();
    if cfg.threads == 0 {
        return run();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::InvalidSystem(format!("thread pool: {e}")))?
        .install(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Status, F307};

    #[test]
    fn tuples_are_sorted_and_complete() {
        let t = sorted_tuples(3, 1, 3);
        assert_eq!(t.len(), 10);
        assert!(t.windows(2).all(|w| w[0] < w[1]));
        assert!(t.iter().all(|x| x.windows(2).all(|w| w[0] <= w[1])));
        assert_eq!(sorted_tuples(2, 1, 1), vec![vec![1, 1]]);
        assert!(sorted_tuples(2, 3, 1).is_empty());
    }

    #[test]
    fn surfaces_flag_only_the_two_two_a_family() {
        let cfg = SweepConfig { r_min: 2, r_max: 2, d_min: 1, d_max: 6, ..SweepConfig::default() };
        let rows = sweep::<F307>(&cfg).unwrap();
        let flagged: Vec<_> = rows
            .iter()
            .filter(|r| r.report.as_ref().unwrap().status != Status::NonSpecial)
            .map(|r| (r.degrees.clone(), r.n))
            .collect();
        assert_eq!(flagged, vec![(vec![2, 2], 3), (vec![2, 4], 5), (vec![2, 6], 7)]);
    }

    #[test]
    fn all_ones_in_dimension_four() {
        let cfg = SweepConfig { r_min: 4, r_max: 4, d_min: 1, d_max: 1, ..SweepConfig::default() };
        let rows = sweep::<F307>(&cfg).unwrap();
        assert_eq!(rows.len(), 2);
        let r = rows[0].report.as_ref().unwrap();
        assert_eq!((rows[0].n, r.computed, r.status), (3, 1, Status::SpecialCandidate));
        assert_eq!(rows[1].report.as_ref().unwrap().status, Status::NonSpecial);
    }

    #[test]
    fn cap_skips_cells() {
        let cfg = SweepConfig { r_min: 3, r_max: 3, d_min: 2, d_max: 2, cap: 10, ..SweepConfig::default() };
        let rows = sweep::<F307>(&cfg).unwrap();
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r.report.is_none() && r.skipped.as_deref().unwrap().contains("27 sections")));
    }

    #[test]
    fn output_does_not_depend_on_thread_count() {
        let base = SweepConfig { r_min: 1, r_max: 3, d_min: 1, d_max: 4, n_policy: NPolicy::All, seed: 99, ..SweepConfig::default() };
        let one = sweep::<F307>(&SweepConfig { threads: 1, ..base.clone() }).unwrap();
        let four = sweep::<F307>(&SweepConfig { threads: 4, ..base }).unwrap();
        assert_eq!(serde_json::to_string(&one).unwrap(), serde_json::to_string(&four).unwrap());
    }

    #[test]
    fn policies() {
        let deg = MultiDegree::new(vec![1, 1]).unwrap();
        assert_eq!(point_counts(&deg, NPolicy::Critical), vec![1, 2]);
        assert_eq!(point_counts(&deg, NPolicy::All), vec![0, 1, 2]);
        assert_eq!(point_counts(&deg, NPolicy::Minus), vec![1]);
        assert_eq!("n+".parse::<NPolicy>().unwrap(), NPolicy::Plus);
        assert!("sometimes".parse::<NPolicy>().is_err());
    }
}
