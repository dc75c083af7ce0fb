//! Exhaustive sweeps over all pairs `v ≤ w` in `S_n`.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{bruhat_leq, is_covexillary, Permutation};
use crate::report::{analyze_pair, AnalysisOptions, PairReport};

/// One `w:v` pattern; `*` in either position matches anything.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairPattern {
    w: Option<Permutation>,
    v: Option<Permutation>,
}

impl PairPattern {
    pub fn matches(&self, v: &Permutation, w: &Permutation) -> bool {
        self.w.as_ref().is_none_or(|x| x == w) && self.v.as_ref().is_none_or(|x| x == v)
    }
}

impl FromStr for PairPattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (w, v) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("pair pattern {s:?} is not of the form w:v")))?;
        let side = |t: &str| -> Result<Option<Permutation>> {
            match t.trim() {
                "*" => Ok(None),
                t => Permutation::parse(t).map(Some),
            }
        };
        Ok(PairPattern {
            w: side(w)?,
            v: side(v)?,
        })
    }
}

/// Parses `;`-separated pair patterns.
pub fn parse_pair_filter(s: &str) -> Result<Vec<PairPattern>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// All pairs `v ≤ w` in `S_n`, sorted by `(w, v)`.
pub fn enumerate_pairs(
    n: usize,
    covexillary_only: bool,
    filter: &[PairPattern],
) -> Vec<(Permutation, Permutation)> {
    let perms = Permutation::all(n);
    // a filter naming every w (or every v) explicitly narrows the scan
    let pinned = |side: fn(&PairPattern) -> Option<&Permutation>| -> Vec<Permutation> {
        if !filter.is_empty() && filter.iter().all(|p| side(p).is_some()) {
            let mut xs: Vec<Permutation> = filter
                .iter()
                .filter_map(side)
                .filter(|x| x.n() == n)
                .cloned()
                .collect();
            xs.sort();
            xs.dedup();
            xs
        } else {
            perms.clone()
        }
    };
    let ws = pinned(|p| p.w.as_ref());
    let vs = pinned(|p| p.v.as_ref());
    let mut pairs = Vec::new();
    for w in &ws {
        if covexillary_only && !is_covexillary(w) {
            continue;
        }
        for v in &vs {
            if !filter.is_empty() && !filter.iter().any(|p| p.matches(v, w)) {
                continue;
            }
            if bruhat_leq(v, w).unwrap_or(false) {
                pairs.push((v.clone(), w.clone()));
            }
        }
    }
    pairs.sort_by(|a, b| (&a.1, &a.0).cmp(&(&b.1, &b.0)));
    pairs
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Execution {
    Parallel { workers: usize },
    Sequential,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel { workers: 0 }
        } else {
            Execution::Sequential
        }
    }
}

/// Runs `analyze_pair` on every pair; results keep the input order.
pub fn run_pairs(
    pairs: &[(Permutation, Permutation)],
    opts: &AnalysisOptions,
    exec: Execution,
) -> Vec<Result<PairReport>> {
    let one = |(v, w): &(Permutation, Permutation)| analyze_pair(v, w, opts);
    match exec {
        Execution::Sequential => pairs.iter().map(one).collect(),
        Execution::Parallel { workers } => run_parallel(pairs, workers, &one),
    }
}

#[cfg(feature = "parallel")]
fn run_parallel<F>(
    pairs: &[(Permutation, Permutation)],
    workers: usize,
    one: &F,
) -> Vec<Result<PairReport>>
where
    F: Fn(&(Permutation, Permutation)) -> Result<PairReport> + Sync,
{
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build();
    match pool {
        Ok(pool) => pool.install(|| pairs.par_iter().map(one).collect()),
        Err(_) => pairs.iter().map(one).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_parallel<F>(
    pairs: &[(Permutation, Permutation)],
    _workers: usize,
    one: &F,
) -> Vec<Result<PairReport>>
where
    F: Fn(&(Permutation, Permutation)) -> Result<PairReport> + Sync,
{
    pairs.iter().map(one).collect()
}

/// Failing checks across a sweep, each with the pairs (`w:v`) where it failed.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct SweepSummary {
    pub pairs: usize,
    pub errors: Vec<String>,
    pub theorem_failures: BTreeMap<String, Vec<String>>,
    pub findings: BTreeMap<String, Vec<String>>,
}

impl SweepSummary {
    pub fn from_results<'a>(
        pairs: &[(Permutation, Permutation)],
        results: impl IntoIterator<Item = &'a Result<PairReport>>,
    ) -> Self {
        let mut summary = SweepSummary {
            pairs: pairs.len(),
            ..Default::default()
        };
        for ((v, w), r) in pairs.iter().zip(results) {
            let tag = format!("{w}:{v}");
            match r {
                Ok(rep) => {
                    for name in rep.theorem_failures() {
                        summary
                            .theorem_failures
                            .entry(name)
                            .or_default()
                            .push(tag.clone());
                    }
                    for name in rep.findings() {
                        summary.findings.entry(name).or_default().push(tag.clone());
                    }
                }
                Err(e @ Error::Inconsistent(_)) => {
                    summary.errors.push(format!("{tag}: {e}"));
                    summary
                        .theorem_failures
                        .entry("internal_consistency".into())
                        .or_default()
                        .push(tag.clone());
                }
                Err(e) => summary.errors.push(format!("{tag}: {e}")),
            }
        }
        summary
    }

    pub fn has_theorem_failures(&self) -> bool {
        !self.theorem_failures.is_empty()
    }
}

/// Enumerates, analyzes and summarizes. A deadline already passed yields
/// `Error::Budget` instead of a partial sweep.
pub fn sweep(
    n: usize,
    covexillary_only: bool,
    filter: &[PairPattern],
    opts: &AnalysisOptions,
    exec: Execution,
) -> Result<(Vec<PairReport>, SweepSummary)> {
    let pairs = enumerate_pairs(n, covexillary_only, filter);
    let results = run_pairs(&pairs, opts, exec);
    if results.iter().any(|r| matches!(r, Err(Error::Budget)))
        || opts.deadline.is_some_and(|d| Instant::now() > d)
    {
        return Err(Error::Budget);
    }
    let summary = SweepSummary::from_results(&pairs, &results);
    Ok((
        results.into_iter().filter_map(Result::ok).collect(),
        summary,
    ))
}
