//! Rho lengths of uniformly random self-maps of `{0, ..., n-1}`, for
//! comparison with orbit sizes modulo primes.

use std::collections::HashMap;
use std::convert::Infallible;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cycle::{first_repeat, Rho};
use crate::error::{Error, Result};
use crate::orbit::Census;

/// Generator used for every trial, recorded in reports.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng::seed_from_u64(splitmix64(seed + trial * 0x9E3779B97F4A7C15))";

#[derive(Debug, Clone, PartialEq)]
pub struct RhoSample {
    pub n: u64,
    pub trials: u64,
    pub seed: u64,
    pub mean_tail: f64,
    pub mean_cycle: f64,
    pub mean_rho: f64,
}

impl RhoSample {
    pub const CSV_HEADER: &'static str = "n,trials,seed,mean_tail,mean_cycle,mean_rho";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.n, self.trials, self.seed, self.mean_tail, self.mean_cycle, self.mean_rho
        )
    }

    pub fn write_csv<W: Write>(samples: &[RhoSample], mut out: W) -> Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for s in samples {
            writeln!(out, "{}", s.csv_row())?;
        }
        Ok(())
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn trial_seed(seed: u64, trial: u64) -> u64 {
    splitmix64(seed.wrapping_add(trial.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// One trial: a random start and a random function sampled lazily on the
/// points the orbit actually visits.
pub fn trial_rho(n: u64, seed: u64, trial: u64) -> Rho {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, trial));
    let start = rng.random_range(0..n);
    let mut table: HashMap<u64, u64> = HashMap::new();
    first_repeat(start, |x: &u64| -> Result<u64, Infallible> {
        Ok(*table.entry(*x).or_insert_with(|| rng.random_range(0..n)))
    })
    .expect("infallible")
}

pub fn sample_rho(n: u64, trials: u64, seed: u64) -> Result<RhoSample> {
    sample_rho_with_jobs(n, trials, seed, None)
}

pub fn sample_rho_with_jobs(n: u64, trials: u64, seed: u64, jobs: Option<usize>) -> Result<RhoSample> {
    if n == 0 || trials == 0 {
        return Err(Error::invalid("need n >= 1 and trials >= 1"));
    }
    let run = || {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let rho = trial_rho(n, seed, t);
                (rho.tail, rho.cycle)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    };
    let (tails, cycles) = match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?
            .install(run),
        None => run(),
    };
    let t = trials as f64;
    Ok(RhoSample {
        n,
        trials,
        seed,
        mean_tail: tails as f64 / t,
        mean_cycle: cycles as f64 / t,
        mean_rho: (tails + cycles) as f64 / t,
    })
}

/// Exact mean tail, cycle and rho over all `n^n` functions and `n` starts.
/// Feasible for `n <= 7`.
pub fn exhaustive_rho(n: u64) -> Result<(f64, f64, f64)> {
    if !(1..=7).contains(&n) {
        return Err(Error::invalid("exhaustive enumeration supports 1 <= n <= 7"));
    }
    let count = n.pow(n as u32);
    let (mut tails, mut cycles) = (0u64, 0u64);
    let mut table = vec![0u64; n as usize];
    for code in 0..count {
        let mut c = code;
        for slot in table.iter_mut() {
            *slot = c % n;
            c /= n;
        }
        for start in 0..n {
            // walk until a repeat, tracking first-visit indices
            let mut index = vec![u64::MAX; n as usize];
            let (mut x, mut i) = (start, 0u64);
            while index[x as usize] == u64::MAX {
                index[x as usize] = i;
                x = table[x as usize];
                i += 1;
            }
            tails += index[x as usize];
            cycles += i - index[x as usize];
        }
    }
    let total = (count * n) as f64;
    Ok((tails as f64 / total, cycles as f64 / total, (tails + cycles) as f64 / total))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioRow {
    pub p: u64,
    pub m: u64,
    pub sqrt_p: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub rows: Vec<RatioRow>,
    /// `(q, ratio)` quantiles of `m_p / sqrt p` weighted by `log p / p`.
    pub quantiles: Vec<(f64, f64)>,
    /// `(n, mean_rho / sqrt n)` for each baseline sample supplied.
    pub baseline: Vec<(u64, f64)>,
}

pub const QUANTILES: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

pub fn compare_census(census: &Census, schedule: &[RhoSample]) -> Comparison {
    let rows: Vec<RatioRow> = census
        .sizes()
        .filter_map(|(p, m)| {
            m.map(|m| {
                let sqrt_p = (p as f64).sqrt();
                RatioRow {
                    p,
                    m,
                    sqrt_p,
                    ratio: m as f64 / sqrt_p,
                }
            })
        })
        .collect();
    let mut weighted: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.ratio, (r.p as f64).ln() / r.p as f64))
        .collect();
    weighted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = weighted.iter().map(|w| w.1).sum();
    let quantiles = if weighted.is_empty() {
        Vec::new()
    } else {
        QUANTILES
            .iter()
            .map(|&q| {
                let mut acc = 0.0;
                let value = weighted
                    .iter()
                    .find(|w| {
                        acc += w.1;
                        acc >= q * total
                    })
                    .map_or(weighted[weighted.len() - 1].0, |w| w.0);
                (q, value)
            })
            .collect()
    };
    let baseline = schedule
        .iter()
        .map(|s| (s.n, s.mean_rho / (s.n as f64).sqrt()))
        .collect();
    Comparison {
        rows,
        quantiles,
        baseline,
    }
}

impl Comparison {
    /// CSV `p,m,sqrt_p,ratio`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "p,m,sqrt_p,ratio")?;
        for r in &self.rows {
            writeln!(out, "{},{},{},{}", r.p, r.m, r.sqrt_p, r.ratio)?;
        }
        Ok(())
    }

    pub fn median(&self) -> Option<f64> {
        self.quantiles.iter().find(|q| q.0 == 0.5).map(|q| q.1)
    }
}
