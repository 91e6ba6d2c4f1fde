//! Orbit sizes of a start point modulo every prime up to a limit.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::cycle::{brent, first_repeat, Rho};
use crate::dynamics::{reduce_point, ProjPointQ, ProjectiveMorphism};
use crate::error::{Error, Result};
use crate::primes::sieve_primes;

/// Which quantity counts as the orbit size `m_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Convention {
    /// Number of distinct points in the forward orbit, tail plus cycle.
    #[default]
    Orbit,
    /// Cycle length only.
    Cycle,
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "orbit" => Ok(Convention::Orbit),
            "cycle" => Ok(Convention::Cycle),
            other => Err(Error::invalid(format!(
                "unknown convention `{other}` (expected orbit or cycle)"
            ))),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Orbit => "orbit",
            Convention::Cycle => "cycle",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CycleMethod {
    #[default]
    HashSet,
    Brent,
}

/// Orbit shape of the reduced start point modulo one prime. `rho` is `None`
/// at a bad prime, where the orbit size is infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitStats {
    pub p: u64,
    pub rho: Option<Rho>,
}

impl OrbitStats {
    pub fn good(p: u64, tail: u64, cycle: u64) -> Self {
        OrbitStats {
            p,
            rho: Some(Rho { tail, cycle }),
        }
    }

    pub fn bad(p: u64) -> Self {
        OrbitStats { p, rho: None }
    }

    pub fn is_bad(&self) -> bool {
        self.rho.is_none()
    }

    pub fn tail(&self) -> Option<u64> {
        self.rho.map(|r| r.tail)
    }

    pub fn cycle(&self) -> Option<u64> {
        self.rho.map(|r| r.cycle)
    }

    /// `tail + cycle`; `None` stands for infinity.
    pub fn m(&self) -> Option<u64> {
        self.rho.map(|r| r.len())
    }

    pub fn m_with(&self, convention: Convention) -> Option<u64> {
        match convention {
            Convention::Orbit => self.m(),
            Convention::Cycle => self.cycle(),
        }
    }
}

/// Orbit statistics of `start` under `phi` modulo `p`.
pub fn orbit_stats(phi: &ProjectiveMorphism, start: &ProjPointQ, p: u64) -> OrbitStats {
    orbit_stats_with(phi, start, p, CycleMethod::HashSet)
}

pub fn orbit_stats_with(
    phi: &ProjectiveMorphism,
    start: &ProjPointQ,
    p: u64,
    method: CycleMethod,
) -> OrbitStats {
    if phi.denominator_primes().binary_search(&p).is_ok() {
        return OrbitStats::bad(p);
    }
    let reduced = phi.reduce_mod(p);
    let origin = reduce_point(start, p);
    let step = |x: &_| reduced.eval(x);
    let rho = match method {
        CycleMethod::HashSet => first_repeat(origin, step),
        CycleMethod::Brent => brent(origin, step),
    };
    OrbitStats { p, rho: rho.ok() }
}

/// Orbit statistics for every prime up to a limit, ascending in `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct Census {
    pub map: String,
    pub start: Option<ProjPointQ>,
    pub limit: u64,
    pub records: Vec<OrbitStats>,
    pub convention: Convention,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CensusOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
    pub method: CycleMethod,
}

pub fn orbit_census(phi: &ProjectiveMorphism, start: &ProjPointQ, limit: u64) -> Result<Census> {
    orbit_census_with(phi, start, limit, CensusOptions::default())
}

pub fn orbit_census_with(
    phi: &ProjectiveMorphism,
    start: &ProjPointQ,
    limit: u64,
    options: CensusOptions,
) -> Result<Census> {
    if start.dim() != phi.dim() {
        return Err(Error::DimensionMismatch {
            expected: phi.dim() + 1,
            got: start.dim() + 1,
        });
    }
    let table = sieve_primes(limit)?;
    let compute = || -> Vec<OrbitStats> {
        table
            .primes()
            .par_iter()
            .map(|&p| orbit_stats_with(phi, start, p, options.method))
            .collect()
    };
    let records = match options.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?
            .install(compute),
        None => compute(),
    };
    Ok(Census {
        map: phi.to_string(),
        start: Some(start.clone()),
        limit,
        records,
        convention: Convention::Orbit,
    })
}

impl Census {
    /// Builds a census from records; `limit` defaults to the largest prime.
    pub fn from_records(records: Vec<OrbitStats>, limit: Option<u64>) -> Result<Census> {
        if records.windows(2).any(|w| w[0].p >= w[1].p) {
            return Err(Error::invalid("census records must be strictly increasing in p"));
        }
        let last = records.last().map_or(0, |r| r.p);
        let limit = limit.unwrap_or(last);
        if limit < last {
            return Err(Error::invalid(format!(
                "limit {limit} is below the largest prime {last}"
            )));
        }
        Ok(Census {
            map: String::new(),
            start: None,
            limit,
            records,
            convention: Convention::Orbit,
        })
    }

    pub fn with_convention(mut self, convention: Convention) -> Self {
        self.convention = convention;
        self
    }

    /// Primes whose orbit size is infinite.
    pub fn exceptional(&self) -> Vec<u64> {
        self.records.iter().filter(|r| r.is_bad()).map(|r| r.p).collect()
    }

    /// `(p, m_p)` under the census convention; `None` is infinity.
    pub fn sizes(&self) -> impl Iterator<Item = (u64, Option<u64>)> + '_ {
        self.records.iter().map(|r| (r.p, r.m_with(self.convention)))
    }

    pub fn get(&self, p: u64) -> Option<&OrbitStats> {
        self.records
            .binary_search_by_key(&p, |r| r.p)
            .ok()
            .map(|i| &self.records[i])
    }

    /// The census restricted to primes `<= limit`.
    pub fn prefix(&self, limit: u64) -> Census {
        let end = self.records.partition_point(|r| r.p <= limit);
        Census {
            map: self.map.clone(),
            start: self.start.clone(),
            limit,
            records: self.records[..end].to_vec(),
            convention: self.convention,
        }
    }

    /// CSV with header `p,s,r,m,bad`; bad primes have empty `s,r,m`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "p,s,r,m,bad")?;
        for r in &self.records {
            match r.rho {
                Some(rho) => writeln!(out, "{},{},{},{},0", r.p, rho.tail, rho.cycle, rho.len())?,
                None => writeln!(out, "{},,,,1", r.p)?,
            }
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii")
    }

    pub fn read_csv<R: BufRead>(input: R, limit: Option<u64>) -> Result<Census> {
        let mut lines = input.lines().enumerate();
        let header = lines.next().map(|(_, l)| l).transpose()?;
        if header.as_deref().map(str::trim) != Some("p,s,r,m,bad") {
            return Err(Error::parse(1, 1, "expected header `p,s,r,m,bad`"));
        }
        let mut records = Vec::new();
        for (i, line) in lines {
            let line = line?;
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            records.push(parse_row(&line, line_no)?);
        }
        Census::from_records(records, limit)
    }
}

fn parse_row(line: &str, line_no: usize) -> Result<OrbitStats> {
    let fields: Vec<&str> = line.trim().split(',').collect();
    if fields.len() != 5 {
        return Err(Error::parse(line_no, 1, "expected 5 fields: p,s,r,m,bad"));
    }
    let column = |k: usize| fields[..k].iter().map(|f| f.len() + 1).sum::<usize>() + 1;
    let num = |k: usize| -> Result<u64> {
        fields[k]
            .parse()
            .map_err(|_| Error::parse(line_no, column(k), format!("invalid number `{}`", fields[k])))
    };
    let p = num(0)?;
    match fields[4] {
        "1" => {
            if fields[1..4].iter().any(|f| !f.is_empty()) {
                return Err(Error::parse(line_no, column(1), "bad prime must have empty s,r,m"));
            }
            Ok(OrbitStats::bad(p))
        }
        "0" => {
            let (s, r, m) = (num(1)?, num(2)?, num(3)?);
            if r == 0 || s + r != m {
                return Err(Error::parse(line_no, column(3), "need r >= 1 and m = s + r"));
            }
            Ok(OrbitStats::good(p, s, r))
        }
        other => Err(Error::parse(
            line_no,
            column(4),
            format!("bad flag must be 0 or 1, found `{other}`"),
        )),
    }
}
