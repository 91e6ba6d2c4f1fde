//! Reproduction of the orbit-size tables for `z^2 + c`, the start-point
//! calibration search and the experiment configuration file.

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use crate::analytic::table_statistic_series;
use crate::dynamics::{parse_point, AffinePolyMap, ProjPointQ, ProjectiveMorphism};
use crate::error::{Error, Result};
use crate::heights::{classify_orbit, OrbitKind};
use crate::orbit::{orbit_census_with, CensusOptions, Convention};

/// Every 200th prime up to 20000.
pub const TABLE1_CHECKPOINTS: [u64; 11] = [
    1223, 2741, 4409, 6133, 7919, 9733, 11657, 13499, 15401, 17389, 19423,
];

pub const TABLE1_PARAMS: [i64; 5] = [-2, -1, 0, 1, 2];

/// Target values, rows by checkpoint, columns by `c` in [`TABLE1_PARAMS`] order.
pub const TABLE1: [[f64; 5]; 11] = [
    [1.4733, 1.6042, 1.4156, 1.3539, 1.3533],
    [1.7770, 1.6576, 1.5116, 1.4089, 1.4232],
    [1.9864, 1.6937, 1.5711, 1.5165, 1.4911],
    [2.1050, 1.6964, 1.6860, 1.6068, 1.5751],
    [2.1657, 1.7330, 1.8091, 1.6314, 1.5988],
    [2.2507, 1.7372, 1.8555, 1.6596, 1.6148],
    [2.2868, 1.7622, 1.8825, 1.7212, 1.6722],
    [2.3366, 1.7782, 1.9351, 1.7223, 1.7049],
    [2.3928, 1.8822, 1.9973, 1.7307, 1.7226],
    [2.4279, 1.9119, 2.0528, 1.7376, 1.7475],
    [2.4551, 1.9211, 2.0726, 1.7421, 1.7582],
];

pub const TABLE2_CHECKPOINTS: [u64; 6] = [6133, 13499, 21383, 29443, 37813, 46447];
pub const TABLE2: [f64; 6] = [1.6068, 1.7223, 1.7627, 1.7790, 1.8092, 1.8398];
pub const TABLE2_PARAM: i64 = 1;

/// Start point found by [`calibrate`]; reproduces both tables.
pub const CALIBRATED_START: i64 = 3;
pub const CALIBRATED_CONVENTION: Convention = Convention::Orbit;

pub const TABLE_EXPONENT: f64 = 2.0;
pub const REPRODUCTION_TOLERANCE: f64 = 1e-3;
pub const CALIBRATION_RANGE: std::ops::RangeInclusive<i64> = -10..=10;

/// Exact iterations allowed when deciding whether a start has an infinite orbit.
const CLASSIFY_BUDGET: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            other => Err(Error::invalid(format!(
                "unknown format `{other}` (expected csv or markdown)"
            ))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Markdown => "markdown",
        })
    }
}

/// Settings shared by the table commands. Read from a `key = value` file;
/// command-line flags override individual fields.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub map: Option<String>,
    pub start: Option<String>,
    pub checkpoints: Option<Vec<u64>>,
    pub convention: Convention,
    pub exponent: f64,
    pub format: OutputFormat,
    pub jobs: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            map: None,
            start: None,
            checkpoints: None,
            convention: Convention::Orbit,
            exponent: TABLE_EXPONENT,
            format: OutputFormat::Csv,
            jobs: None,
        }
    }
}

impl ExperimentConfig {
    /// Keys: `map`, `start`, `checkpoints` (comma separated), `convention`,
    /// `exponent`, `format`, `jobs`. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut config = ExperimentConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::parse(line_no, 1, "expected `key = value`"));
            };
            let (key, value) = (key.trim(), value.trim());
            let column = raw.find(value).map_or(1, |c| c + 1);
            let at = |e: Error| Error::parse(line_no, column, e.to_string());
            match key {
                "map" => config.map = Some(value.to_string()),
                "start" => config.start = Some(value.to_string()),
                "checkpoints" => config.checkpoints = Some(parse_checkpoints(value).map_err(at)?),
                "convention" => config.convention = value.parse().map_err(at)?,
                "exponent" => {
                    config.exponent = value
                        .parse()
                        .map_err(|_| Error::parse(line_no, column, "exponent must be a number"))?
                }
                "format" => config.format = value.parse().map_err(at)?,
                "jobs" => {
                    config.jobs = Some(
                        value
                            .parse()
                            .map_err(|_| Error::parse(line_no, column, "jobs must be a positive integer"))?,
                    )
                }
                other => {
                    return Err(Error::parse(line_no, 1, format!("unknown key `{other}`")));
                }
            }
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn start_point(&self) -> Result<ProjPointQ> {
        match &self.start {
            Some(s) => parse_point(s),
            None => Ok(ProjPointQ::affine(CALIBRATED_START)),
        }
    }
}

/// Parses a comma-separated, strictly increasing list of limits.
pub fn parse_checkpoints(text: &str) -> Result<Vec<u64>> {
    let values = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::invalid(format!("bad checkpoint `{}`", t.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() || values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("checkpoints must be strictly increasing"));
    }
    Ok(values)
}

/// Errors unless the forward orbit of `start` is known to be infinite.
pub fn require_infinite_orbit(phi: &ProjectiveMorphism, start: &ProjPointQ) -> Result<()> {
    match classify_orbit(phi, start, CLASSIFY_BUDGET)? {
        OrbitKind::Wandering => Ok(()),
        OrbitKind::Preperiodic { tail, period } => Err(Error::FiniteOrbit {
            earlier: tail,
            later: tail + period,
        }),
        OrbitKind::Undetermined => Err(Error::invalid(format!(
            "could not confirm that the orbit of {start} under {phi} is infinite"
        ))),
    }
}

/// Statistic values at each checkpoint (rows) for each map (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub checkpoints: Vec<u64>,
    pub values: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[j]).collect()
    }

    pub fn columns_nondecreasing(&self) -> bool {
        (0..self.columns.len()).all(|j| self.column(j).windows(2).all(|w| w[0] <= w[1]))
    }

    /// Largest absolute difference from `golden` in each column.
    pub fn column_deviation<R: AsRef<[f64]>>(&self, golden: &[R]) -> Vec<f64> {
        (0..self.columns.len())
            .map(|j| {
                self.values
                    .iter()
                    .zip(golden)
                    .map(|(row, g)| (row[j] - g.as_ref()[j]).abs())
                    .fold(0.0, f64::max)
            })
            .collect()
    }

    /// Values to exactly four decimals.
    pub fn render(&self, format: OutputFormat) -> String {
        let mut out = String::new();
        match format {
            OutputFormat::Csv => {
                let _ = writeln!(out, "X,{}", self.columns.join(","));
                for (x, row) in self.checkpoints.iter().zip(&self.values) {
                    let cells: Vec<String> = row.iter().map(|v| format!("{v:.4}")).collect();
                    let _ = writeln!(out, "{x},{}", cells.join(","));
                }
            }
            OutputFormat::Markdown => {
                let _ = writeln!(out, "| X | {} |", self.columns.join(" | "));
                let _ = writeln!(out, "|---:|{}", "---:|".repeat(self.columns.len()));
                for (x, row) in self.checkpoints.iter().zip(&self.values) {
                    let cells: Vec<String> = row.iter().map(|v| format!("{v:.4}")).collect();
                    let _ = writeln!(out, "| {x} | {} |", cells.join(" | "));
                }
            }
        }
        out
    }
}

fn quadratic(c: i64) -> (String, ProjectiveMorphism) {
    let map = AffinePolyMap::quadratic(c);
    (map.to_string(), map.to_morphism())
}

/// Builds a table of the statistic for several maps from one start point.
pub fn statistic_table(
    maps: &[(String, ProjectiveMorphism)],
    start: &ProjPointQ,
    checkpoints: &[u64],
    convention: Convention,
    exponent: f64,
    options: CensusOptions,
) -> Result<Table> {
    let limit = *checkpoints
        .last()
        .ok_or_else(|| Error::invalid("no checkpoints"))?;
    let mut columns = Vec::with_capacity(maps.len());
    let mut by_column = Vec::with_capacity(maps.len());
    for (label, phi) in maps {
        require_infinite_orbit(phi, start)?;
        let census = orbit_census_with(phi, start, limit, options)?.with_convention(convention);
        by_column.push(table_statistic_series(&census, exponent, checkpoints)?);
        columns.push(label.clone());
    }
    let values = (0..checkpoints.len())
        .map(|i| by_column.iter().map(|col| col[i]).collect())
        .collect();
    Ok(Table {
        columns,
        checkpoints: checkpoints.to_vec(),
        values,
    })
}

pub fn table1(start: &ProjPointQ, convention: Convention, options: CensusOptions) -> Result<Table> {
    let maps: Vec<_> = TABLE1_PARAMS.iter().map(|&c| quadratic(c)).collect();
    statistic_table(&maps, start, &TABLE1_CHECKPOINTS, convention, TABLE_EXPONENT, options)
}

pub fn table2(start: &ProjPointQ, convention: Convention, options: CensusOptions) -> Result<Table> {
    statistic_table(&[quadratic(TABLE2_PARAM)], start, &TABLE2_CHECKPOINTS, convention, TABLE_EXPONENT, options)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub alpha: i64,
    pub convention: Convention,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnCalibration {
    pub c: i64,
    /// Starts in the search range rejected for a finite or undetermined orbit.
    pub excluded: Vec<i64>,
    pub best: Option<Candidate>,
}

impl ColumnCalibration {
    pub fn reproduced(&self) -> bool {
        self.best
            .is_some_and(|b| b.max_deviation <= REPRODUCTION_TOLERANCE)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationReport {
    pub columns: Vec<ColumnCalibration>,
    /// Deviation of [`table2`] under the best `z^2+1` candidate.
    pub table2: Option<(Candidate, f64)>,
}

impl CalibrationReport {
    pub fn all_reproduced(&self) -> bool {
        self.columns.iter().all(ColumnCalibration::reproduced)
            && self
                .table2
                .is_some_and(|(_, dev)| dev <= REPRODUCTION_TOLERANCE)
    }
}

impl fmt::Display for CalibrationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "column,alpha,convention,max_deviation,status,excluded")?;
        for col in &self.columns {
            let excluded: Vec<String> = col.excluded.iter().map(i64::to_string).collect();
            let status = if col.reproduced() { "REPRODUCED" } else { "NOT REPRODUCED" };
            match col.best {
                Some(b) => writeln!(
                    f,
                    "{},{},{},{:.6},{status},{}",
                    AffinePolyMap::quadratic(col.c),
                    b.alpha,
                    b.convention,
                    b.max_deviation,
                    excluded.join(" ")
                )?,
                None => writeln!(
                    f,
                    "{},,,,{status},{}",
                    AffinePolyMap::quadratic(col.c),
                    excluded.join(" ")
                )?,
            }
        }
        match self.table2 {
            Some((b, dev)) => {
                let status = if dev <= REPRODUCTION_TOLERANCE { "REPRODUCED" } else { "NOT REPRODUCED" };
                writeln!(f, "table2,{},{},{dev:.6},{status},", b.alpha, b.convention)
            }
            None => writeln!(f, "table2,,,,NOT REPRODUCED,"),
        }
    }
}

/// Searches integer starts in [`CALIBRATION_RANGE`] with infinite orbit and
/// both conventions for the best fit to each [`TABLE1`] column, then checks
/// [`TABLE2`] with the winner for `z^2+1`.
pub fn calibrate(options: CensusOptions) -> Result<CalibrationReport> {
    let limit = TABLE1_CHECKPOINTS[TABLE1_CHECKPOINTS.len() - 1];
    let mut columns = Vec::new();
    for (j, &c) in TABLE1_PARAMS.iter().enumerate() {
        let (_, phi) = quadratic(c);
        let golden: Vec<f64> = TABLE1.iter().map(|row| row[j]).collect();
        let mut excluded = Vec::new();
        let mut best: Option<Candidate> = None;
        for alpha in CALIBRATION_RANGE {
            let start = ProjPointQ::affine(alpha);
            if require_infinite_orbit(&phi, &start).is_err() {
                excluded.push(alpha);
                continue;
            }
            let census = orbit_census_with(&phi, &start, limit, options)?;
            for convention in [Convention::Orbit, Convention::Cycle] {
                let census = census.clone().with_convention(convention);
                let series = table_statistic_series(&census, TABLE_EXPONENT, &TABLE1_CHECKPOINTS)?;
                let max_deviation = series
                    .iter()
                    .zip(&golden)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                if best.is_none_or(|b| max_deviation < b.max_deviation) {
                    best = Some(Candidate {
                        alpha,
                        convention,
                        max_deviation,
                    });
                }
            }
        }
        columns.push(ColumnCalibration { c, excluded, best });
    }
    let table2 = match columns
        .iter()
        .find(|col| col.c == TABLE2_PARAM)
        .and_then(|col| col.best)
    {
        Some(b) => {
            let t = table2(&ProjPointQ::affine(b.alpha), b.convention, options)?;
            Some((b, t.column_deviation(&TABLE2.map(|v| [v]))[0]))
        }
        None => None,
    };
    Ok(CalibrationReport { columns, table2 })
}
