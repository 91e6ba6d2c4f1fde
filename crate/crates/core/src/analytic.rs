//! Finite-range analytic statistics over a census: the weighted sum
//! `S(lambda, s) = sum log p / (p e^(s m_p^lambda))`, its Abel-summation
//! rearrangement, Mertens-weighted densities, the `sum log p / m_p^2`
//! statistic, and two elementary series bounds.
//!
//! Bad primes have infinite orbit size and contribute nothing to any sum
//! weighted by a decreasing function of `m_p`. All sums run in ascending `p`.

use crate::error::{Error, Result};
use crate::heights::DmRecord;
use crate::orbit::Census;

fn weight(p: u64) -> f64 {
    let x = p as f64;
    x.ln() / x
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialSum {
    pub lambda: f64,
    pub s: f64,
    pub limit: u64,
    pub value: f64,
}

fn check_lambda_s(lambda: f64, s: f64) -> Result<()> {
    if !(lambda >= 1.0 && lambda.is_finite()) {
        return Err(Error::invalid(format!("lambda must be >= 1, got {lambda}")));
    }
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::invalid(format!("s must be positive, got {s}")));
    }
    Ok(())
}

pub fn s_partial(census: &Census, lambda: f64, s: f64) -> Result<PartialSum> {
    check_lambda_s(lambda, s)?;
    let value = census
        .sizes()
        .filter_map(|(p, m)| m.map(|m| weight(p) * (-s * (m as f64).powf(lambda)).exp()))
        .sum();
    Ok(PartialSum {
        lambda,
        s,
        limit: census.limit,
        value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbelCheck {
    pub direct: f64,
    pub rearranged: f64,
    /// `|direct - rearranged| / |direct|`, or 0 when both vanish.
    pub residual: f64,
}

/// Evaluates `S(lambda, s)` twice: directly, and as
/// `sum_{m=1}^{M} (G(m) - G(m+1)) T(m) + G(M+1) T(M)` with
/// `G(t) = e^(-s t^lambda)`, `T(m) = sum_{m_p <= m} log p / p` and `M` the
/// largest finite orbit size.
pub fn abel_identity_check(census: &Census, lambda: f64, s: f64) -> Result<AbelCheck> {
    let direct = s_partial(census, lambda, s)?.value;
    let max_m = census.sizes().filter_map(|(_, m)| m).max().unwrap_or(0) as usize;
    let mut bucket = vec![0.0f64; max_m + 1];
    for (p, m) in census.sizes() {
        if let Some(m) = m {
            bucket[m as usize] += weight(p);
        }
    }
    let g = |t: f64| (-s * t.powf(lambda)).exp();
    let mut cumulative = 0.0;
    let mut rearranged = 0.0;
    for (m, w) in bucket.iter().enumerate().skip(1) {
        cumulative += w;
        let (t0, t1) = (m as f64, m as f64 + 1.0);
        // G(m) - G(m+1) without cancellation
        let drop = -g(t0) * (-s * (t1.powf(lambda) - t0.powf(lambda))).exp_m1();
        rearranged += drop * cumulative;
    }
    rearranged += g(max_m as f64 + 1.0) * cumulative;
    let residual = if direct == 0.0 && rearranged == 0.0 {
        0.0
    } else {
        (direct - rearranged).abs() / direct.abs().max(f64::MIN_POSITIVE)
    };
    Ok(AbelCheck {
        direct,
        rearranged,
        residual,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate {
    pub predicate: String,
    pub limit: u64,
    pub mass: f64,
}

/// `(sum_{p <= X, pred} log p / p) / (sum_{p <= X} log p / p)`. The predicate
/// sees `None` for an infinite orbit size.
pub fn weighted_density(
    census: &Census,
    predicate: impl Into<String>,
    holds: impl Fn(u64, Option<u64>) -> bool,
) -> Result<DensityEstimate> {
    if census.records.is_empty() {
        return Err(Error::invalid("density needs a nonempty census"));
    }
    let (mut hit, mut total) = (0.0, 0.0);
    for (p, m) in census.sizes() {
        let w = weight(p);
        total += w;
        if holds(p, m) {
            hit += w;
        }
    }
    Ok(DensityEstimate {
        predicate: predicate.into(),
        limit: census.limit,
        mass: hit / total,
    })
}

/// Mass of `{p : m_p >= (log p)^gamma}`.
pub fn density_gamma(census: &Census, gamma: f64) -> Result<DensityEstimate> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::invalid(format!("gamma must lie in (0, 1), got {gamma}")));
    }
    weighted_density(census, format!("m_p >= (log p)^{gamma}"), |p, m| {
        m.is_none_or(|m| m as f64 >= (p as f64).ln().powf(gamma))
    })
}

/// Mass of `{p : m_p >= eps log p}`.
pub fn density_eps(census: &Census, eps: f64) -> Result<DensityEstimate> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid(format!("eps must be positive, got {eps}")));
    }
    weighted_density(census, format!("m_p >= {eps} log p"), |p, m| {
        m.is_none_or(|m| m as f64 >= eps * (p as f64).ln())
    })
}

/// `(1 / log X) sum_{good p <= X} log p / m_p^exponent`.
pub fn table_statistic(census: &Census, exponent: f64) -> Result<f64> {
    if exponent.is_nan() || exponent <= 0.0 {
        return Err(Error::invalid(format!("exponent must be positive, got {exponent}")));
    }
    if census.limit < 2 {
        return Err(Error::invalid("census limit must be at least 2"));
    }
    let sum: f64 = census
        .sizes()
        .filter_map(|(p, m)| m.map(|m| (p as f64).ln() / (m as f64).powf(exponent)))
        .sum();
    Ok(sum / (census.limit as f64).ln())
}

/// The statistic at each checkpoint, from one census that reaches the last.
pub fn table_statistic_series(census: &Census, exponent: f64, checkpoints: &[u64]) -> Result<Vec<f64>> {
    checkpoints
        .iter()
        .map(|&x| {
            if x > census.limit {
                return Err(Error::invalid(format!(
                    "checkpoint {x} exceeds census limit {}",
                    census.limit
                )));
            }
            table_statistic(&census.prefix(x), exponent)
        })
        .collect()
}

/// `n` points evenly spaced in log scale from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| {
            if k == n - 1 {
                hi
            } else {
                (a + (b - a) * k as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// `s^(1/lambda) S(lambda, s)` across a grid of `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundShadow {
    pub lambda: f64,
    pub values: Vec<(f64, f64)>,
}

impl BoundShadow {
    pub fn max(&self) -> f64 {
        self.values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min)
    }

    pub fn ratio(&self) -> f64 {
        self.max() / self.min()
    }
}

pub fn bound_shadow(census: &Census, lambda: f64, s_grid: &[f64]) -> Result<BoundShadow> {
    let values = s_grid
        .iter()
        .map(|&s| Ok((s, s.powf(1.0 / lambda) * s_partial(census, lambda, s)?.value)))
        .collect::<Result<_>>()?;
    Ok(BoundShadow { lambda, values })
}

const SERIES_FLOOR: f64 = 1e-30;

/// `sum_{m >= 1} m^mu e^(-s m^lambda)`, stopping past the peak once terms
/// drop below 1e-30.
pub fn msum(lambda: f64, mu: f64, s: f64) -> f64 {
    let peak = (mu / (lambda * s)).powf(1.0 / lambda);
    let mut total = 0.0;
    let mut m = 1u64;
    loop {
        let x = m as f64;
        let term = (mu * x.ln() - s * x.powf(lambda)).exp();
        total += term;
        if term < SERIES_FLOOR && x >= peak {
            return total;
        }
        m += 1;
    }
}

/// `int_0^inf u^mu e^(-u^lambda) du + 1`, by adaptive Simpson quadrature.
pub fn msum_constant(lambda: f64, mu: f64) -> f64 {
    let f = |u: f64| {
        if u == 0.0 {
            if mu == 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            (mu * u.ln() - u.powf(lambda)).exp()
        }
    };
    // the integrand is below e^-150 * upper^mu past this point
    let upper = 150f64.powf(1.0 / lambda);
    let pieces = 64;
    let h = upper / pieces as f64;
    (0..pieces)
        .map(|k| {
            let (a, b) = (k as f64 * h, (k + 1) as f64 * h);
            adaptive_simpson(&f, a, b, 1e-14, 40)
        })
        .sum::<f64>()
        + 1.0
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let c = 0.5 * (a + b);
    let (fa, fb, fc) = (f(a), f(b), f(c));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    simpson_step(f, a, b, fa, fb, fc, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fc: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let c = 0.5 * (a + b);
    let (d, e) = (0.5 * (a + c), 0.5 * (c + b));
    let (fd, fe) = (f(d), f(e));
    let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, c, fa, fc, fd, left, tol / 2.0, depth - 1)
        + simpson_step(f, c, b, fc, fb, fe, right, tol / 2.0, depth - 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MsumReport {
    pub lambda: f64,
    pub mu: f64,
    pub c0: f64,
    /// Largest `msum * s^((mu+1)/lambda)` over the grid.
    pub worst: f64,
    pub holds: bool,
}

pub fn msum_bound_check(lambda: f64, mu: f64, s_grid: &[f64]) -> Result<MsumReport> {
    if lambda.is_nan() || lambda <= 0.0 || mu.is_nan() || mu < 0.0 {
        return Err(Error::invalid("need lambda > 0 and mu >= 0"));
    }
    if s_grid.iter().any(|&s| s.is_nan() || s <= 0.0) {
        return Err(Error::invalid("grid values of s must be positive"));
    }
    let c0 = msum_constant(lambda, mu);
    let worst = s_grid
        .iter()
        .map(|&s| msum(lambda, mu, s) * s.powf((mu + 1.0) / lambda))
        .fold(0.0, f64::max);
    Ok(MsumReport {
        lambda,
        mu,
        c0,
        worst,
        holds: worst <= c0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumLogPReport {
    pub m: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub const SUMLOGP_C1: f64 = 2.0;
pub const SUMLOGP_C2: f64 = 2.0;

/// `sum_{p <= X, p | D(m)} log p / p <= 2 log log D(m) + 2`. `None` when
/// `D(m) <= e`.
pub fn sumlogp_check(dm: &DmRecord, census: &Census) -> Option<SumLogPReport> {
    let loglog = dm.loglog_d()?;
    let lhs: f64 = census
        .records
        .iter()
        .filter(|r| dm.divisible_by(r.p))
        .map(|r| weight(r.p))
        .sum();
    let rhs = SUMLOGP_C1 * loglog + SUMLOGP_C2;
    Some(SumLogPReport {
        m: dm.m,
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}
