//! Exact heights along an orbit over Q, cross-difference integers, and the
//! divisibility integer `D(m)` whose prime divisors are exactly the primes
//! with orbit size at most `m`.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::dynamics::{ProjPointQ, ProjectiveMorphism};
use crate::error::{Error, Result};
use crate::orbit::Census;

/// Natural log of a positive big integer, accurate for any size.
pub fn big_log(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Log of the largest absolute coordinate of a normalized point.
pub fn height(point: &ProjPointQ) -> f64 {
    big_log(point.max_abs().magnitude())
}

/// The forward orbit of a point over Q, computed on demand and cached.
#[derive(Debug, Clone)]
pub struct ExactOrbit<'a> {
    phi: &'a ProjectiveMorphism,
    points: Vec<ProjPointQ>,
}

impl<'a> ExactOrbit<'a> {
    pub fn new(phi: &'a ProjectiveMorphism, start: ProjPointQ) -> Result<Self> {
        if start.dim() != phi.dim() {
            return Err(Error::DimensionMismatch {
                expected: phi.dim() + 1,
                got: start.dim() + 1,
            });
        }
        Ok(ExactOrbit {
            phi,
            points: vec![start],
        })
    }

    /// Computes iterates up to and including `n`.
    pub fn extend_to(&mut self, n: usize) -> Result<()> {
        while self.points.len() <= n {
            let k = self.points.len();
            let next = self
                .phi
                .eval_exact(&self.points[k - 1])
                .map_err(|_| Error::Indeterminate {
                    modulus: None,
                    iterate: Some(k - 1),
                })?;
            self.points.push(next);
        }
        Ok(())
    }

    /// The iterate `phi^n(P)`.
    pub fn get(&mut self, n: usize) -> Result<&ProjPointQ> {
        self.extend_to(n)?;
        Ok(&self.points[n])
    }

    /// Iterates computed so far.
    pub fn computed(&self) -> &[ProjPointQ] {
        &self.points
    }

    pub fn morphism(&self) -> &ProjectiveMorphism {
        self.phi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeightTrace {
    pub n: usize,
    pub h: f64,
}

/// Outcome of fitting `h(phi^n(P)) <= d^n (h(P) + C)` over `n <= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthFit {
    pub d: f64,
    /// Smallest `C >= 0` for which the bound holds on the computed range.
    pub c: f64,
    /// Whether `c` is at most the configured cap.
    pub holds: bool,
    pub trace: Vec<HeightTrace>,
}

pub fn height_growth_check(
    phi: &ProjectiveMorphism,
    start: &ProjPointQ,
    n_max: usize,
    cap: f64,
) -> Result<GrowthFit> {
    let mut orbit = ExactOrbit::new(phi, start.clone())?;
    orbit.extend_to(n_max)?;
    let d = f64::from(phi.degree().max(2));
    let trace: Vec<HeightTrace> = orbit
        .computed()
        .iter()
        .enumerate()
        .map(|(n, pt)| HeightTrace { n, h: height(pt) })
        .collect();
    let h0 = trace[0].h;
    let c = trace
        .iter()
        .map(|t| t.h / d.powi(t.n as i32) - h0)
        .fold(0.0f64, f64::max);
    Ok(GrowthFit {
        d,
        c,
        holds: c <= cap,
        trace,
    })
}

/// gcd of all 2x2 minors `a_i b_j - a_j b_i`. Over Q with coprime coordinates
/// this is the norm of the ideal measuring how often the two points meet
/// modulo primes.
pub fn cross_difference(a: &ProjPointQ, b: &ProjPointQ) -> Result<BigUint> {
    let (x, y) = (a.coords(), b.coords());
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let mut g = BigInt::zero();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let minor = &x[i] * &y[j] - &x[j] * &y[i];
            g = g.gcd(&minor);
            if g.is_one() {
                return Ok(BigUint::one());
            }
        }
    }
    if g.is_zero() {
        return Err(Error::DegeneratePair);
    }
    Ok(g.magnitude().clone())
}

/// Checks `log cross_difference(A, B) <= h(A) + h(B) + 2 log(N + 1)`.
pub fn distance_inequality_check(a: &ProjPointQ, b: &ProjPointQ) -> Result<bool> {
    let lhs = big_log(&cross_difference(a, b)?);
    Ok(lhs <= distance_bound(a, b))
}

fn distance_bound(a: &ProjPointQ, b: &ProjPointQ) -> f64 {
    let n = a.dim() as f64;
    height(a) + height(b) + 2.0 * (n + 1.0).ln()
}

/// `B(r, s)`: cross difference of `phi^(r+s)(P)` and `phi^s(P)`.
pub fn b_rs(orbit: &mut ExactOrbit<'_>, r: usize, s: usize) -> Result<BigUint> {
    if r == 0 {
        return Err(Error::invalid("r must be at least 1"));
    }
    orbit.extend_to(r + s)?;
    let pts = orbit.computed();
    cross_difference(&pts[r + s], &pts[s]).map_err(|e| match e {
        Error::DegeneratePair => Error::FiniteOrbit {
            earlier: s,
            later: r + s,
        },
        other => other,
    })
}

/// `D(m)` with its factors `B(r, s)`, `r + s = m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DmRecord {
    pub m: usize,
    pub factors: BTreeMap<(usize, usize), BigUint>,
    pub d: BigUint,
}

impl DmRecord {
    pub fn log_d(&self) -> f64 {
        big_log(&self.d)
    }

    /// `log log D(m)`, or `None` when `D(m) <= e`.
    pub fn loglog_d(&self) -> Option<f64> {
        let l = self.log_d();
        (l > 1.0).then(|| l.ln())
    }

    pub fn divisible_by(&self, p: u64) -> bool {
        (&self.d % p).is_zero()
    }
}

pub fn d_m(orbit: &mut ExactOrbit<'_>, m: usize) -> Result<DmRecord> {
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    orbit.extend_to(m)?;
    let pts = orbit.computed();
    let factors: Vec<((usize, usize), BigUint)> = (1..=m)
        .into_par_iter()
        .map(|r| {
            let s = m - r;
            cross_difference(&pts[m], &pts[s])
                .map(|b| ((r, s), b))
                .map_err(|_| Error::FiniteOrbit { earlier: s, later: m })
        })
        .collect::<Result<_>>()?;
    let d = factors.iter().fold(BigUint::one(), |acc, (_, b)| acc * b);
    Ok(DmRecord {
        m,
        factors: factors.into_iter().collect(),
        d,
    })
}

/// Primes `p <= X` where `p | D(m)` and `m_p <= m` disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub m: usize,
    pub violations: Vec<u64>,
    /// Violations outside the census's exceptional set.
    pub unexplained: Vec<u64>,
}

impl EquivalenceReport {
    pub fn holds(&self) -> bool {
        self.unexplained.is_empty()
    }
}

/// Compares divisibility of `D(m)` by each census prime with `m_p <= m`.
/// Orbit size here is always tail plus cycle.
pub fn dm_equivalence_check(dm: &DmRecord, census: &Census) -> EquivalenceReport {
    let exceptional = census.exceptional();
    let violations: Vec<u64> = census
        .records
        .iter()
        .filter(|r| {
            let small = r.m().is_some_and(|m| m <= dm.m as u64);
            small != dm.divisible_by(r.p)
        })
        .map(|r| r.p)
        .collect();
    let unexplained = violations
        .iter()
        .copied()
        .filter(|p| exceptional.binary_search(p).is_err())
        .collect();
    EquivalenceReport {
        m: dm.m,
        violations,
        unexplained,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DmGrowthPoint {
    pub m: usize,
    pub num_factors: usize,
    pub bits: u64,
    pub loglog: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DmGrowth {
    pub points: Vec<DmGrowthPoint>,
}

impl DmGrowth {
    /// Values of `m` skipped because `D(m) <= e`.
    pub fn skipped(&self) -> Vec<usize> {
        self.points
            .iter()
            .filter(|p| p.loglog.is_none())
            .map(|p| p.m)
            .collect()
    }

    /// Least-squares slope of `log log D(m)` against `m` for `m` in `lo..=hi`.
    pub fn slope(&self, lo: usize, hi: usize) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .points
            .iter()
            .filter(|p| (lo..=hi).contains(&p.m))
            .filter_map(|p| p.loglog.map(|y| (p.m as f64, y)))
            .collect();
        least_squares_slope(&pts)
    }

    /// CSV `m,num_factors,bits_of_D,loglogD`; skipped entries have an empty last field.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "m,num_factors,bits_of_D,loglogD")?;
        for p in &self.points {
            match p.loglog {
                Some(v) => writeln!(out, "{},{},{},{}", p.m, p.num_factors, p.bits, v)?,
                None => writeln!(out, "{},{},{},", p.m, p.num_factors, p.bits)?,
            }
        }
        Ok(())
    }
}

pub fn dm_growth(orbit: &mut ExactOrbit<'_>, m_max: usize) -> Result<DmGrowth> {
    let points = (1..=m_max)
        .map(|m| {
            let dm = d_m(orbit, m)?;
            Ok(DmGrowthPoint {
                m,
                num_factors: dm.factors.len(),
                bits: dm.d.bits(),
                loglog: dm.loglog_d(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(DmGrowth { points })
}

pub fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoglogRatio {
    pub value: f64,
    pub p: u64,
}

/// Minimum of `m_p / log log p` over good primes `p >= 16`.
pub fn min_loglog_ratio(census: &Census) -> Option<LoglogRatio> {
    census
        .sizes()
        .filter(|&(p, _)| p >= 16)
        .filter_map(|(p, m)| m.map(|m| (p, m)))
        .map(|(p, m)| LoglogRatio {
            value: m as f64 / (p as f64).ln().ln(),
            p,
        })
        .min_by(|a, b| a.value.total_cmp(&b.value))
}

/// Whether the forward orbit of a point over Q is finite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitKind {
    /// `phi^(tail + period)(P) = phi^tail(P)`.
    Preperiodic { tail: usize, period: usize },
    /// Heights strictly increased over the last few iterates past the escape
    /// threshold; the orbit is infinite.
    Wandering,
    /// Neither detected within the iteration budget.
    Undetermined,
}

impl OrbitKind {
    pub fn is_infinite(self) -> bool {
        self == OrbitKind::Wandering
    }
}

const ESCAPE_HEIGHT: f64 = 64.0;
const ESCAPE_RUN: usize = 4;

/// Iterates exactly for at most `max_iter` steps looking for a repeat or for
/// runaway height growth.
pub fn classify_orbit(phi: &ProjectiveMorphism, start: &ProjPointQ, max_iter: usize) -> Result<OrbitKind> {
    let mut seen: HashMap<ProjPointQ, usize> = HashMap::new();
    let mut current = start.clone();
    let mut heights = Vec::new();
    for n in 0..=max_iter {
        if let Some(&first) = seen.get(&current) {
            return Ok(OrbitKind::Preperiodic {
                tail: first,
                period: n - first,
            });
        }
        let h = height(&current);
        heights.push(h);
        if h > ESCAPE_HEIGHT
            && heights.len() > ESCAPE_RUN
            && heights[heights.len() - ESCAPE_RUN - 1..]
                .windows(2)
                .all(|w| w[1] > w[0])
        {
            return Ok(OrbitKind::Wandering);
        }
        let next = phi.eval_exact(&current).map_err(|_| Error::Indeterminate {
            modulus: None,
            iterate: Some(n),
        })?;
        seen.insert(current, n);
        current = next;
    }
    Ok(OrbitKind::Undetermined)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::AffinePolyMap;
    use crate::orbit::orbit_census;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn quad(c: i64) -> ProjectiveMorphism {
        AffinePolyMap::quadratic(c).to_morphism()
    }

    fn q(c: &[i64]) -> ProjPointQ {
        ProjPointQ::from_i64s(c).unwrap()
    }

    #[test]
    fn height_examples() {
        assert_eq!(height(&q(&[0, 1])), 0.0);
        assert!((height(&q(&[26, 1])) - 26f64.ln()).abs() < 1e-15);
        assert!((height(&q(&[3, 2])) - 3f64.ln()).abs() < 1e-15);
        assert!((height(&q(&[26, 1])) - 3.2581).abs() < 1e-4);
    }

    #[test]
    fn big_log_large_values() {
        let n = BigUint::one() << 5000u32;
        assert!((big_log(&n) - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        let m: BigUint = (BigUint::from(3u32)).pow(2000);
        assert!((big_log(&m) / (2000.0 * 3f64.ln()) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn height_is_scale_invariant() {
        for raw in [[6i64, 4], [-9, 12], [26, 1]] {
            let base = height(&q(&raw));
            for k in [-1i64, 2, 7, -13] {
                let scaled: Vec<i64> = raw.iter().map(|c| c * k).collect();
                assert_eq!(height(&q(&scaled)), base);
            }
        }
    }

    #[test]
    fn growth_fit_z2_plus_1() {
        let fit = height_growth_check(&quad(1), &q(&[0, 1]), 5, 1.0).unwrap();
        let hs: Vec<f64> = fit.trace.iter().map(|t| t.h).collect();
        let expected = [0.0, 0.0, 2f64.ln(), 5f64.ln(), 26f64.ln(), 677f64.ln()];
        for (a, b) in hs.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!((fit.c - 677f64.ln() / 32.0).abs() < 1e-15);
        assert!((fit.c - 0.2036).abs() < 1e-4);
        assert!(fit.holds);
        assert_eq!(fit.d, 2.0);
    }

    #[test]
    fn growth_fit_exact_powers_and_fixed_points() {
        let fit = height_growth_check(&quad(0), &q(&[2, 1]), 8, 1.0).unwrap();
        assert!(fit.c.abs() < 1e-12, "c = {}", fit.c);
        // 2 is fixed by z^2 - 2: constant heights need no constant
        let fit = height_growth_check(&quad(-2), &q(&[2, 1]), 6, 1.0).unwrap();
        assert_eq!(fit.c, 0.0);
        assert!(fit.trace.iter().all(|t| t.h == 2f64.ln()));
    }

    #[test]
    fn cross_difference_examples() {
        assert_eq!(cross_difference(&q(&[1, 2]), &q(&[3, 5])).unwrap(), BigUint::one());
        assert_eq!(cross_difference(&q(&[0, 1]), &q(&[5, 1])).unwrap(), BigUint::from(5u32));
        assert_eq!(
            cross_difference(&q(&[1, 0, 0]), &q(&[0, 1, 0])).unwrap(),
            BigUint::one()
        );
        assert!(matches!(
            cross_difference(&q(&[2, 3]), &q(&[-4, -6])),
            Err(Error::DegeneratePair)
        ));
    }

    #[test]
    fn distance_inequality_examples() {
        assert!(distance_inequality_check(&q(&[0, 1]), &q(&[5, 1])).unwrap());
        assert!(distance_inequality_check(&q(&[1, 0]), &q(&[0, 1])).unwrap());
        assert!(distance_inequality_check(&q(&[1, 1]), &q(&[1, 1])).is_err());
    }

    #[test]
    fn distance_inequality_random_plane_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut checked = 0;
        while checked < 500 {
            let mut draw = || -> Vec<i64> { (0..3).map(|_| rng.random_range(-1_000_000..=1_000_000)).collect() };
            let (a, b) = (draw(), draw());
            let (Ok(a), Ok(b)) = (ProjPointQ::from_i64s(&a), ProjPointQ::from_i64s(&b)) else {
                continue;
            };
            if a == b {
                continue;
            }
            assert!(distance_inequality_check(&a, &b).unwrap(), "{a} {b}");
            checked += 1;
        }
    }

    #[test]
    fn b_rs_examples() {
        let phi = quad(1);
        let mut orbit = ExactOrbit::new(&phi, q(&[0, 1])).unwrap();
        let b = |o: &mut ExactOrbit, r, s| b_rs(o, r, s).unwrap().to_u64().unwrap();
        assert_eq!(b(&mut orbit, 1, 1), 1);
        assert_eq!(b(&mut orbit, 2, 0), 2);
        assert_eq!(b(&mut orbit, 3, 0), 5);
        assert_eq!(b(&mut orbit, 2, 1), 4);
        assert_eq!(b(&mut orbit, 1, 2), 3);
        assert!(b_rs(&mut orbit, 0, 2).is_err());
    }

    #[test]
    fn b_rs_respects_distance_bound() {
        let phi = quad(1);
        let mut orbit = ExactOrbit::new(&phi, q(&[0, 1])).unwrap();
        for m in 1..=10 {
            for r in 1..=m {
                let s = m - r;
                let b = b_rs(&mut orbit, r, s).unwrap();
                let pts = orbit.computed();
                assert!(big_log(&b) <= distance_bound(&pts[r + s], &pts[s]) + 1e-12);
            }
        }
    }

    #[test]
    fn finite_orbit_is_reported() {
        let phi = quad(-1);
        let mut orbit = ExactOrbit::new(&phi, q(&[0, 1])).unwrap();
        assert!(matches!(
            b_rs(&mut orbit, 2, 0),
            Err(Error::FiniteOrbit { earlier: 0, later: 2 })
        ));
        assert!(d_m(&mut orbit, 2).is_err());
    }

    #[test]
    fn d_m_examples() {
        let phi = quad(1);
        let mut orbit = ExactOrbit::new(&phi, q(&[0, 1])).unwrap();
        assert_eq!(d_m(&mut orbit, 1).unwrap().d, BigUint::one());
        assert_eq!(d_m(&mut orbit, 2).unwrap().d, BigUint::from(2u32));
        let d3 = d_m(&mut orbit, 3).unwrap();
        assert_eq!(d3.d, BigUint::from(60u32));
        assert_eq!(d3.factors.len(), 3);
        assert!((d3.loglog_d().unwrap() - 1.410).abs() < 1e-3);
        assert_eq!(d_m(&mut orbit, 1).unwrap().loglog_d(), None);
    }

    #[test]
    fn d_m_is_order_independent_and_reproducible() {
        let phi = quad(-2);
        let mut orbit = ExactOrbit::new(&phi, q(&[3, 1])).unwrap();
        let a = d_m(&mut orbit, 7).unwrap();
        let reversed = a.factors.values().rev().fold(BigUint::one(), |acc, b| acc * b);
        assert_eq!(reversed, a.d);
        let mut fresh = ExactOrbit::new(&phi, q(&[3, 1])).unwrap();
        assert_eq!(d_m(&mut fresh, 7).unwrap(), a);
    }

    #[test]
    fn dm_equivalence_small_cases() {
        let phi = quad(1);
        let start = q(&[0, 1]);
        let census = orbit_census(&phi, &start, 100).unwrap();
        let mut orbit = ExactOrbit::new(&phi, start).unwrap();
        for m in [1, 3] {
            let report = dm_equivalence_check(&d_m(&mut orbit, m).unwrap(), &census);
            assert!(report.violations.is_empty(), "m = {m}: {report:?}");
        }

        let phi = quad(-2);
        let start = q(&[3, 1]);
        let census = orbit_census(&phi, &start, 500).unwrap();
        let mut orbit = ExactOrbit::new(&phi, start).unwrap();
        let report = dm_equivalence_check(&d_m(&mut orbit, 4).unwrap(), &census);
        assert!(report.holds(), "{report:?}");
    }

    #[test]
    fn dm_equivalence_every_m_brute_force() {
        // independent route: m_p <= m iff some pair of iterates i < j <= m
        // agrees mod p, checked directly on the reduced orbit
        let phi = quad(2);
        let start = q(&[1, 1]);
        let census = orbit_census(&phi, &start, 300).unwrap();
        let mut orbit = ExactOrbit::new(&phi, start.clone()).unwrap();
        orbit.extend_to(8).unwrap();
        for m in 1..=8 {
            let dm = d_m(&mut orbit, m).unwrap();
            for r in &census.records {
                let reduced: Vec<_> = orbit.computed()[..=m].iter().map(|x| x.reduce(r.p)).collect();
                let collides = (0..=m).any(|j| (0..j).any(|i| reduced[i] == reduced[j]));
                assert_eq!(collides, dm.divisible_by(r.p), "p={} m={m}", r.p);
            }
            assert!(dm_equivalence_check(&dm, &census).violations.is_empty());
        }
    }

    #[test]
    fn growth_sequence() {
        let phi = quad(1);
        let mut orbit = ExactOrbit::new(&phi, q(&[0, 1])).unwrap();
        let growth = dm_growth(&mut orbit, 6).unwrap();
        assert_eq!(growth.skipped(), vec![1, 2]);
        let d3 = &growth.points[2];
        assert_eq!((d3.m, d3.num_factors, d3.bits), (3, 3, 6));
        let mut csv = Vec::new();
        growth.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("m,num_factors,bits_of_D,loglogD\n1,1,1,\n2,2,2,\n3,3,6,1.40"));
    }

    #[test]
    fn slope_helper() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 3.0 * i as f64 + 1.0)).collect();
        assert!((least_squares_slope(&pts).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(least_squares_slope(&pts[..1]), None);
    }

    #[test]
    fn loglog_ratio() {
        let census = Census::from_records(vec![crate::orbit::OrbitStats::good(17, 1, 3)], None).unwrap();
        let r = min_loglog_ratio(&census).unwrap();
        assert_eq!(r.p, 17);
        assert!((r.value - 4.0 / 17f64.ln().ln()).abs() < 1e-15);
        assert!((r.value - 3.84).abs() < 0.01);

        let census = orbit_census(&quad(1), &q(&[0, 1]), 10_000).unwrap();
        assert!(min_loglog_ratio(&census).unwrap().value > 0.0);
        let tiny = orbit_census(&quad(1), &q(&[0, 1]), 13).unwrap();
        assert_eq!(min_loglog_ratio(&tiny), None);
    }

    #[test]
    fn classify_examples() {
        assert!(classify_orbit(&quad(1), &q(&[0, 1]), 24).unwrap().is_infinite());
        assert_eq!(
            classify_orbit(&quad(-1), &q(&[0, 1]), 24).unwrap(),
            OrbitKind::Preperiodic { tail: 0, period: 2 }
        );
        for a in [-2, -1, 0, 1, 2] {
            assert!(matches!(
                classify_orbit(&quad(-2), &ProjPointQ::affine(a), 24).unwrap(),
                OrbitKind::Preperiodic { .. }
            ));
        }
        assert!(classify_orbit(&quad(-2), &ProjPointQ::affine(3), 24).unwrap().is_infinite());
        assert_eq!(classify_orbit(&quad(1), &q(&[0, 1]), 2).unwrap(), OrbitKind::Undetermined);
    }
}
