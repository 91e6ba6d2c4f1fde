use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::point::{reduce_bigint, ProjPointFp, ProjPointQ};
use crate::error::{Error, Result};
use crate::primes::{add_mod, mul_mod};

/// A homogeneous polynomial with integer coefficients, stored as a sparse
/// term list sorted by exponent vector with like terms merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomPoly {
    nvars: usize,
    degree: u32,
    terms: Vec<(Vec<u32>, BigInt)>,
}

impl HomPoly {
    /// Every exponent vector must have `nvars` entries summing to `degree`.
    pub fn new(nvars: usize, degree: u32, terms: Vec<(Vec<u32>, BigInt)>) -> Result<Self> {
        let mut merged: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (exps, coef) in terms {
            if exps.len() != nvars {
                return Err(Error::invalid(format!(
                    "monomial has {} exponents, expected {nvars}",
                    exps.len()
                )));
            }
            let total: u32 = exps.iter().sum();
            if total != degree {
                return Err(Error::invalid(format!(
                    "monomial of total degree {total} in a form of degree {degree}"
                )));
            }
            *merged.entry(exps).or_insert_with(BigInt::zero) += coef;
        }
        let terms = merged.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(HomPoly {
            nvars,
            degree,
            terms,
        })
    }

    pub fn terms(&self) -> &[(Vec<u32>, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn eval_exact(&self, powers: &[Vec<BigInt>]) -> BigInt {
        let mut acc = BigInt::zero();
        for (exps, coef) in &self.terms {
            let mut term = coef.clone();
            for (var, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term *= &powers[var][e as usize];
                }
            }
            acc += term;
        }
        acc
    }
}

/// A self-map of `P^N` given by `N + 1` integer forms of a common degree.
///
/// Primes dividing denominators cleared at ingestion are carried along and
/// treated as exceptional by the orbit engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveMorphism {
    dim: usize,
    degree: u32,
    polys: Vec<HomPoly>,
    denominator_primes: Vec<u64>,
}

impl ProjectiveMorphism {
    pub fn new(polys: Vec<HomPoly>) -> Result<Self> {
        let Some(first) = polys.first() else {
            return Err(Error::invalid("a morphism needs at least one form"));
        };
        let (nvars, degree) = (first.nvars, first.degree);
        if nvars != polys.len() {
            return Err(Error::invalid(format!(
                "{} forms given for {nvars} variables",
                polys.len()
            )));
        }
        if nvars < 2 {
            return Err(Error::invalid("projective dimension must be at least 1"));
        }
        if degree == 0 {
            return Err(Error::invalid("degree must be at least 1"));
        }
        if polys.iter().any(|f| f.nvars != nvars || f.degree != degree) {
            return Err(Error::invalid("forms must share variable count and degree"));
        }
        if polys.iter().all(HomPoly::is_zero) {
            return Err(Error::invalid("all forms are identically zero"));
        }
        Ok(ProjectiveMorphism {
            dim: nvars - 1,
            degree,
            polys,
            denominator_primes: Vec::new(),
        })
    }

    pub(crate) fn with_denominator_primes(mut self, mut primes: Vec<u64>) -> Self {
        primes.sort_unstable();
        primes.dedup();
        self.denominator_primes = primes;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn polys(&self) -> &[HomPoly] {
        &self.polys
    }

    /// Primes removed when clearing rational coefficients.
    pub fn denominator_primes(&self) -> &[u64] {
        &self.denominator_primes
    }

    pub fn eval_exact(&self, point: &ProjPointQ) -> Result<ProjPointQ> {
        self.check_dim(point.coords().len())?;
        let powers: Vec<Vec<BigInt>> = point
            .coords()
            .iter()
            .map(|x| {
                let mut row = Vec::with_capacity(self.degree as usize + 1);
                row.push(BigInt::one());
                for k in 1..=self.degree as usize {
                    let next = &row[k - 1] * x;
                    row.push(next);
                }
                row
            })
            .collect();
        let values: Vec<BigInt> = self.polys.iter().map(|f| f.eval_exact(&powers)).collect();
        ProjPointQ::normalize(values).map_err(|_| Error::Indeterminate {
            modulus: None,
            iterate: None,
        })
    }

    /// Reduces the coefficients modulo `p` for repeated evaluation.
    pub fn reduce_mod(&self, p: u64) -> ReducedMorphism {
        let polys = self
            .polys
            .iter()
            .map(|f| {
                f.terms
                    .iter()
                    .filter_map(|(exps, c)| {
                        let c = reduce_bigint(c, p);
                        (c != 0).then(|| (exps.clone(), c))
                    })
                    .collect()
            })
            .collect();
        ReducedMorphism {
            p,
            degree: self.degree,
            polys,
        }
    }

    pub fn eval_mod_p(&self, point: &ProjPointFp) -> Result<ProjPointFp> {
        self.check_dim(point.coords().len())?;
        self.reduce_mod(point.modulus()).eval(point)
    }

    fn check_dim(&self, ncoords: usize) -> Result<()> {
        if ncoords != self.dim + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.dim + 1,
                got: ncoords,
            });
        }
        Ok(())
    }

    /// Recognizes the homogenization of a univariate polynomial map.
    pub fn as_affine(&self) -> Option<AffinePolyMap> {
        if self.dim != 1 {
            return None;
        }
        let d = self.degree;
        let last = &self.polys[1];
        if last.terms.len() != 1 || last.terms[0].0 != [0, d] {
            return None;
        }
        let scale = &last.terms[0].1;
        let mut coeffs = vec![BigInt::zero(); d as usize + 1];
        for (exps, c) in &self.polys[0].terms {
            if !(c % scale).is_zero() {
                return None;
            }
            coeffs[exps[0] as usize] = c / scale;
        }
        AffinePolyMap::new(coeffs).ok()
    }
}

impl fmt::Display for ProjectiveMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(affine) = self.as_affine() {
            return write!(f, "{affine}");
        }
        write!(f, "[")?;
        for (i, poly) in self.polys.iter().enumerate() {
            if i > 0 {
                write!(f, " : ")?;
            }
            write_form(f, poly)?;
        }
        write!(f, "]")
    }
}

fn write_form(f: &mut fmt::Formatter<'_>, poly: &HomPoly) -> fmt::Result {
    if poly.terms.is_empty() {
        return write!(f, "0");
    }
    for (i, (exps, c)) in poly.terms.iter().rev().enumerate() {
        let monomial: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(v, &e)| {
                if e == 1 {
                    format!("X{v}")
                } else {
                    format!("X{v}^{e}")
                }
            })
            .collect();
        let monomial = monomial.join("*");
        write_signed_term(f, i == 0, c, &monomial)?;
    }
    Ok(())
}

fn write_signed_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &BigInt,
    monomial: &str,
) -> fmt::Result {
    let sign = if c.is_negative() {
        "-"
    } else if first {
        ""
    } else {
        "+"
    };
    let abs = c.abs();
    if monomial.is_empty() {
        write!(f, "{sign}{abs}")
    } else if abs.is_one() {
        write!(f, "{sign}{monomial}")
    } else {
        write!(f, "{sign}{abs}*{monomial}")
    }
}

/// A morphism with coefficients reduced modulo a prime.
#[derive(Debug, Clone)]
pub struct ReducedMorphism {
    p: u64,
    degree: u32,
    polys: Vec<Vec<(Vec<u32>, u64)>>,
}

impl ReducedMorphism {
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Fails with [`Error::Indeterminate`] when every form vanishes at `point`.
    pub fn eval(&self, point: &ProjPointFp) -> Result<ProjPointFp> {
        let p = self.p;
        let d = self.degree as usize;
        let powers: Vec<Vec<u64>> = point
            .coords()
            .iter()
            .map(|&x| {
                let mut row = Vec::with_capacity(d + 1);
                row.push(1 % p);
                for k in 1..=d {
                    row.push(mul_mod(row[k - 1], x, p));
                }
                row
            })
            .collect();
        let values = self
            .polys
            .iter()
            .map(|terms| {
                terms.iter().fold(0u64, |acc, (exps, c)| {
                    let term = exps
                        .iter()
                        .enumerate()
                        .fold(*c, |t, (v, &e)| mul_mod(t, powers[v][e as usize], p));
                    add_mod(acc, term, p)
                })
            })
            .collect();
        ProjPointFp::canonical(p, values).ok_or(Error::Indeterminate {
            modulus: Some(p),
            iterate: None,
        })
    }
}

/// The polynomial map `z -> c_0 + c_1 z + ... + c_d z^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffinePolyMap {
    coeffs: Vec<BigInt>,
}

impl AffinePolyMap {
    /// `coeffs[k]` is the coefficient of `z^k`; trailing zeros are dropped.
    pub fn new(mut coeffs: Vec<BigInt>) -> Result<Self> {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::invalid("affine map must have degree at least 1"));
        }
        Ok(AffinePolyMap { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `z^2 + c`.
    pub fn quadratic(c: i64) -> Self {
        Self::from_i64s(&[c, 0, 1]).expect("degree 2")
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    /// Homogenizes to `[sum c_k X^k Y^(d-k) : Y^d]` on `P^1`.
    pub fn to_morphism(&self) -> ProjectiveMorphism {
        let d = self.degree();
        let top = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (vec![k as u32, d - k as u32], c.clone()))
            .collect();
        let f0 = HomPoly::new(2, d, top).expect("homogeneous by construction");
        let f1 = HomPoly::new(2, d, vec![(vec![0, d], BigInt::one())]).expect("monomial");
        ProjectiveMorphism::new(vec![f0, f1]).expect("valid affine homogenization")
    }
}

impl fmt::Display for AffinePolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let monomial = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            write_signed_term(f, first, c, &monomial)?;
            first = false;
        }
        Ok(())
    }
}

impl From<AffinePolyMap> for ProjectiveMorphism {
    fn from(map: AffinePolyMap) -> Self {
        map.to_morphism()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::point::reduce_point;

    fn fp(p: u64, c: &[u64]) -> ProjPointFp {
        ProjPointFp::new(p, c.to_vec()).unwrap()
    }

    fn q(c: &[i64]) -> ProjPointQ {
        ProjPointQ::from_i64s(c).unwrap()
    }

    #[test]
    fn eval_mod_p_examples() {
        let phi = AffinePolyMap::quadratic(1).to_morphism();
        assert_eq!(phi.eval_mod_p(&fp(5, &[0, 1])).unwrap(), fp(5, &[1, 1]));
        assert_eq!(phi.eval_mod_p(&fp(5, &[2, 1])).unwrap(), fp(5, &[0, 1]));
        // the point at infinity is fixed by polynomial maps
        assert_eq!(phi.eval_mod_p(&fp(5, &[1, 0])).unwrap(), fp(5, &[1, 0]));
    }

    #[test]
    fn degenerate_model_is_indeterminate() {
        // [X^2, XY]
        let f0 = HomPoly::new(2, 2, vec![(vec![2, 0], BigInt::one())]).unwrap();
        let f1 = HomPoly::new(2, 2, vec![(vec![1, 1], BigInt::one())]).unwrap();
        let phi = ProjectiveMorphism::new(vec![f0, f1]).unwrap();
        for p in [2, 3, 5, 101] {
            assert!(matches!(
                phi.eval_mod_p(&fp(p, &[0, 1])),
                Err(Error::Indeterminate { modulus: Some(m), .. }) if m == p
            ));
        }
        assert!(matches!(
            phi.eval_exact(&q(&[0, 1])),
            Err(Error::Indeterminate { modulus: None, .. })
        ));
    }

    #[test]
    fn eval_exact_examples() {
        let phi = AffinePolyMap::quadratic(1).to_morphism();
        assert_eq!(phi.eval_exact(&q(&[0, 1])).unwrap(), q(&[1, 1]));
        assert_eq!(phi.eval_exact(&q(&[5, 1])).unwrap(), q(&[26, 1]));
        let square = AffinePolyMap::quadratic(0).to_morphism();
        assert_eq!(square.eval_exact(&q(&[3, 2])).unwrap(), q(&[9, 4]));
    }

    #[test]
    fn reduction_commutes_with_evaluation() {
        let primes = crate::primes::sieve_primes(500).unwrap();
        for c in -2..=2 {
            let phi = AffinePolyMap::quadratic(c).to_morphism();
            let mut orbit = vec![q(&[3, 1])];
            for _ in 0..10 {
                let next = phi.eval_exact(orbit.last().unwrap()).unwrap();
                orbit.push(next);
            }
            for &p in primes.primes() {
                let reduced = phi.reduce_mod(p);
                for pair in orbit.windows(2) {
                    let lhs = reduce_point(&pair[1], p);
                    let rhs = reduced.eval(&reduce_point(&pair[0], p)).unwrap();
                    assert_eq!(lhs, rhs, "c={c} p={p}");
                }
            }
        }
    }

    #[test]
    fn morphism_validation() {
        let f = |exps: Vec<u32>| HomPoly::new(2, 2, vec![(exps, BigInt::one())]);
        assert!(f(vec![1, 0]).is_err());
        assert!(HomPoly::new(3, 2, vec![(vec![2, 0], BigInt::one())]).is_err());
        let zero = HomPoly::new(2, 2, vec![]).unwrap();
        assert!(ProjectiveMorphism::new(vec![zero.clone(), zero]).is_err());
        assert!(ProjectiveMorphism::new(vec![f(vec![2, 0]).unwrap()]).is_err());
        assert!(AffinePolyMap::from_i64s(&[5]).is_err());
        assert!(AffinePolyMap::from_i64s(&[5, 0, 0]).is_err());
    }

    #[test]
    fn like_terms_merge() {
        let poly = HomPoly::new(
            2,
            1,
            vec![
                (vec![1, 0], BigInt::from(2)),
                (vec![1, 0], BigInt::from(-2)),
                (vec![0, 1], BigInt::from(3)),
            ],
        )
        .unwrap();
        assert_eq!(poly.terms().len(), 1);
    }

    #[test]
    fn display_round_trips_affine_shape() {
        assert_eq!(AffinePolyMap::quadratic(1).to_string(), "z^2+1");
        assert_eq!(AffinePolyMap::quadratic(-2).to_string(), "z^2-2");
        assert_eq!(AffinePolyMap::quadratic(0).to_string(), "z^2");
        assert_eq!(AffinePolyMap::quadratic(-1).to_morphism().to_string(), "z^2-1");
        assert_eq!(
            AffinePolyMap::from_i64s(&[1, -3, 0, 2]).unwrap().to_string(),
            "2*z^3-3*z+1"
        );
    }
}
