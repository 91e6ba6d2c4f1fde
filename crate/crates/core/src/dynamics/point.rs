use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::primes::inv_mod;

/// A point of projective space over Q in coprime integer coordinates whose
/// first nonzero coordinate is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPointQ {
    coords: Vec<BigInt>,
}

impl ProjPointQ {
    /// Divides out the gcd and fixes the sign. Idempotent.
    pub fn normalize(raw: Vec<BigInt>) -> Result<Self> {
        let mut coords = raw;
        let g = coords.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            return Err(Error::InvalidPoint);
        }
        let negative = coords
            .iter()
            .find(|c| !c.is_zero())
            .is_some_and(|c| c.sign() == Sign::Minus);
        if !g.is_one() {
            for c in coords.iter_mut() {
                *c /= &g;
            }
        }
        if negative {
            for c in coords.iter_mut() {
                *c = -&*c;
            }
        }
        Ok(ProjPointQ { coords })
    }

    pub fn from_i64s(raw: &[i64]) -> Result<Self> {
        Self::normalize(raw.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The point `[a : 1]` of the projective line, normalized.
    pub fn affine(a: impl Into<BigInt>) -> Self {
        Self::normalize(vec![a.into(), BigInt::one()]).expect("second coordinate is nonzero")
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// Projective dimension `N` (the point has `N + 1` coordinates).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> BigInt {
        self.coords
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn reduce(&self, p: u64) -> ProjPointFp {
        reduce_point(self, p)
    }
}

impl fmt::Display for ProjPointQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// A point of projective space over `F_p`, scaled so its first nonzero
/// coordinate is 1. Two points are equal iff they are the same projective point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjPointFp {
    p: u64,
    coords: Vec<u64>,
}

impl ProjPointFp {
    /// Canonicalizes `coords` (reduced mod `p` first).
    pub fn new(p: u64, coords: Vec<u64>) -> Result<Self> {
        Self::canonical(p, coords.into_iter().map(|c| c % p).collect())
            .ok_or(Error::InvalidPoint)
    }

    /// Coordinates must already lie in `[0, p)`. Returns `None` if all vanish.
    pub(crate) fn canonical(p: u64, mut coords: Vec<u64>) -> Option<Self> {
        let lead = *coords.iter().find(|&&c| c != 0)?;
        if lead != 1 {
            let inv = inv_mod(lead, p).expect("modulus is prime");
            for c in coords.iter_mut() {
                *c = crate::primes::mul_mod(*c, inv, p);
            }
        }
        Some(ProjPointFp { p, coords })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }
}

impl fmt::Display for ProjPointFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "] mod {}", self.p)
    }
}

/// Reduces a normalized rational point modulo `p`. Coprime coordinates never
/// all vanish, so this is total.
pub fn reduce_point(point: &ProjPointQ, p: u64) -> ProjPointFp {
    let coords = point.coords.iter().map(|c| reduce_bigint(c, p)).collect();
    ProjPointFp::canonical(p, coords).expect("coprime coordinates cannot all vanish mod p")
}

pub(crate) fn reduce_bigint(c: &BigInt, p: u64) -> u64 {
    let r = c.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(raw: &[i64]) -> ProjPointQ {
        ProjPointQ::from_i64s(raw).unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(q(&[6, 4]).to_string(), "[3,2]");
        assert_eq!(q(&[0, -5]).to_string(), "[0,1]");
        assert_eq!(q(&[26, 1]).to_string(), "[26,1]");
        assert_eq!(q(&[-4, 6, -8]).to_string(), "[2,-3,4]");
        assert!(matches!(
            ProjPointQ::from_i64s(&[0, 0]),
            Err(Error::InvalidPoint)
        ));
    }

    #[test]
    fn normalize_is_idempotent_and_scale_invariant() {
        for raw in [[6i64, 4], [0, -5], [26, 1], [-9, 12], [7, 0]] {
            let base = q(&raw);
            assert_eq!(ProjPointQ::normalize(base.coords().to_vec()).unwrap(), base);
            for k in [1i64, -1, 2, -2, 7] {
                let scaled: Vec<i64> = raw.iter().map(|c| c * k).collect();
                assert_eq!(q(&scaled), base);
            }
        }
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(q(&[26, 1]).reduce(5).coords(), &[1, 1]);
        assert_eq!(q(&[3, 2]).reduce(3).coords(), &[0, 1]);
        assert_eq!(q(&[5, 26]).reduce(5).coords(), &[0, 1]);
        assert_eq!(q(&[-1, 1]).reduce(7).coords(), &[1, 6]);
        assert_eq!(ProjPointQ::affine(-3).to_string(), "[3,-1]");
    }

    #[test]
    fn canonical_fp_points_identify_projective_classes() {
        let p = 7u64;
        // Enumerate all nonzero vectors of F_7^2 and group by canonical form.
        let mut seen = std::collections::HashMap::new();
        for a in 0..p {
            for b in 0..p {
                if a == 0 && b == 0 {
                    continue;
                }
                let key = ProjPointFp::new(p, vec![a, b]).unwrap();
                seen.entry(key).or_insert_with(Vec::new).push((a, b));
            }
        }
        assert_eq!(seen.len() as u64, p + 1);
        for (key, members) in &seen {
            assert_eq!(members.len() as u64, p - 1, "class of {key}");
            let (a0, b0) = members[0];
            for &(a, b) in members {
                // same class iff the 2x2 determinant vanishes
                assert_eq!((a * b0 + p * p - b * a0) % p, 0);
            }
        }
    }

    #[test]
    fn all_zero_fp_point_rejected() {
        assert!(ProjPointFp::new(5, vec![5, 10]).is_err());
    }
}
