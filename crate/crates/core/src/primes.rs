//! Prime tables and arithmetic in `Z/pZ` for word-sized primes.

use std::fmt;
use std::ops::{Add, Mul};

use crate::error::{Error, Result};

const SEGMENT_LEN: usize = 1 << 15;

/// All primes up to a limit, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

/// Segmented sieve of Eratosthenes. Working memory is one segment plus the
/// base primes up to `sqrt(limit)`.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::EmptyTable { limit });
    }
    let root = isqrt(limit);
    let base = small_sieve(root);
    let mut primes = base.clone();

    let mut low = root + 1;
    let mut mark = vec![true; SEGMENT_LEN];
    while low <= limit {
        let high = limit.min(low + SEGMENT_LEN as u64 - 1);
        let len = (high - low + 1) as usize;
        mark[..len].fill(true);
        for &q in &base {
            let mut start = q * q;
            if start < low {
                start = low.div_ceil(q) * q;
            }
            let mut j = start;
            while j <= high {
                mark[(j - low) as usize] = false;
                j += q;
            }
        }
        primes.extend(
            mark[..len]
                .iter()
                .enumerate()
                .filter(|(_, &is_prime)| is_prime)
                .map(|(i, _)| low + i as u64),
        );
        low = high + 1;
    }

    Ok(PrimeTable { limit, primes })
}

fn small_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut is_prime = vec![true; n + 1];
    is_prime[0] = false;
    is_prime[1] = false;
    let mut i = 2;
    while i * i <= n {
        if is_prime[i] {
            for j in (i * i..=n).step_by(i) {
                is_prime[j] = false;
            }
        }
        i += 1;
    }
    is_prime
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u64)
        .collect()
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// The `k`-th prime, 1-based (`nth(1) == 2`).
    pub fn nth(&self, k: usize) -> Option<u64> {
        k.checked_sub(1).and_then(|i| self.primes.get(i).copied())
    }

    /// Primes `<= x`, as a prefix of the table.
    pub fn up_to(&self, x: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= x);
        &self.primes[..end]
    }

    /// Number of primes `<= x`; `x` must not exceed the table limit.
    pub fn count_up_to(&self, x: u64) -> usize {
        self.up_to(x).len()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }
}

/// An element of `Z/pZ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: u64, modulus: u64) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        Residue {
            value: value % modulus,
            modulus,
        }
    }

    pub fn from_i64(value: i64, modulus: u64) -> Self {
        Residue::new(value.rem_euclid(modulus as i64) as u64, modulus)
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn pow(self, exp: u64) -> Residue {
        mod_pow(self, exp)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(self) -> Option<Residue> {
        inv_mod(self.value, self.modulus).map(|value| Residue {
            value,
            modulus: self.modulus,
        })
    }
}

impl Mul for Residue {
    type Output = Residue;

    fn mul(self, other: Residue) -> Residue {
        debug_assert_eq!(self.modulus, other.modulus);
        Residue {
            value: mul_mod(self.value, other.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl Add for Residue {
    type Output = Residue;

    fn add(self, other: Residue) -> Residue {
        debug_assert_eq!(self.modulus, other.modulus);
        Residue {
            value: add_mod(self.value, other.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

/// Square-and-multiply exponentiation.
pub fn mod_pow(base: Residue, mut exp: u64) -> Residue {
    let p = base.modulus;
    let mut acc = 1 % p;
    let mut b = base.value;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        exp >>= 1;
    }
    Residue {
        value: acc,
        modulus: p,
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= p {
        s.wrapping_sub(p)
    } else {
        s
    }
}

/// Inverse of `a` modulo `p` by the extended Euclidean algorithm.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(p as i128) as u64)
}
