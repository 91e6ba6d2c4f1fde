//! Tail and cycle lengths of an iterated function from a start value.

use std::collections::HashMap;
use std::hash::Hash;

/// Shape of a forward orbit in a finite functional graph: `tail` points before
/// the cycle is entered, then a cycle of length `cycle`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rho {
    pub tail: u64,
    pub cycle: u64,
}

impl Rho {
    /// Number of distinct points visited.
    pub fn len(&self) -> u64 {
        self.tail + self.cycle
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Iterates until a value repeats, remembering every value seen.
pub fn first_repeat<T, E>(start: T, mut step: impl FnMut(&T) -> Result<T, E>) -> Result<Rho, E>
where
    T: Hash + Eq,
{
    let mut seen: HashMap<T, u64> = HashMap::new();
    let mut current = start;
    let mut index = 0u64;
    loop {
        if let Some(&first) = seen.get(&current) {
            return Ok(Rho {
                tail: first,
                cycle: index - first,
            });
        }
        let next = step(&current)?;
        seen.insert(current, index);
        current = next;
        index += 1;
    }
}

/// Brent's algorithm: constant memory, then a second pass for the tail.
pub fn brent<T, E>(start: T, mut step: impl FnMut(&T) -> Result<T, E>) -> Result<Rho, E>
where
    T: Eq + Clone,
{
    let mut power = 1u64;
    let mut lam = 1u64;
    let mut tortoise = start.clone();
    let mut hare = step(&start)?;
    while tortoise != hare {
        if power == lam {
            tortoise = hare.clone();
            power *= 2;
            lam = 0;
        }
        hare = step(&hare)?;
        lam += 1;
    }

    let mut tortoise = start.clone();
    let mut hare = start;
    for _ in 0..lam {
        hare = step(&hare)?;
    }
    let mut mu = 0u64;
    while tortoise != hare {
        tortoise = step(&tortoise)?;
        hare = step(&hare)?;
        mu += 1;
    }
    Ok(Rho {
        tail: mu,
        cycle: lam,
    })
}
