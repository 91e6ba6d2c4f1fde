//! Orbit statistics of integer self-maps of projective space reduced modulo
//! primes, with exact heights, divisibility integers, finite-range analytic
//! estimators and a random-mapping baseline.

pub mod analytic;
pub mod baseline;
pub mod cycle;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod heights;
pub mod orbit;
pub mod primes;

pub use error::{Error, Result};
