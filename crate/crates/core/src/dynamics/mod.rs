//! Self-maps of projective space over Q and their reductions modulo primes.

mod morphism;
mod parse;
mod point;

pub use morphism::{AffinePolyMap, HomPoly, ProjectiveMorphism, ReducedMorphism};
pub use parse::{parse_map, parse_point};
pub use point::{reduce_point, ProjPointFp, ProjPointQ};
