//! Subsemilattices of the full transformation semigroup `T(n)` on `[0, n)`.
//!
//! * [`transform`]: transformations, idempotents, block decompositions, commuting tests.
//! * [`semilattice`]: verified semilattices, their orders, the extremal family `E_t`.
//! * [`reduction`]: anchors, the star map, and the reduction from `n` to `n − 1` points.
//! * [`enumeration`]: commuting graph, maximal-clique search, size spectrum, oracles.
//! * [`report`]: text/JSON/CSV formats.
//!
//! Maps act on the right and compose left to right: `a.then(&b)` applies `a` first.

pub mod bitset;
pub mod enumeration;
pub mod points;
pub mod reduction;
pub mod report;
pub mod semilattice;
pub mod theorem;
pub mod transform;

pub use enumeration::{
    brute_force_subsemilattices, enumerate_maximal_semilattices, max_size_semilattices, spectrum,
    CommutingGraph, EnumerationConfig, EnumerationError, SpectrumReport,
};
pub use points::{PointSet, MAX_POINTS};
pub use reduction::{
    find_anchor, lambda_embed, reduce, star, Anchor, ReductionError, ReductionResult,
};
pub use semilattice::{
    epsilon, is_in_it, make_et, semilattice_of_size, Maximality, PosetRelation, Semilattice,
    SemilatticeError, Violation,
};
pub use transform::{
    enumerate_idempotents, IdempotentDecomposition, TransformError, Transformation,
};
