//! Exact arithmetic for integral lattices given by Gram matrices:
//! characteristic vectors, the short-vector dichotomy for unimodular forms,
//! and the intersection-form bookkeeping of the moduli-space argument for
//! negative definite 4-manifolds.
//!
//! All arithmetic is over [`num_bigint::BigInt`] and
//! [`num_rational::BigRational`]; floating point is used only to guess search
//! bounds that are then verified exactly.

// Index loops read closest to the matrix formulas they implement.
#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod charvec;
pub mod cohomology;
pub mod enumerate;
pub mod gf2;
pub mod json;
pub mod lattice;
pub mod lll;
pub mod manifold;
pub mod matrix;
pub mod report;
pub mod selftest;

pub use catalog::{catalog_get, CatalogEntry, CatalogError, Golden};
pub use charvec::{
    count_unit_vectors, elkies_verdict, min_char_vector, solve_char_coset, CharCoset,
    CharVecError, CharVecResult, ElkiesVerdict, VerdictLabel,
};
pub use enumerate::{
    brute_force_coset, enumerate_coset, EnumConfig, EnumError, EnumQuery, EnumResult, EnumStats,
};
pub use json::{load_gram, load_manifold, parse_gram, parse_manifold, FormatError};
pub use lattice::{Definiteness, GramMatrix, LatticeError, LatticeVector, Parity};
pub use manifold::{
    donaldson_verdict, weitzenbock_bound, ManifoldDescriptor, ManifoldError, ModuliReport,
    ModuliVerdict,
};
pub use report::Report;
