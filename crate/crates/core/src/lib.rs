//! Exact certification of Bott vanishing for stable GIT quotients
//! (ℙ¹)ⁿ//PGL₂.
//!
//! Everything here is computed over the rationals with no floating point:
//! the invariant Koszul complexes of a polarization are assembled as explicit
//! sparse matrices between bases of SL₂-invariants, their cohomology ranks
//! are taken with fraction-free elimination, and the results are cross-checked
//! against a Plücker-graph straightening calculus and GIT stability
//! combinatorics.

pub mod complexes;
pub mod graphs;
pub mod invariants;
pub mod linalg;
pub mod poly;
pub mod stability;

pub use complexes::{
    build_f, build_fbar, check_fbar_exactness, check_splitting_diagram, check_tj_surjective,
    cohomology_dims, verify_bott, BottReport, ChainComplex,
};
pub use graphs::{
    enumerate_standard, find_odd_cycle, find_two_coloring, normalize, straighten, t1_move,
    to_polynomial, tprime_move, GraphElement, Tableau, TwoColoring,
};
pub use invariants::{invariant_basis, invariant_dim, InvariantBasis};
pub use linalg::{Rational, SparseMatrix, Vector};
pub use poly::{
    apply_e, apply_f, apply_h, evaluate, plucker, s_section, split_symmetric, subst0, Monomial,
    Multidegree, Polynomial, Var,
};
pub use stability::{
    fixed_point_weight_report, has_strictly_semistable, scan_degree_claim, strata, Polarization,
    ScanReport, Stratum, WeightReport,
};

/// Errors shared by all modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("self-loop: Plücker minor p_{{{0}{0}}} is zero")]
    SelfLoop(usize),
    #[error("polarization {0:?} has a strictly semistable locus")]
    StrictlySemistable(Vec<i64>),
    #[error("degree sum {0} is odd; use the even rescaling of the polarization")]
    OddDegreeSum(i64),
    #[error("polynomial is not an invariant of the expected multidegree: {0}")]
    NotInvariant(String),
    #[error("missing assignment for variable {0}")]
    MissingAssignment(String),
    #[error("invalid polarization: {0}")]
    InvalidPolarization(String),
    #[error("too many factors for stratum enumeration: n = {0} > 20")]
    TooManyFactors(usize),
    #[error("{0} expects vertex 0 to have degree {1}")]
    CentralDegree(&'static str, usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cache I/O: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
