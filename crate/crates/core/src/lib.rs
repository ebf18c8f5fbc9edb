//! Exceptional collections and residual categories on Grassmannians.
//!
//! Diagrams in the `k x (n-k)` box and their cyclic orbits, GL(k) weight
//! calculus, Borel–Weil–Bott, the Kapranov and Fonarev collections,
//! `K_0` with its Euler form, and staircase complexes.
//!
//! The numeric core is generic over an exact [`Scalar`]; the aliases below
//! fix it to [`BigInt`].

pub mod bott;
pub mod collections;
pub mod diagrams;
pub mod error;
pub mod ktheory;
pub mod matrix;
pub mod report;
pub mod scalar;
pub mod schur;
pub mod staircase;

pub use num_bigint::BigInt;

pub use bott::{bott, euler_char, ext_table, BottOutcome, ExtEngine, ExtTable, TwistedSchur};
pub use collections::{
    fenced_block, fonarev, gram, kapranov, primitive_block, CollectionObject, GramMatrix, GramMode,
    LefschetzCollection, Side, Style, Violation,
};
pub use diagrams::{
    cyclic_step, enumerate, non_minimal_upper, orbit_length, orbit_of, residual_rank, theta, BoxedDiagram, Filter,
    Orbit, RankMethod, Rect,
};
pub use error::{Error, Result};
pub use ktheory::{fullness_determinant, residual_report, KClass, KTheory, ResidualReport};
pub use report::{full_report, Report, Verdict};
pub use scalar::Scalar;
pub use schur::{dimension, lr_product, Weight, WeightExpansion};
pub use staircase::{
    appendix_table_check, build_staircase, build_theta_staircase, g48_sequence_check, MembershipLedger,
    StaircaseComplex,
};

pub type Exact = BigInt;
pub type ExactKTheory = KTheory<BigInt>;
pub type ExactKClass = KClass<BigInt>;
pub type ExactExtTable = ExtTable<BigInt>;
pub type ExactExtEngine = ExtEngine<BigInt>;
pub type ExactGram = GramMatrix<BigInt>;
pub type ExactResidualReport = ResidualReport<BigInt>;
