//! Rump right quasigroups, the involutive set-theoretic Yang-Baxter
//! solutions they define, the homology of those solutions (full, degenerate
//! and normalized), and cocycle invariants of braid closures.
//!
//! ```
//! use ybh_core::{homology, ChainComplex, Coefficients, FiniteMagma, Limits, Theory};
//!
//! let c4 = FiniteMagma::builtin("cyclic:4").unwrap();
//! let cx = ChainComplex::from_magma(&c4).unwrap();
//! let h1 = homology(&cx, 1, Theory::Yb, Coefficients::Integers, Limits::default()).unwrap();
//! assert_eq!(h1.to_string(), "Z + Z_4");
//! ```

pub mod algebra;
pub mod complex;
pub mod error;
pub mod field;
pub mod homology;
pub mod links;
pub mod snf;
pub mod solution;
pub mod sparse;

pub use algebra::{affine_magma, x16, x4, FiniteMagma, IdentityFailure, StructureReport};
pub use complex::{ChainComplex, ComplexReport, Counterexample, SignedTupleSum, Theory, TupleBasis};
pub use error::Error;
pub use field::{FieldElement, GaloisField};
pub use homology::{
    cohomology, homology, is_cyclic_rack, splitting_report, AbelianGroupInvariants, Cochain, CocycleTable, Coefficients,
    Cohomology, HomologyCalculator, Limits, SplittingReport, SplittingRow,
};
pub use links::{
    colorings, invariant, invariant_unchecked, markov_check, parse_braid, propagate, BraidWord, GroupRingElement,
    MarkovReport, WeightTerm,
};
pub use snf::{rank_mod_prime, smith_normal_form, smith_normal_form_mod_prime_power, LocalSmithForm, SmithForm};
pub use solution::{from_rump, to_rump, verify as verify_solution, SolutionReport, YBMap};
pub use sparse::SparseIntMatrix;
