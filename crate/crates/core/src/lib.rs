//! Structure of bipartite quantum states: purely entangled and purely
//! separable parts, best separable approximations (BSA) and best PPT
//! approximations (BPPTA).
//!
//! The crate is `no_std` and only needs an allocator. Everything here is a
//! pure function of its inputs; file formats and the command line live in the
//! `sepstruct` companion crate.
//!
//! Module map:
//! - [`linalg`]: dense complex matrices, Hermitian Jacobi eigensolver,
//!   singular values, partial transpose, realignment, Schmidt decomposition.
//! - [`states`]: validated state types and the canonical state families.
//! - [`separability`]: PPT and CCNR criteria, three-valued verdicts, the
//!   mixture (common witness) oracle, separable-interval search along a
//!   family line and the finer-relation decomposition.
//! - [`structure`]: splitting a state into its purely separable and purely
//!   entangled parts.
//! - [`approximations`]: robustness, BSA, BPPTA and boundary sweeps.

#![no_std]

extern crate alloc;

pub mod approximations;
pub mod error;
pub mod linalg;
pub mod options;
pub mod separability;
pub mod states;
pub mod structure;

pub use error::{Error, Invariant, Result};
pub use linalg::{ComplexMatrix, C64};
pub use options::{Criterion, Options};
pub use states::{BipartiteDims, DensityMatrix, FamilyLine, PureState};
