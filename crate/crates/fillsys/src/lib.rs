//! Chord-diagram filling systems and their chain complex.
//!
//! This crate enumerates the k-filling systems of a fixed genus up to
//! rotation, assembles the boundary maps of the resulting chain groups as
//! sparse integer matrices, and decides the structure of the degree-zero
//! cokernel with exact integer linear algebra. The headline computation
//! shows that the cokernel of `U_1 -> U_0` is trivial for genus 2 and 3,
//! which is the combinatorial form of the vanishing of the Steinberg-module
//! coinvariants of the mapping class group.

pub mod chain;
pub mod diagram;
pub mod enumerate;
pub mod error;
pub mod figures;
pub mod filling;
pub mod mm;
pub mod render;
pub mod zlinalg;

pub use chain::{
    assemble_matrix, boundary_terms, compose_check, differential, ChainVector,
    DifferentialMatrix,
};
pub use diagram::{CanonicalClass, ChordWord, CrossingGraph, Label, Matching};
pub use enumerate::{enumerate_basis, enumerate_matchings, Basis, Budget};
pub use error::{Error, Result};
pub use figures::{build_x, build_y, build_z, verify_paper, VerificationReport, VerifyOptions};
pub use filling::{
    boundary_profile, delete_chord, is_disconnected, is_filling_system, BoundaryProfile,
    ChainTerm, FillingSystem,
};
pub use zlinalg::{smith_normal_form, AbelianGroup, SnfResult, SparseIntMatrix};
