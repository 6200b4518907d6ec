//! Graded convolution algebras of finite groupoids.
//!
//! A finite groupoid with a Haar system carries a convolution `*`-algebra
//! `C_c(G)`. A cocycle `c: G -> Γ` into a discrete group splits every function
//! into homogeneous pieces, and the identity fibre `G_e` is a subgroupoid whose
//! algebra sits inside `C_c(G)` by extension by zero. This crate computes the
//! C*-norms of both algebras through regular representations, builds the
//! Hilbert module `C_c(G)` over `C_c(G_e)`, and provides checks for the
//! isometric inclusion, the restriction contraction, the conditional
//! expectation it induces and the grading axioms of the resulting bundle.
//!
//! Everything here is pure computation on immutable values. IO, file formats
//! and random sampling live in the companion workbench crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod algebra;
pub mod bundle;
pub mod error;
pub mod grading;
pub mod group;
pub mod groupoid;
pub mod haar;
pub mod linalg;
pub mod module;
pub mod rep;

pub use algebra::{ConvolutionAlgebra, GroupoidFunction};
pub use error::{Axiom, AxiomViolation, Error, Result};
pub use grading::{Cocycle, GradedGroupoid, Subgroupoid};
pub use group::{DiscreteGroup, FiniteGroup, GroupElement};
pub use groupoid::{Arrow, FiniteGroupoid, GroupoidParts};
pub use haar::HaarSystem;
pub use num_complex::Complex64;

/// Relative tolerance for identities that hold exactly in exact arithmetic.
pub const ALGEBRAIC_TOL: f64 = 1e-12;

/// Relative tolerance for quantities derived from eigenvalues.
pub const SPECTRAL_TOL: f64 = 1e-9;

/// Gram eigenvalues below this fraction of the largest one are treated as null.
pub const NULL_SPACE_CUTOFF: f64 = 1e-10;
