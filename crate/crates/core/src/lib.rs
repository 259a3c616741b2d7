//! Exact computations for Lie-Yamaguti algebras: axioms, representations,
//! Yamaguti cohomology, abelian extensions and inducibility of automorphism pairs.

pub mod algebra;
pub mod cohomology;
pub mod enumeration;
pub mod error;
pub mod extension;
pub mod inducibility;
pub mod io;
pub mod linalg;
pub mod nilpotent;
pub mod representation;
pub mod sample;
pub mod scalar;

pub use algebra::{AlgebraBuilder, Axiom, AxiomReport, ClassicalData, ClassicalKind, LyAlgebra};
pub use error::{Error, Result};
pub use linalg::{Matrix, SubspaceBasis, Vector};
pub use scalar::{FieldSpec, Scalar};

/// Library version embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
