//! Exact-arithmetic construction and verification of level-truncated
//! unitary vertex algebras.
//!
//! The crate builds finite-dimensional truncations of standard chiral
//! algebras (Virasoro, Heisenberg, affine sl2, rank-one even lattices,
//! tensor products, unitary subalgebras), stores their structure constants
//! over exact rationals, and checks the defining identities and unitarity
//! data mechanically: Borcherds identity sweeps, invariant bilinear forms,
//! PCT operators, Gram positivity, coset and orbifold decompositions, and
//! floating-point layers for smeared fields.

pub mod error;
pub mod scalar;
pub mod sparse;
pub mod graded;
pub mod json;
pub mod engine;
pub mod model;
pub mod models;
pub mod axioms;
pub mod unitarity;
pub mod subalgebra;
pub mod smeared;

pub use error::VoaError;
pub use graded::GradedVector;
pub use model::{GeneratorInfo, ModelFile, VOAModel};
pub use scalar::Scalar;
pub use sparse::SparseMatrix;
pub use subalgebra::Subalgebra;
