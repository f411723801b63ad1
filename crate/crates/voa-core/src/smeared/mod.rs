//! Floating-point analytic layer on top of the exact algebra: test functions
//! on the circle, smeared operators Y(a,f), energy-bound witnesses, locality
//! residuals for commutators of smeared fields, and the single-field module
//! computations (a(f), the symplectic form, modular flow).
//!
//! Everything here is double precision by design; the exact layer supplies
//! the matrices. Reports carry achieved residuals, not bare pass/fail bits.

pub mod energy;
pub mod frame;
pub mod ladder;
pub mod operators;
pub mod testfn;
pub mod wightman;

pub use energy::{goodman_wallach_check, EnergyBoundWitness, GoodmanWallachReport, SampleSpec};
pub use frame::OrthoFrame;
pub use ladder::{BwReport, LadderModule, ModuleVector};
pub use testfn::TestFunction;
pub use wightman::{SmearedField, WightmanReport};
