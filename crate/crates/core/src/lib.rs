//! Exact symbolic engine for braiding matrices of roots of unity: Weyl
//! groupoid and root-system enumeration, Cartan roots and type recognition,
//! specialization exponents and the ℘-matrix, the tangent Lie bialgebra with
//! its Manin-triple checks, and the lattice/cell invariants.

pub mod braiding;
pub mod cartan;
pub mod cyclotomic;
pub mod error;
pub mod families;
pub mod geometry;
pub mod groupoid;
pub mod lattice;
pub mod poisson;
pub mod report;

pub use braiding::{BraidingMatrix, DynkinDiagram, ParamBraidingMatrix, ParamEntry, SpecializationPoint};
pub use cyclotomic::{q_number_is_zero, RootOfUnity};
pub use error::{EngineError, Result};
pub use groupoid::Caps;
