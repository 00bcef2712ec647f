//! Monogenic potential chains in the upper and lower half-spaces of
//! Euclidean space, their distributional boundary values on `R^m`, and the
//! machinery to check the resulting hyperfunction representations.
//!
//! The crate is `no_std` with `alloc`. Everything is pure computation on
//! `f64`; IO, parallelism and the command line live in the `monopot` crate.

#![no_std]

extern crate alloc;

pub mod clifford;
pub mod distributions;
pub mod error;
pub mod hyperfunctions;
pub mod potentials;
pub mod quadrature;
pub mod special;
pub mod terms;

pub use clifford::{AlgebraContext, AxialValue, Multivector, Point};
pub use distributions::{
    BoundaryDistribution, Coeff, Family, GaussPoly, PointKind, PointPiece, RadialPiece, Series,
    Side,
};
pub use error::{Error, Result};

pub use hyperfunctions::{
    Applicability, JumpReport, JumpRow, Prefactor, QuadratureConfig, Relation, RepresentationEntry,
};
pub use potentials::{Component, PotentialId, Potentials};
pub use quadrature::AngularScheme;
pub use terms::{CanonicalTerm, TermSum};
