//! Exact enumeration and counting for Erdős–Ko–Rado sets of generators on the
//! hyperbolic quadrics Q+(2m+1,q) over small finite fields.

pub mod ekr;
pub mod error;
pub mod formulas;
pub mod gf;
pub mod linalg;
pub mod projgeom;
pub mod quadric;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use gf::{Felt, FieldCtx};
pub use projgeom::{gauss_binom, PVector, ProjectiveSpace, Subspace};
pub use quadric::{ClassLabel, GeneratorSet, QuadricModel};
