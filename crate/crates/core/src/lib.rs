//! Exact tools for Sidon sets, additive bases, and lattice arrangements of
//! discrete simplices.
//!
//! The crate connects two views of the same combinatorial objects:
//!
//! * group side — B_h sets and h-bases in finite Abelian groups, and
//! * lattice side — packings, coverings, and tilings of Z^n by discrete
//!   simplices, difference bodies, and cross-polytopes.
//!
//! Everything is exact: integer matrices are overflow-checked, densities and
//! bound formulas are rationals, and every search result ships as a
//! certificate that the verifiers re-check from scratch.

pub mod bounds;
pub mod catalog;
pub mod construct;
pub mod correspond;
pub mod error;
pub mod group;
pub mod lattice;
pub mod matrix;
pub mod rational;
pub mod render;
pub mod search;
pub mod shapes;
pub mod snf;
pub mod verify;

pub use error::{Error, Result};
pub use group::{element_combine, group_from_lattice, AbelianGroup, GroupElement};
pub use lattice::{hnf, Lattice};
pub use matrix::IntMatrix;
pub use rational::Rat;
pub use search::{Certificate, SearchConfig};
pub use shapes::{PointSet, ShapeSpec};
