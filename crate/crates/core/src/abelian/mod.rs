//! Finitely generated abelian groups and their homomorphisms, computed
//! exactly through integer normal forms.

mod group;
mod hom;
mod lattice;
mod matrix;
mod snf;

pub use group::{iso_class_equal, FgAbGroup, Rank};
pub use hom::{cokernel, element_order, homology_at, is_exact_at, scalar, Exactness, GroupHom};
pub use lattice::{Lattice, Subquotient};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SnfResult};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbelianError {
    #[error("incompatible shapes: {0}")]
    IncompatibleShapes(String),
    #[error("composition g∘f is nonzero")]
    CompositionNonzero,
    #[error("homomorphism is not well defined: {0}")]
    IllDefined(String),
    #[error("not in invariant-factor form: {0}")]
    NotNormalForm(String),
    #[error("boundary lattice is not contained in the cycle lattice")]
    NotSubLattice,
    #[error("infinite-rank arithmetic: {0}")]
    InfiniteRankArithmetic(String),
}
