//! First pages from the two input shapes and assembly of the convergence target.
//!
//! An ideal chain `0 ⊆ I_0 ⊆ … ⊆ I_n = A` contributes `E¹_{p,q} = K_{p+q}(I_p/I_{p−1})`.
//! A sum of ideals `A = Σ_β I_β` contributes the Mayer-Vietoris page
//! `E¹_{p,q} = ⊕_{|J|=p+1} K_q(⋂_{j∈J} I_j)`. Neither shape determines `d¹` from
//! K-theory data alone, so `d¹` is taken from the input and defaults to zero
//! with a visible marker.

mod chain;
mod mv;
mod sweep;
mod target;

pub use chain::{build_ideal_chain_e1, ChainQuotient, IdealChainInput};
pub use mv::{
    build_mv_e1, subsets_of_size, D1Status, IntersectionSpec, Label, MvE1, MvInput, MvInputSpec,
    RunMode, Summand,
};
pub use sweep::{
    truncation_sweep, CapEntry, CellStability, CoverFamily, SweepReport, TargetStability,
};
pub use target::{assemble_target, Assembled, DegreeReport, FiltrationReport, Piece};

use thiserror::Error;

use crate::abelian::AbelianError;
use crate::pages::PageError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssemblyError {
    #[error("missing quotient K-group for p = {p}, s = {s} (not declared zero)")]
    MissingCell { p: usize, s: usize },
    #[error("missing intersection data for J = {0:?}")]
    MissingIntersection(Vec<String>),
    #[error(
        "cap {cap} is too small for an exact run: J = {set:?} beyond the cap is nonzero or unknown"
    )]
    CapTooSmall { cap: usize, set: Vec<String> },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Page(#[from] PageError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}
