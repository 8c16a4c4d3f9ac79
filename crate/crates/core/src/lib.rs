//! Exact spectral-sequence bookkeeping for K-theory of sums of ideals.
//!
//! The crate is organised bottom-up:
//!
//! - [`abelian`]: finitely generated abelian groups, homomorphisms, Smith
//!   normal form, kernels, cokernels and homology.
//! - [`pages`]: bigraded pages with Bott-periodic `q`, page turning and
//!   convergence for half-plane sequences with exiting differentials.
//! - [`assembly`]: first pages from ideal chains and Mayer-Vietoris
//!   decompositions, filtration reports and truncation sweeps.
//! - [`coarse`]: blocky lattice sets, flasqueness, Roe-algebra K-theory of the
//!   primitive spaces, cover families and a brute-force excision oracle.
//! - [`simplex`]: numeric checks of the cake-piece maps on the standard simplex.

pub mod abelian;
pub mod assembly;
pub mod coarse;
pub mod pages;
pub mod simplex;
