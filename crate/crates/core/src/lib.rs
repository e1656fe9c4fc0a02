//! Exact derivation and prederivation algebras of Lie algebras.
//!
//! A Lie algebra is given by rational structure constants. The crate computes
//! `Der(g)` and `Pder(g)` as exact solution spaces, decides whether they
//! contain non-singular or only nilpotent maps, and backs every answer with a
//! certificate that can be checked independently.
//!
//! ```
//! use lie_prederiv::catalog::{self, Params};
//! use lie_prederiv::classify::classify;
//!
//! let g = catalog::get("g_7_5", &Params::new())?;
//! let report = classify(&g, 42)?;
//! assert_eq!((report.dim_der, report.dim_pder), (10, 13));
//! assert!(report.admits_nonsingular_prederivation.holds);
//! assert!(!report.admits_nonsingular_derivation.holds);
//! # Ok::<(), lie_prederiv::Error>(())
//! ```
//!
//! The guide in `book/` walks through each module; its code blocks run as
//! doctests of this crate.

pub mod affine;
pub mod algebra;
pub mod catalog;
pub mod classify;
pub mod deriv;
pub mod error;
pub mod filiform;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod rational;

pub use algebra::{AlgebraBuilder, Flag, LieAlgebra};
pub use deriv::{derivation_space, prederivation_space, SolutionSpace, SpaceKind};
pub use error::{Error, Result};
pub use linalg::{RatMatrix, RatVector};
pub use poly::{GenericMatrix, MultiPoly};
pub use rational::Rational;

// Each guide chapter is compiled as a doctest module.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/algebras.md")]
    mod algebras {}
    #[doc = include_str!("../../../book/src/derivations.md")]
    mod derivations {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/filiform.md")]
    mod filiform {}
    #[doc = include_str!("../../../book/src/affine.md")]
    mod affine {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
