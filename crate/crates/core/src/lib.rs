//! Rational homotopy toolkit: Sullivan models, derivation complexes and
//! (fibre-restricted) Gottlieb groups computed by exact linear algebra over Q.

pub mod dercx;
pub mod error;
pub mod galgebra;
pub mod invariants;
pub mod model;
pub mod qlinalg;
pub mod toolkit;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/algebra.md")]
    mod algebra {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/derivations.md")]
    mod derivations {}
    #[doc = include_str!("../../../book/src/gottlieb.md")]
    mod gottlieb {}
    #[doc = include_str!("../../../book/src/depth.md")]
    mod depth {}
    #[doc = include_str!("../../../book/src/toral.md")]
    mod toral {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
