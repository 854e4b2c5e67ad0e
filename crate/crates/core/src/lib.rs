//! Residue currents of complete intersections: exact exterior algebra for the
//! decomposition lemmas, and numerical evaluation of the regularized and
//! Mellin-transform residue integrals on monomial charts.

pub mod decompose;
pub mod error;
pub mod forms;
pub mod integrand;
pub mod integrate;
pub mod jet;
pub mod lambda;
pub mod mellin;
pub mod parse;
pub mod poly;
pub mod quadrature;
pub mod regularize;
pub mod scenarios;
pub mod testforms;

pub use error::{Error, Result};

/// The guide in `book/`, compiled here so its snippets run as doc-tests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../README.md")]
    pub mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/forms.md")]
    pub mod chapter1 {}
    #[doc = include_str!("../../../book/src/decompose.md")]
    pub mod chapter2 {}
    #[doc = include_str!("../../../book/src/testforms.md")]
    pub mod chapter3 {}
    #[doc = include_str!("../../../book/src/mellin.md")]
    pub mod chapter4 {}
    #[doc = include_str!("../../../book/src/regularize.md")]
    pub mod chapter5 {}
    #[doc = include_str!("../../../book/src/blowup.md")]
    pub mod chapter6 {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod chapter7 {}
}
