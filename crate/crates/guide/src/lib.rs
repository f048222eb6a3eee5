//! Guide chapters compiled as doc tests.
//!
//! Each chapter of `book/src` is a module here, so `cargo test` runs every
//! snippet in the book and a failing test names the chapter it came from.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/grammars.md")]
pub mod grammars {}
#[doc = include_str!("../../../book/src/terms.md")]
pub mod terms {}
#[doc = include_str!("../../../book/src/axioms.md")]
pub mod axioms {}
#[doc = include_str!("../../../book/src/cfg.md")]
pub mod cfg {}
#[doc = include_str!("../../../book/src/acg.md")]
pub mod acg {}
#[doc = include_str!("../../../book/src/compare.md")]
pub mod compare {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
