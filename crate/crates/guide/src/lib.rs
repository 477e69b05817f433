//! Compiles every listing in `book/` as a doctest, one module per chapter,
//! so `cargo test` keeps the book honest.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/moments.md")]
pub mod moments {}

#[doc = include_str!("../../../book/src/kraus.md")]
pub mod kraus {}

#[doc = include_str!("../../../book/src/structures.md")]
pub mod structures {}

#[doc = include_str!("../../../book/src/classicality.md")]
pub mod classicality {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
