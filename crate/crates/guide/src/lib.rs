//! Compiles the code listings of the book in `book/src` as doctests, one
//! module per chapter so a failure points at its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/pencils.md")]
pub mod pencils {}

#[doc = include_str!("../../../book/src/subspaces.md")]
pub mod subspaces {}

#[doc = include_str!("../../../book/src/charts.md")]
pub mod charts {}

#[doc = include_str!("../../../book/src/flows.md")]
pub mod flows {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
