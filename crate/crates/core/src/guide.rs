//! The rendered user guide, embedded chapter by chapter.
//!
//! Each submodule's documentation is one chapter of the book under
//! `book/src/`, included verbatim, so every code block in the guide compiles
//! and runs as a doc-test and can never drift from the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/chamber.md")]
pub mod chamber {}

#[doc = include_str!("../../../book/src/counting.md")]
pub mod counting {}

#[doc = include_str!("../../../book/src/dirichlet.md")]
pub mod dirichlet {}

#[doc = include_str!("../../../book/src/tauberian.md")]
pub mod tauberian {}

#[doc = include_str!("../../../book/src/numberfield.md")]
pub mod numberfield {}

#[doc = include_str!("../../../book/src/pipeline.md")]
pub mod pipeline {}
