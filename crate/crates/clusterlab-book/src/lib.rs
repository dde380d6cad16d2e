//! Doc-test shim for the guide in `book/`.
//!
//! Each module's documentation is one chapter, included verbatim, so
//! `cargo test` compiles and runs every ```rust block the book shows. If a
//! chapter drifts from the library's API, this crate stops building.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/growth-process.md")]
pub mod growth_process {}

#[doc = include_str!("../../../book/src/attachment-tree.md")]
pub mod attachment_tree {}

#[doc = include_str!("../../../book/src/spanning-structures.md")]
pub mod spanning_structures {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}

#[doc = include_str!("../../../book/src/command-line.md")]
pub mod command_line {}
