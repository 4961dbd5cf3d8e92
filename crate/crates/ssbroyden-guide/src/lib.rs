//! The guide's chapters, compiled.
//!
//! Each module below inlines one chapter of the book in `book/src/` as its
//! doc comment, so `cargo test -p ssbroyden-guide --doc` runs every Rust
//! snippet the guide shows. A chapter edit that breaks an example breaks
//! this crate's tests — prose and code cannot drift apart silently.
//!
//! The crate exports nothing; it exists only for its doc tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/quasi-newton.md")]
pub mod quasi_newton {}

#[doc = include_str!("../../../book/src/broyden-family.md")]
pub mod broyden_family {}

#[doc = include_str!("../../../book/src/self-scaling.md")]
pub mod self_scaling {}

#[doc = include_str!("../../../book/src/line-search.md")]
pub mod line_search {}

#[doc = include_str!("../../../book/src/trust-region.md")]
pub mod trust_region {}

#[doc = include_str!("../../../book/src/neural-losses.md")]
pub mod neural_losses {}

#[doc = include_str!("../../../book/src/benchmarks.md")]
pub mod benchmarks {}
