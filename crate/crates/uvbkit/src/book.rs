//! The narrative guide from `book/`, mounted as module documentation so that
//! `cargo test --doc` compiles and runs every code block in it. The book and
//! the API cannot drift apart: a stale snippet fails the build.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/words.md")]
pub mod words {}

#[doc = include_str!("../../../book/src/permutations.md")]
pub mod permutations {}

#[doc = include_str!("../../../book/src/pure.md")]
pub mod pure {}

#[doc = include_str!("../../../book/src/braids.md")]
pub mod braids {}

#[doc = include_str!("../../../book/src/automorphisms.md")]
pub mod automorphisms {}

#[doc = include_str!("../../../book/src/census.md")]
pub mod census {}

#[doc = include_str!("../../../book/src/tss.md")]
pub mod tss {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
