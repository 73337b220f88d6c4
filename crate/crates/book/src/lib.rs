//! The user guide, compiled so that every Rust snippet in it runs as a
//! doc-test. Run `cargo test -p recurrent-aft-book` to check it.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/lattices.md")]
pub mod lattices {}

#[doc = include_str!("../../../book/src/stable-revision.md")]
pub mod stable_revision {}

#[doc = include_str!("../../../book/src/knowledge-bases.md")]
pub mod knowledge_bases {}

#[doc = include_str!("../../../book/src/operator.md")]
pub mod operator {}

#[doc = include_str!("../../../book/src/models.md")]
pub mod models {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
