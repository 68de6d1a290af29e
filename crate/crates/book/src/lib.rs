//! mdbook cannot run listings that depend on workspace crates, so each
//! chapter is pulled in as the docs of an empty module and `cargo test --doc`
//! runs them. One module per chapter keeps failures traceable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/groups.md")]
pub mod groups {}
#[doc = include_str!("../../../book/src/lie_algebras.md")]
pub mod lie_algebras {}
#[doc = include_str!("../../../book/src/balls.md")]
pub mod balls {}
#[doc = include_str!("../../../book/src/progressions.md")]
pub mod progressions {}
#[doc = include_str!("../../../book/src/profiles.md")]
pub mod profiles {}
#[doc = include_str!("../../../book/src/heisenberg.md")]
pub mod heisenberg {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
