//! Wallspaces on balls in Cayley graphs, their dual cube complexes, and
//! finite checks of the criteria for a group to act properly on them.
//!
//! The guide in `book/` walks through the pipeline; its snippets are
//! compiled as doc-tests below.

pub mod complex;
pub mod criteria;
pub mod dual;
pub mod fixtures;
pub mod group;
pub mod wallspace;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/walls.md")]
    mod walls {}
    #[doc = include_str!("../../../book/src/dual.md")]
    mod dual {}
    #[doc = include_str!("../../../book/src/complexes.md")]
    mod complexes {}
    #[doc = include_str!("../../../book/src/criteria.md")]
    mod criteria {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
}
