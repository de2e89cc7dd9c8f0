//! Exact Sturmian and standard episturmian words, their richness colorings,
//! and an exhaustive search for monochromatic prefix factorizations.
//!
//! The guide in `book/` walks through the modules in order; its code blocks
//! run as doctests.

pub mod cf;
pub mod cli;
pub mod coloring;
pub mod descent;
pub mod error;
pub mod factors;
pub mod morphism;
pub mod search;
pub mod word;

pub use error::{Error, Result};
pub use morphism::Morphism;
pub use word::{FiniteWord, Letter, WordSpec};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/words.md")]
    struct Words;
    #[doc = include_str!("../../../book/src/factors.md")]
    struct Factors;
    #[doc = include_str!("../../../book/src/morphisms.md")]
    struct Morphisms;
    #[doc = include_str!("../../../book/src/colorings.md")]
    struct Colorings;
    #[doc = include_str!("../../../book/src/search.md")]
    struct Search;
    #[doc = include_str!("../../../book/src/descent.md")]
    struct Descent;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
