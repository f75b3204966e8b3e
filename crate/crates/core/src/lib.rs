pub mod boundary;
pub mod builtin;
pub mod error;
pub mod extension;
pub mod linalg;
pub mod quantum_group;
pub mod spec;
pub mod spectrum;
pub mod star_algebra;
pub mod states;
pub mod subalgebra;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/quantum-groups.md")]
    mod quantum_groups {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/boundaries.md")]
    mod boundaries {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    mod spectrum {}
    #[doc = include_str!("../../../book/src/extension.md")]
    mod extension {}
    #[doc = include_str!("../../../book/src/crossed-products.md")]
    mod crossed_products {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
