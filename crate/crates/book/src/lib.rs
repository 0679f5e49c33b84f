//! The guide's chapters, compiled as doc comments so every snippet runs as a doctest.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/reduction.md")]
pub mod reduction {}
#[doc = include_str!("../../../book/src/places.md")]
pub mod places {}
#[doc = include_str!("../../../book/src/congruence.md")]
pub mod congruence {}
#[doc = include_str!("../../../book/src/parity.md")]
pub mod parity {}
#[doc = include_str!("../../../book/src/root_numbers.md")]
pub mod root_numbers {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
