//! Random 3-SAT through the lens of matrix-product states.

pub mod boolean;
pub mod dense;
mod linalg;
pub mod magic;
pub mod models;
pub mod mps;
pub mod sat;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/instances.md")]
    mod instances {}
    #[doc = include_str!("../../../book/src/imaginary-time.md")]
    mod imaginary_time {}
    #[doc = include_str!("../../../book/src/flat.md")]
    mod flat {}
    #[doc = include_str!("../../../book/src/magic.md")]
    mod magic {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/boolean.md")]
    mod boolean {}
}
