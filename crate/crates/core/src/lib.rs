//! Three-dimensional orthogonal random motions switched at Poisson times.

pub mod error;
pub mod grid;
pub mod occupation;
pub mod ortho3d;
pub mod planar3;
pub mod rng;
pub mod specfun;
pub mod telegraph;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/telegraph.md")]
    mod telegraph {}
    #[doc = include_str!("../../../book/src/octahedron.md")]
    mod octahedron {}
    #[doc = include_str!("../../../book/src/boundary.md")]
    mod boundary {}
    #[doc = include_str!("../../../book/src/planar3.md")]
    mod planar3 {}
    #[doc = include_str!("../../../book/src/occupation.md")]
    mod occupation {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
