//! Polynomial ODE initial value problems solved through the roots of
//! infinitesimally perturbed residuals of Taylor-like recipes.

pub mod cpx;
pub mod finder;
pub mod hyper;
pub mod insola;
pub mod parse;
pub mod poly;
pub mod roots;
pub mod transport;

// The guide's snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/residuals.md")]
    mod residuals {}
    #[doc = include_str!("../../../book/src/recipes.md")]
    mod recipes {}
    #[doc = include_str!("../../../book/src/transport.md")]
    mod transport {}
    #[doc = include_str!("../../../book/src/insola.md")]
    mod insola {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
