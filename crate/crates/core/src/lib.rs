//! Exact arithmetic for two families of `SL(4)` representations of the
//! figure-eight knot group, with certificates for integral traces, an
//! invariant Hermitian form, specialization at quadratic units and Zariski
//! density.
//!
//! Modules build on each other roughly in this order: [`ring`] and
//! [`matrix`] for coefficients, [`words`] for the free group, [`rep`] for
//! the families, then [`tracecert`], [`form`], [`numfield`] and [`density`].
//! [`modp`] holds the word-sized prime-field helpers used for screening.

pub mod density;
pub mod form;
pub mod matrix;
pub mod modp;
pub mod numfield;
pub mod rep;
pub mod ring;
pub mod tracecert;
pub mod words;

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/words.md")]
    struct Words;
    #[doc = include_str!("../../../book/src/representations.md")]
    struct Representations;
    #[doc = include_str!("../../../book/src/traces.md")]
    struct Traces;
    #[doc = include_str!("../../../book/src/form.md")]
    struct Form;
    #[doc = include_str!("../../../book/src/specialization.md")]
    struct Specialization;
    #[doc = include_str!("../../../book/src/density.md")]
    struct Density;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
