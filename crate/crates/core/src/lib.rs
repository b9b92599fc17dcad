//! Mechanized descent for `X^(2N) + 2^(2α) 5^(2β) p^(2γ) = Z^5`.
//!
//! The crate is organized the way the argument is:
//!
//! * [`arith`]: gcd, valuations, radicals, integer roots and recognition of
//!   the middle term `2^(2α) 5^(2β) p^(2γ)`.
//! * [`descent`]: the parametrization of primitive `x^2 + y^2 = z^5` by two
//!   quartic forms, with a brute-force completeness oracle.
//! * [`certify`]: every congruence contradiction re-derived by enumerating
//!   residue classes, emitted as line-delimited certificates.
//! * [`newform`]: the seventh-power rewrite, the level formula and the table
//!   of levels without weight-2 newforms.
//! * [`search`]: the exhaustive desk-scale search, and [`cli`] on top.
//!
//! The guide in `book/` walks through each piece; its code listings are
//! compiled and run as doctests of this crate.
//!
//! ```
//! use quintic_descent::descent::{parametrize, UVPair};
//!
//! let s = parametrize(&UVPair::new(1, 2).unwrap());
//! assert_eq!((s.x, s.y, s.z), (41.into(), (-38).into(), 5.into()));
//! ```

pub mod arith;
pub mod certify;
pub mod cli;
pub mod descent;
pub mod error;
pub mod newform;
pub mod search;
mod serde_str;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/arithmetic.md")]
    mod arithmetic {}
    #[doc = include_str!("../../../book/src/parametrization.md")]
    mod parametrization {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
    #[doc = include_str!("../../../book/src/levels.md")]
    mod levels {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
