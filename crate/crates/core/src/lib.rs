//! Measurement-induced non-locality (MIN) for qubit systems.
//!
//! The crate provides
//!
//! * [`qmat`]: small dense complex linear algebra (Kronecker products,
//!   partial traces, Hermitian eigenvalues, Schmidt spectra),
//! * [`states`]: the three- and four-qubit state families and seeded samplers,
//! * [`min`]: closed-form MIN plus a brute-force oracle,
//! * [`monogamy`]: monogamy reports and tangles,
//! * [`montecarlo`]: sampling campaigns, bound verification and exports.
//!
//! ```
//! use minlab::{min::min_2xn, states::bell_state, min::EPSILON_X};
//!
//! let n = min_2xn(&bell_state().density(), EPSILON_X).unwrap();
//! assert!((n.value - 0.5).abs() < 1e-12);
//! ```
//!
//! A longer guide lives in the `book/` directory of the repository.

pub mod error;
pub mod min;
pub mod monogamy;
pub mod montecarlo;
pub mod qmat;
pub mod rng;
pub mod states;

pub use error::{Error, Result};

// The guide's code listings are compiled and run as doc tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/registers.md")]
    mod registers {}
    #[doc = include_str!("../../../book/src/min.md")]
    mod min {}
    #[doc = include_str!("../../../book/src/closed_forms.md")]
    mod closed_forms {}
    #[doc = include_str!("../../../book/src/monogamy.md")]
    mod monogamy {}
    #[doc = include_str!("../../../book/src/campaigns.md")]
    mod campaigns {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
