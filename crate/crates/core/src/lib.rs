//! Tariff bargaining between a government and a foreign lobby under
//! majoritarian (single-party) and proportional (coalition) governments.
//!
//! Voters have single-peaked preferences over the tariff rate. A
//! majoritarian government adopts the median peak as its ideal; a coalition
//! adopts the cabinet-weighted ideal of its two parties. The government then
//! bargains with a foreign lobby over the tariff and a monetary transfer, and
//! the outcome is the symmetric Nash bargaining solution.
//!
//! ```
//! use electoral_tariffs::actors::PrCoalition;
//! use electoral_tariffs::bargaining::{solve_pr, solve_smd};
//!
//! let smd = solve_smd(2.0, 0.0)?;
//! let pr = solve_pr(&PrCoalition::new(3.0, 1.0, 0.6)?, 2.0, 0.0)?;
//! assert_eq!((smd.t_star, smd.m_star), (1.0, 2.0));
//! assert!(pr.t_star > smd.t_star && pr.m_star > smd.m_star);
//! # Ok::<(), electoral_tariffs::Error>(())
//! ```

// `!(x > 0.0)` style checks are meant to reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod actors;
pub mod bargaining;
pub mod cli;

pub mod error;
pub mod lab;

pub mod preference;
pub mod scalar;

pub use error::{Error, Result, Violation};

// Runs the guide's code blocks under `cargo test --doc`.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/preferences.md")]
    mod preferences {}
    #[doc = include_str!("../../../book/src/payoffs.md")]
    mod payoffs {}
    #[doc = include_str!("../../../book/src/bargaining.md")]
    mod bargaining {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/comparing.md")]
    mod comparing {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}
