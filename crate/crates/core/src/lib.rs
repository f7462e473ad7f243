//! SNDR-optimal double-sided limiters for memoryless nonlinearities whose
//! output is confined to a fixed dynamic range.
//!
//! A device such as an LED can only emit between a turn-on and a saturation
//! level. For a given input distribution and noise level, the mapping that
//! maximizes the signal-to-noise-and-distortion ratio (SNDR) within that
//! range is a limiter with a specific gain and DC bias. This crate computes
//! those parameters, evaluates the SNDR of arbitrary mappings through the
//! Bussgang decomposition, bounds the channel capacity, builds predistortion
//! tables for real device curves, and ships brute-force oracles that check
//! the optimum independently.
//!
//! ```
//! use sndr_limiter::dist::InputDistribution;
//! use sndr_limiter::solver::{solve_symmetric, uniform_eta_closed_form, Branch};
//!
//! let t = 0.1; // σv² / A², i.e. DSNR = 10 dB
//! let out = solve_symmetric(&InputDistribution::uniform(), t, Branch::Positive).unwrap();
//! let eta = uniform_eta_closed_form(t, Branch::Positive).unwrap();
//! assert!((out.params.eta - eta).abs() < 1e-10);
//! assert_eq!(out.params.beta, 0.5);
//! ```

// `!(x > 0.0)` is used on purpose: it rejects NaN along with the bad range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod capacity;
pub mod dist;
pub mod error;
pub mod interp;
pub mod mapping;
pub mod oracle;
pub mod predistort;
mod quad;
pub mod rootfind;
pub mod solver;

pub use error::{Error, Result};
