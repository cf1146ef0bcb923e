//! Semi-analytic engine and Monte Carlo simulator for a Markovian
//! limit-order-book queue model.
//!
//! The model tracks the volumes at the best bid and best ask as drifted
//! Brownian motions with resets: whenever a queue empties the mid-price
//! moves one half-tick and both volumes restart from (v_sml, v_lrg) or
//! (v_lrg, v_sml). On top of the free dynamics sits a one-shot execution
//! problem: wait until the ask queue accumulates a volume `q`, then trade.
//! The crate computes the first-passage probabilities, the renewal-chain
//! moments of the price change, the hitting number and the execution time,
//! their small-`q` and large-`q` asymptotics, and cross-checks everything
//! against a bridge-corrected Monte Carlo simulator.
//!
//! ```
//! use lobexec::model::{ModelParams, StripGeometry};
//! use lobexec::firstpassage::strip_driftless_closed;
//!
//! let params = ModelParams::new(0.0, 1.0, 3.0, 2.0, 2.0).unwrap();
//! let geom = StripGeometry::new(4.0, &params).unwrap();
//! let triple = strip_driftless_closed((2.0, 2.0), geom.q);
//! assert!((triple.p_ex + triple.p_up + triple.p_dn - 1.0).abs() < 1e-12);
//! ```

pub mod chain;
pub mod cli;
pub mod error;
pub mod firstpassage;
pub mod jet;
pub mod model;
pub mod montecarlo;
pub mod quadrature;

pub use error::{Error, Result};
