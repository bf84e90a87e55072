//! Task-based endogenous growth model.
//!
//! Tasks on `[0, M]` are split at an automation frontier `z*`: capital performs
//! `[0, z*]`, labor performs `(z*, M]`. Output is a CES aggregate scaled by a
//! knowledge stock that accumulates through R&D, boosted by general-purpose
//! technology and dragged down by validation costs. Lock-in frictions penalize
//! large automated sets.
//!
//! The crate is `no_std` (with `alloc`) and contains the pure numerics:
//!
//! * [`profile`] productivity profiles and their closed-form CES kernels
//! * [`production`] single-instant production, wages, labor share, frontier choice
//! * [`dynamics`] forward simulation with a predictor-corrector integrator
//! * [`sweep`] parameter sampling, batched runs, convergence filtering
//! * [`surrogate`] regression trees, random forests, importances, Shapley values
//!
//! File formats, configuration and the command-line front end live in the
//! `taskgrowth` companion crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod dynamics;
mod error;
pub mod math;
pub mod params;
pub mod production;
pub mod profile;
pub mod rng;
pub mod surrogate;
pub mod sweep;

pub use error::{Error, Result};
pub use params::ParamName;
