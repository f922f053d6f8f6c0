//! Solvers for local distance-constrained bribery.
//!
//! A briber may rewrite each voter's ranking, but only within a per-voter
//! radius under one of three rank metrics (swap, footrule, maximum
//! displacement), paying a per-voter price. The question is whether a
//! designated alternative can be made the unique winner within budget.
//!
//! The crate is `no_std` (it needs `alloc`). Enable the `std` feature to get
//! a wall-clock limit in the exact search.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod election;
mod error;
pub mod flow;
pub mod gadgets;
pub mod instance;
pub mod metrics;
pub mod oracle;
pub mod solvers;

pub use election::{AlternativeSet, Preference, Profile, Ratio, ScoreVector, VotingRule, WeightedMajorityGraph};
pub use error::Error;
pub use instance::{BriberyInstance, BriberyOutcome, Witness};
pub use metrics::Metric;

pub type Result<T> = core::result::Result<T, Error>;
