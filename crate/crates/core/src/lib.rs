//! Buffer and splitter minimization for AQFP netlists whose clocking lets
//! an edge skip phases.
//!
//! The flow in [`iterate::optimize`] takes a logic netlist of AND, OR and
//! MAJ gates with inverted edges, assigns initial levels with an LP,
//! builds splitter trees with an interval DP, and then alternates level
//! assignment and tree reconstruction while the materialized cost drops.
//! [`verify`] checks a result for phase legality, structure and logical
//! equivalence.
//!
//! ```no_run
//! use aqfp_bsopt::config::PhaseConfig;
//! use aqfp_bsopt::iterate::{optimize, OptimizeOptions};
//! use aqfp_bsopt::netlist::parse_bench;
//!
//! let net = parse_bench(&std::fs::read_to_string("c432.bench").unwrap()).unwrap();
//! let sol = optimize(&net, &PhaseConfig::with_skip(2), &OptimizeOptions::default()).unwrap();
//! println!("{}", sol.cost());
//! ```

pub mod config;
pub mod error;
pub mod lp;
pub mod splitter;
pub mod netlist;
pub mod assign;
pub mod initial;
pub mod iterate;
pub mod report;
pub mod verify;
mod model;
