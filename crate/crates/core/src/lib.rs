//! Rotary-wing aircraft to non-terrestrial network link simulation.
//!
//! The pipeline runs from constellation geometry ([`orbit`]) through the
//! link budget ([`link`]) and rotor-blade blockage ([`blades`]) to a 5G NR
//! frame-level physical layer ([`phy`]). [`scenario`] holds the scenario
//! schema and built-in catalog, and [`runner`] ties the stages together.

// `!(x > 0.0)` style checks are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blades;
pub mod link;
pub mod orbit;
pub mod phy;
pub mod runner;
pub mod scenario;

pub use runner::{resolve_scenario, run, simulate, sweep, RunError, RunOptions, RunReport};
pub use scenario::{builtin, builtin_catalog, ScenarioSpec};
