//! Core library for optimizing hourly Video-on-Demand delivery from cloud,
//! metro-fog and access-fog data centres over an IP-over-WDM transport
//! network.
//!
//! Everything in this crate is pure computation over immutable inputs: the
//! physical topology and shortest lightpath routes ([`topology`]), the
//! transport and data-centre power models ([`power`]), solar generation and
//! battery dynamics ([`energy`]), demand profiles ([`demand`]), the MILP
//! builder with its MPS writer and solution parser ([`milp`]), an independent
//! plan verifier ([`verify`]) and solver-free baselines ([`heuristic`]).
//!
//! File IO, the CLI and the solver subprocess live in the companion
//! `greenvod-cli` crate; this crate is `no_std` (with `alloc`) so the
//! numerical core can be embedded or checked in isolation.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod demand;
pub mod energy;
pub mod heuristic;
pub mod milp;
mod num;
pub mod plan;
pub mod power;
pub mod scenario;
pub mod topology;
pub mod verify;

pub use demand::{DemandProfile, DemandShape};
pub use energy::{EsdParams, EsdState, SolarArray, SolarProfile};
pub use plan::PlacementPlan;
pub use power::{DailyBreakdown, DcTier, PowerParams};
pub use scenario::{AfdcSource, ScenarioConfig, TierSource};
pub use topology::{CoreTopology, GroupId, NodeId, PhysicalPath, SitePlacement};
pub use heuristic::{brute_force, compare_plans, greedy_place, SavingsReport};
pub use verify::{verify_plan, Violation};
