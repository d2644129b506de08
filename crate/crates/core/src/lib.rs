//! Topology analysis and attack simulation for payment channel networks.
//!
//! The crate is organised around an immutable [`PcnGraph`] loaded from a
//! `describegraph`-style snapshot. Analyses never mutate their input; attacks
//! and stateful payment runs derive new graphs instead.
//!
//! - [`graph`]: data model, snapshot I/O, components and node removal.
//! - [`topology`]: centralities, clustering, distances, reference graphs,
//!   small-world coefficient and random-failure robustness.
//! - [`powerlaw`]: discrete power-law fitting and bootstrap goodness of fit.
//! - [`payment`]: single-path routing, success ratio, max flow and fee gain.
//! - [`attack`]: exhaustion/isolation, target strategies and attack execution.

pub mod attack;
pub mod graph;
pub mod payment;
pub mod powerlaw;
pub mod rng;
pub mod topology;

pub use graph::{ChannelEdge, Direction, FeePolicy, GraphError, Node, NodeId, PcnGraph};
