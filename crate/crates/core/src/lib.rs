//! Reconstruction and analysis of molecular interaction networks from
//! coordinate frames under periodic boundary conditions.
//!
//! The pipeline: parse frames ([`frame`]), build the cutoff graph with
//! minimum-image distances ([`netbuild`]), then characterize it through
//! walk-based centralities ([`walkers`]), geodesic centralities ([`paths`]),
//! spectral quantities ([`spectral`]), combinatorial global metrics
//! ([`metrics`]) and the two-phase classification workflow ([`phase`]).

pub mod centrality;
pub mod error;
pub mod frame;
pub mod graph;
pub mod lanczos;
pub mod metrics;
pub mod netbuild;
pub mod paths;
pub mod phase;
pub mod sparse;
pub mod spectral;
pub mod synth;
pub mod walkers;

pub use error::{Error, Result};
pub use frame::Frame;
pub use graph::MolecularGraph;
