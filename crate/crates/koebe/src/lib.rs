//! Coin models of planar graphs, Koebe orderings, and generalized coloring
//! numbers.
//!
//! The crate computes circle packings (coin models) of planar triangulations,
//! derives vertex orderings by non-increasing disc radius, evaluates weak and
//! strong reachability metrics (`wcol`, `scol`, `adm`) exactly, and generates
//! geometric lower-bound constructions together with machine-checkable
//! certificates. A density-weighted plane measure and a radius-bucket
//! decomposition provide the diagnostic side.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats, and the command
//! line live in the companion `koebe-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod adm;
pub mod buckets;
pub mod constructions;
pub mod delaunay;
pub mod flow;
pub mod geometry;
pub mod graph;
pub mod math;
pub mod measure;
pub mod packing;
pub mod reach;

pub use geometry::{CoinModel, Disc, Point, ToleranceConfig};
pub use graph::{PlanarGraph, VertexOrdering};
pub use reach::{MetricKind, MetricReport, ReachSets};
