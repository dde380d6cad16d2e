//! Simulation and measurement laboratory for a randomly growing Gaussian
//! cluster process.
//!
//! Points arrive one at a time. Point `i` picks a uniform random
//! predecessor and lands a Gaussian displacement away from it, with
//! per-coordinate standard deviation `i^(-alpha)`. The library generates these
//! clusters reproducibly ([`process`]), analyzes the recursive forest the
//! attachment choices form ([`tree`]), computes Euclidean structure over
//! the points ([`geometry`]), and packages Monte Carlo experiments that
//! measure how radius, spanning-tree length, close-pair counts, and
//! subtree sizes behave as the cluster grows ([`experiments`]).
//!
//! Everything downstream of a seed is deterministic, including the
//! parallel experiment drivers, so any number printed by this crate can be
//! regenerated exactly from the parameters that produced it.
//!
//! # Quick start
//!
//! ```
//! use clusterlab::process::{GrowthConfig, grow};
//!
//! let cluster = grow(&GrowthConfig::new(2, 0.5, 200, 42))?;
//! assert_eq!(cluster.len(), 200);
//!
//! let mst = clusterlab::geometry::emst_fast(cluster.points())?;
//! assert_eq!(mst.edge_count(), 199);
//! // The attachment tree spans the same points, so it cannot be shorter.
//! assert!(cluster.attachment_tree_length() >= mst.total_length);
//! # Ok::<(), clusterlab::Error>(())
//! ```

pub mod error;
pub mod experiments;
pub mod geometry;
pub mod io;
pub mod points;
pub mod process;
pub mod rng;
pub mod tree;

pub use error::{Error, Result};
