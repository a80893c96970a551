//! Exact flow polynomials of multigraphs.
//!
//! Everything here is exact: graph counts are integers, polynomial
//! coefficients are arbitrary-precision rationals, and every polynomial is
//! computable by at least two independent routes so the routes can be checked
//! against each other. The crate covers:
//!
//! * multigraphs with loops and parallel edges ([`multigraph`]),
//! * orientations, totally cyclic orientations, and Eulerian equivalence
//!   classes ([`orientation`]),
//! * modular and integer flows, including lifting a nowhere-zero modular flow
//!   to a nowhere-zero integer flow ([`flowspace`]),
//! * dense/sparse rational polynomials and exact interpolation ([`polyalg`]),
//! * the counting pipelines and identity checks that tie the pieces together
//!   ([`counting`]).

#![forbid(unsafe_code)]
#![warn(missing_debug_implementations)]

pub mod counting;
pub mod flowspace;
pub mod multigraph;
pub mod orientation;
pub mod polyalg;

use thiserror::Error;

/// Errors surfaced by the library.
///
/// The CLI maps these onto exit codes: `Parse` and `Domain` are caller
/// mistakes (exit 2), `ResourceLimit` means a cap was hit (exit 3), and
/// `Invariant` is an internal consistency failure that should never fire
/// (exit 4).
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input (graph JSON, bitstring, flow vector, rational string).
    #[error("parse error: {0}")]
    Parse(String),

    /// Structurally valid input that violates an operation's precondition.
    #[error("{0}")]
    Domain(String),

    /// An enumeration would exceed a configured cap.
    #[error("resource limit `{name}` exceeded: {what} needs {needed}, cap is {cap}")]
    ResourceLimit {
        name: &'static str,
        what: String,
        needed: u128,
        cap: u128,
    },

    /// Internal invariant violation. Reaching this is a bug.
    #[error("internal invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Resource caps for the enumerating operations.
///
/// Everything in this crate is exponential in the worst case; the caps turn
/// runaway inputs into clean `ResourceLimit` errors instead of hangs. The
/// defaults are sized for desk-scale graphs (|E| around 20 or less).
#[derive(Debug, Clone)]
pub struct Caps {
    /// Largest edge count accepted by orientation/subset enumerations.
    pub max_edges: usize,
    /// Largest number of flows a single enumeration may visit (q^(cycle rank)
    /// and friends).
    pub max_enumeration: u128,
    /// Largest number of edge subsets a subset-sum style pipeline may visit.
    pub max_subsets: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_edges: 20,
            max_enumeration: 10_000_000,
            max_subsets: 1 << 20,
        }
    }
}

impl Caps {
    pub(crate) fn check_edges(&self, edges: usize) -> Result<()> {
        if edges > self.max_edges {
            return Err(Error::ResourceLimit {
                name: "max_edges",
                what: format!("graph with {edges} edges"),
                needed: edges as u128,
                cap: self.max_edges as u128,
            });
        }
        Ok(())
    }

    pub(crate) fn check_enumeration(&self, what: &str, needed: u128) -> Result<()> {
        if needed > self.max_enumeration {
            return Err(Error::ResourceLimit {
                name: "max_enumeration",
                what: what.to_string(),
                needed,
                cap: self.max_enumeration,
            });
        }
        Ok(())
    }

    pub(crate) fn check_subsets(&self, what: &str, needed: u128) -> Result<()> {
        if needed > self.max_subsets {
            return Err(Error::ResourceLimit {
                name: "max_subsets",
                what: what.to_string(),
                needed,
                cap: self.max_subsets,
            });
        }
        Ok(())
    }
}
