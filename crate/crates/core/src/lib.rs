//! Exact statistics of D, the sum of edge lengths of a graph whose vertices
//! are placed in a uniformly random linear arrangement.
//!
//! The crate covers the closed-form first and second moments and variance
//! of D ([`moments`]), their expectations over random-graph ensembles
//! ([`ensembles`]), cheap bounds on the extreme values of D ([`bounds`]),
//! significance statistics for an observed D ([`significance`]) and a
//! brute-force [`oracle`] that checks all of it by enumeration.

pub mod bounds;
pub mod conllu;
pub mod ensembles;
pub mod error;
pub mod exact;
pub mod fixture;
pub mod graph;
pub mod io;
pub mod moments;
pub mod montecarlo;
pub mod oracle;
pub mod report;
pub mod significance;

pub use error::{Error, Result};
pub use exact::ExactScalar;
pub use graph::{Graph, GraphStats, LinearArrangement, SpecialGraph};
pub use moments::MomentsReport;
