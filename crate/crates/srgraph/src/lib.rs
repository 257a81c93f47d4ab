//! Structural analysis of reaction networks over exact rational arithmetic.
//!
//! Given a reaction network (or any rational matrix), this crate builds the
//! SR graph — the signed, valued bipartite graph with one species vertex per
//! row, one reaction vertex per column and one edge per nonzero entry — and
//! decides, from structure alone, properties that rule out multiple
//! equilibria:
//!
//! * cycle enumeration and classification (parity, stoichiometry value),
//! * Condition (*): every e-cycle is an s-cycle and no two e-cycles have
//!   S-to-R intersection,
//! * sign nonsingularity, sign singularity and signed determinants of all
//!   square submatrices,
//! * the SSD property (every square submatrix sign nonsingular or singular),
//!   which makes the with-outflows system injective for any kinetics.
//!
//! The graph-side and matrix-side verdicts are connected by theorems, and
//! the [`oracle`] module cross-validates those connections on seeded random
//! instances. All arithmetic is exact; there is no floating point anywhere
//! in the analysis paths.
//!
//! ```
//! use srgraph::{analyze, AnalysisOptions, AnalysisSubject, ReactionNetwork};
//! use srgraph::report::Conclusion;
//!
//! let net = ReactionNetwork::parse("D <-> A + B + C\nE <-> A + B + C\nF <-> A + B")?;
//! let result = analyze(&AnalysisSubject::Network(net), &AnalysisOptions::default());
//!
//! // The matrix is SSD, so multiple equilibria are ruled out, even though
//! // the graph-side sufficient condition fails on this network.
//! assert!(result.report.ssd.as_ref().unwrap().holds);
//! assert!(!result.report.condition_star.as_ref().unwrap().holds);
//! assert_eq!(result.report.conclusion, Conclusion::InjectiveWithOutflows);
//! # Ok::<(), srgraph::network::NetworkParseError>(())
//! ```

#![forbid(unsafe_code)]

pub mod cycle;
pub mod graph;
pub mod matrix;
pub mod network;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod terms;

pub use cycle::{
    check_condition_star, enumerate_cycles, Cycle, ConditionStarVerdict, Parity,
};
pub use graph::{Edge, SRGraph, Vertex};
pub use matrix::{StoichMatrix, SubmatrixSelector, DEFAULT_SUBMATRIX_BUDGET};
pub use network::ReactionNetwork;
pub use rational::{Rational, Sign};
pub use report::{analyze, AnalysisOptions, AnalysisReport, AnalysisSubject};
