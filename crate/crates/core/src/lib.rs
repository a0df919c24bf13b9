//! Rapidly branching graphs: generators for the block and antitree families,
//! Laplacian spectra on Dirichlet truncations, isoperimetric constants,
//! volume growth and stochastic incompleteness certificates.
//!
//! Every quantity is computed on a finite truncation; the reliable core of a
//! truncation is the set of vertices whose full neighbourhood is present.

pub mod cli;
pub mod error;
pub mod generators;
pub mod graph;
pub mod growth;
pub mod io;
pub mod isoperimetry;
pub mod profile;
pub mod spectral;
pub mod stochastic;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{build_graph, Graph, GraphBuilder, Label};
pub use profile::{estimate_rates, DegreeProfile, RateEstimate};
